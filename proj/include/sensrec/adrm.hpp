#pragma once

#include "sensrec/solver.hpp"

namespace sensrec {

/// ADMM rank-minimization completion of a single-attribute (nodes x slots) matrix.
///
/// Minimizes ||X||_* + (1/(2 lambda)) ||B.(X - M)||_F^2 with the splitting
/// X = Z and scaled dual U, starting from Z = U = 0:
///
///   X <- svt(Z - U, 1/rho)
///   Z <- ((1/lambda) B.M + rho (X + U)) ./ ((1/lambda) B + rho)
///   U <- U + X - Z
///   lambda <- max(c_lambda lambda, lambda_min)
///
/// Stops when lambda has bottomed out and the relative change of X falls
/// below tol, or after max_iters.
ReconstructionResult adrm_reconstruct(const DenseTensor& data, const ObservationMask& mask,
                                      const SolverConfig& cfg, const IterationObserver& observer = {});

}  // namespace sensrec
