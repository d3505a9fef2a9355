#pragma once

#include "sensrec/solver.hpp"

namespace sensrec {

/// ADMM completion of an N-order tensor assumed jointly low-rank in every mode.
///
/// Minimizes sum_i alpha_i ||X_(i)||_* + (1/(2 lambda)) ||B.(X - T)||_F^2 by
/// splitting X into per-mode copies Y_i with scaled duals U_i:
///
///   Y_i <- fold_i(svt(unfold_i(X - U_i), alpha_i/rho))
///   X   <- ((1/lambda) B.T + N rho (mean Y + mean U)) ./ ((1/lambda) B + N rho)
///   U_i <- U_i + Y_i - X
///
/// with the same lambda continuation as adrm_reconstruct. Converged means the
/// lambda floor is reached, the relative change of X is below tol, and the
/// consensus gap max_i ||Y_i - X||_F / max(1, ||X||_F) is below 10 * tol.
/// The objective trace is evaluated at the split variables (nuclear norms of
/// the Y_i, fit of X).
ReconstructionResult admac_reconstruct(const DenseTensor& data, const ObservationMask& mask,
                                       const SolverConfig& cfg, const IterationObserver& observer = {});

/// Consensus gap of the final iterate.
struct AdmacDiagnostics {
    double consensus_residual = 0.0;
};

ReconstructionResult admac_reconstruct(const DenseTensor& data, const ObservationMask& mask,
                                       const SolverConfig& cfg, AdmacDiagnostics& diagnostics,
                                       const IterationObserver& observer = {});

}  // namespace sensrec
