#pragma once

#include "sensrec/tensor.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace sensrec {

/// Parameters shared by the relaxed ADMM solvers.
///
/// The fit weight 1/(2*lambda) is tightened geometrically: after every
/// iteration lambda <- max(c_lambda * lambda, lambda_min). When rho is unset
/// it is derived as 0.1 / (std of the observed values).
struct SolverConfig {
    double lambda0 = 1.0;
    double c_lambda = 0.25;
    double lambda_min = 1e-6;
    std::optional<double> rho;
    std::size_t max_iters = 500;
    double tol = 1e-6;
    /// Per-mode nuclear-norm weights (tensor solvers only). Empty means all ones.
    std::vector<double> mode_weights;

    void validate() const;
};

struct ReconstructionResult {
    DenseTensor estimate;
    std::size_t iterations = 0;
    bool converged = false;
    double final_lambda = 0.0;
    double rho = 0.0;
    std::vector<double> residual_trace;   // relative change of the estimate, one per iteration
    std::vector<double> objective_trace;  // model objective at the lambda of that iteration
};

/// Snapshot handed to an observer after every iteration.
struct IterationView {
    std::size_t iteration;  // 1-based
    double lambda;          // lambda used during this iteration
    const DenseTensor& estimate;
    double residual;
    double objective;
};

using IterationObserver = std::function<void(const IterationView&)>;

/// Resolves rho for a solve: the explicit value if set, otherwise
/// 0.1 / masked_std. Throws std::invalid_argument if the observed data are
/// constant and no explicit rho was given.
double resolve_rho(const DenseTensor& data, const ObservationMask& mask, std::optional<double> rho);

/// ||x_new - x_old||_F / max(1, ||x_old||_F)
double relative_change(const DenseTensor& x_new, const DenseTensor& x_old);

namespace detail {

/// Shared argument checks; returns data with unobserved entries zeroed.
DenseTensor prepare_observed(const DenseTensor& data, const ObservationMask& mask, std::size_t min_order);

std::vector<double> resolve_mode_weights(const std::vector<double>& weights, std::size_t order);

}  // namespace detail

}  // namespace sensrec
