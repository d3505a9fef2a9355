#pragma once

#include "sensrec/solver.hpp"

#include <string_view>
#include <vector>

namespace sensrec {

/// How the shared Z-bar subproblem is solved.
///   exact: ((N/lambda) B + rho) Z = rho (Xbar + U) + (1/lambda) B.T  (true minimizer)
///   paper: ((1/lambda) B + rho) Z = rho (Xbar + U) + (1/(N lambda)) B.T
enum class ZUpdateRule { exact, paper };

ZUpdateRule parse_z_update_rule(std::string_view name);
std::string_view to_string(ZUpdateRule rule);

/// Iterate of the mixture-model solver after collapsing the per-mode duals
/// into a single U.
struct MixtureState {
    std::vector<DenseTensor> components;  // X_i, each low-rank in mode i
    DenseTensor x_bar;                    // mean of the components
    DenseTensor z_bar;
    DenseTensor u;

    static MixtureState zeros(const Shape& shape);
    DenseTensor estimate() const;  // sum of the components
};

/// The same iteration before the duals are collapsed: explicit Z_i and U_i
/// per mode, with Z_i recovered from Z-bar as Z_i = P_i + Zbar - Pbar where
/// P_i = X_i + U_i. Only used to check that the collapse is exact.
struct UncollapsedMixtureState {
    std::vector<DenseTensor> components;
    std::vector<DenseTensor> z;
    std::vector<DenseTensor> u;
    DenseTensor z_bar;

    static UncollapsedMixtureState zeros(const Shape& shape);
};

/// One sharing-form iteration (lambda fixed). `observed` must already be
/// zero off the mask. Returns sum_i alpha_i ||X_i,(i)||_* after the update.
double radmac_step(MixtureState& state, const DenseTensor& observed, const ObservationMask& mask, double rho,
                   double lambda, ZUpdateRule rule, const std::vector<double>& weights);

void radmac_step_uncollapsed(UncollapsedMixtureState& state, const DenseTensor& observed,
                             const ObservationMask& mask, double rho, double lambda, ZUpdateRule rule,
                             const std::vector<double>& weights);

/// Mixture-model completion: minimizes
///   sum_i alpha_i ||X_i,(i)||_* + (1/(2 lambda)) ||B.(sum_i X_i - T)||_F^2
/// from X_i = Zbar = U = 0 with the lambda continuation of SolverConfig.
/// Converged means the lambda floor is reached, the estimate's relative change
/// is below tol and ||Xbar - Zbar||_F / max(1, ||Zbar||_F) is below 10 * tol.
/// Returns sum_i X_i. When `final_state` is given it receives the last iterate.
ReconstructionResult radmac_reconstruct(const DenseTensor& data, const ObservationMask& mask,
                                        const SolverConfig& cfg, ZUpdateRule rule = ZUpdateRule::exact,
                                        const IterationObserver& observer = {},
                                        MixtureState* final_state = nullptr);

}  // namespace sensrec
