#include "sensrec/admac.hpp"

#include "sensrec/shrinkage.hpp"

#include <algorithm>
#include <cmath>

namespace sensrec {

ReconstructionResult admac_reconstruct(const DenseTensor& data, const ObservationMask& mask,
                                       const SolverConfig& cfg, AdmacDiagnostics& diagnostics,
                                       const IterationObserver& observer) {
    cfg.validate();
    const DenseTensor observed = detail::prepare_observed(data, mask, 2);
    const Shape& shape = observed.shape();
    const std::size_t modes = observed.order();
    const auto weights = detail::resolve_mode_weights(cfg.mode_weights, modes);

    ReconstructionResult result;
    result.rho = resolve_rho(observed, mask, cfg.rho);
    const double rho = result.rho;
    const double n_rho = static_cast<double>(modes) * rho;
    const double inv_modes = 1.0 / static_cast<double>(modes);

    const std::size_t n = observed.size();
    DenseTensor x(shape);
    std::vector<DenseTensor> y(modes, DenseTensor(shape));
    std::vector<DenseTensor> u(modes, DenseTensor(shape));
    DenseTensor operand(shape);

    double lambda = cfg.lambda0;
    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        double nuclear = 0.0;
        for (std::size_t m = 0; m < modes; ++m) {
            for (std::size_t i = 0; i < n; ++i) operand[i] = x[i] - u[m][i];
            Shrunk s = shrink(unfold(operand, m), weights[m] / rho);
            nuclear += weights[m] * s.nuclear_norm;
            y[m] = fold(s.value, m, shape);
        }

        const double inv_lambda = 1.0 / lambda;
        DenseTensor x_next(shape);
        double misfit = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double y_sum = 0.0, u_sum = 0.0;
            for (std::size_t m = 0; m < modes; ++m) {
                y_sum += y[m][i];
                u_sum += u[m][i];
            }
            const double b = mask[i] ? 1.0 : 0.0;
            const double xi = (inv_lambda * observed[i] + n_rho * (y_sum * inv_modes + u_sum * inv_modes)) /
                              (inv_lambda * b + n_rho);
            x_next[i] = xi;
            if (mask[i]) misfit += (xi - observed[i]) * (xi - observed[i]);
        }
        double gap = 0.0;
        for (std::size_t m = 0; m < modes; ++m) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = y[m][i] - x_next[i];
                u[m][i] += d;
                d2 += d * d;
            }
            gap = std::max(gap, d2);
        }
        const double consensus = std::sqrt(gap) / std::max(1.0, frobenius_norm(x_next));

        const double residual = relative_change(x_next, x);
        const double objective = nuclear + 0.5 * inv_lambda * misfit;
        x = std::move(x_next);
        result.residual_trace.push_back(residual);
        result.objective_trace.push_back(objective);
        result.iterations = k + 1;
        result.final_lambda = lambda;
        if (observer) observer({k + 1, lambda, x, residual, objective});

        diagnostics.consensus_residual = consensus;
        if (lambda == cfg.lambda_min && residual < cfg.tol && consensus < 10.0 * cfg.tol) {
            result.converged = true;
            break;
        }
        lambda = std::max(cfg.c_lambda * lambda, cfg.lambda_min);
    }

    result.estimate = std::move(x);
    return result;
}

ReconstructionResult admac_reconstruct(const DenseTensor& data, const ObservationMask& mask,
                                       const SolverConfig& cfg, const IterationObserver& observer) {
    AdmacDiagnostics ignored;
    return admac_reconstruct(data, mask, cfg, ignored, observer);
}

}  // namespace sensrec
