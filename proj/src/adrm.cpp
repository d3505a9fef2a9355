#include "sensrec/adrm.hpp"

#include "sensrec/shrinkage.hpp"

#include <algorithm>

namespace sensrec {

ReconstructionResult adrm_reconstruct(const DenseTensor& data, const ObservationMask& mask,
                                      const SolverConfig& cfg, const IterationObserver& observer) {
    cfg.validate();
    const DenseTensor observed = detail::prepare_observed(data, mask, 2);
    if (observed.order() != 2) throw ShapeError("adrm_reconstruct expects a matrix, got " + to_string(data.shape()));

    ReconstructionResult result;
    result.rho = resolve_rho(observed, mask, cfg.rho);
    const double rho = result.rho;
    const double tau = 1.0 / rho;

    const std::size_t n = observed.size();
    DenseTensor x(observed.shape());
    DenseTensor z(observed.shape());
    DenseTensor u(observed.shape());
    DenseTensor operand(observed.shape());

    double lambda = cfg.lambda0;
    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        for (std::size_t i = 0; i < n; ++i) operand[i] = z[i] - u[i];
        Shrunk shrunk = shrink(operand, tau);

        const double inv_lambda = 1.0 / lambda;
        double misfit = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double b = mask[i] ? 1.0 : 0.0;
            const double xi = shrunk.value[i];
            z[i] = (inv_lambda * observed[i] + rho * (xi + u[i])) / (inv_lambda * b + rho);
            u[i] += xi - z[i];
            if (mask[i]) misfit += (xi - observed[i]) * (xi - observed[i]);
        }

        const double residual = relative_change(shrunk.value, x);
        const double objective = shrunk.nuclear_norm + 0.5 * inv_lambda * misfit;
        x = std::move(shrunk.value);
        result.residual_trace.push_back(residual);
        result.objective_trace.push_back(objective);
        result.iterations = k + 1;
        result.final_lambda = lambda;
        if (observer) observer({k + 1, lambda, x, residual, objective});

        if (lambda == cfg.lambda_min && residual < cfg.tol) {
            result.converged = true;
            break;
        }
        lambda = std::max(cfg.c_lambda * lambda, cfg.lambda_min);
    }

    result.estimate = std::move(x);
    return result;
}

}  // namespace sensrec
