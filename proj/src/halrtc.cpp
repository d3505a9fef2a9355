#include "sensrec/halrtc.hpp"

#include "sensrec/shrinkage.hpp"

#include <cmath>
#include <stdexcept>

namespace sensrec {

void HalrtcConfig::validate() const {
    if (rho && !(*rho > 0.0 && std::isfinite(*rho))) throw std::invalid_argument("rho must be positive");
    if (max_iters == 0) throw std::invalid_argument("max_iters must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    for (double w : mode_weights) {
        if (!(w > 0.0 && std::isfinite(w))) throw std::invalid_argument("mode weights must be positive");
    }
}

ReconstructionResult halrtc_reconstruct(const DenseTensor& data, const ObservationMask& mask,
                                        const HalrtcConfig& cfg, const IterationObserver& observer) {
    cfg.validate();
    const DenseTensor observed = detail::prepare_observed(data, mask, 2);
    const Shape& shape = observed.shape();
    const std::size_t modes = observed.order();
    const auto weights = detail::resolve_mode_weights(cfg.mode_weights, modes);

    ReconstructionResult result;
    result.rho = resolve_rho(observed, mask, cfg.rho);
    const double rho = result.rho;
    const double inv_modes = 1.0 / static_cast<double>(modes);

    const std::size_t n = observed.size();
    DenseTensor x = observed;
    std::vector<DenseTensor> y(modes, DenseTensor(shape));
    std::vector<DenseTensor> u(modes, DenseTensor(shape));
    DenseTensor operand(shape);

    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        double nuclear = 0.0;
        for (std::size_t m = 0; m < modes; ++m) {
            for (std::size_t i = 0; i < n; ++i) operand[i] = x[i] - u[m][i];
            Shrunk s = shrink(unfold(operand, m), weights[m] / rho);
            nuclear += weights[m] * s.nuclear_norm;
            y[m] = fold(s.value, m, shape);
        }

        DenseTensor x_next(shape);
        for (std::size_t i = 0; i < n; ++i) {
            if (mask[i]) {
                x_next[i] = observed[i];
                continue;
            }
            double sum = 0.0;
            for (std::size_t m = 0; m < modes; ++m) sum += y[m][i] + u[m][i];
            x_next[i] = sum * inv_modes;
        }
        for (std::size_t m = 0; m < modes; ++m) {
            for (std::size_t i = 0; i < n; ++i) u[m][i] += y[m][i] - x_next[i];
        }

        const double residual = relative_change(x_next, x);
        x = std::move(x_next);
        result.residual_trace.push_back(residual);
        result.objective_trace.push_back(nuclear);
        result.iterations = k + 1;
        if (observer) observer({k + 1, 0.0, x, residual, nuclear});

        if (k > 0 && residual < cfg.tol) {
            result.converged = true;
            break;
        }
    }

    result.estimate = std::move(x);
    return result;
}

}  // namespace sensrec
