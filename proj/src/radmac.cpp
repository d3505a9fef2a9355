#include "sensrec/radmac.hpp"

#include "sensrec/shrinkage.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sensrec {

namespace {

DenseTensor mean_of(const std::vector<DenseTensor>& parts) {
    DenseTensor out(parts.front().shape());
    const double inv = 1.0 / static_cast<double>(parts.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double sum = 0.0;
        for (const auto& p : parts) sum += p[i];
        out[i] = sum * inv;
    }
    return out;
}

// Solves the Z-bar subproblem entrywise given pbar = Xbar + U.
void update_z_bar(DenseTensor& z_bar, const DenseTensor& pbar, const DenseTensor& observed,
                  const ObservationMask& mask, double rho, double lambda, ZUpdateRule rule, std::size_t modes) {
    const double inv_lambda = 1.0 / lambda;
    const double n = static_cast<double>(modes);
    const double left_scale = rule == ZUpdateRule::exact ? n * inv_lambda : inv_lambda;
    const double right_scale = rule == ZUpdateRule::exact ? inv_lambda : inv_lambda / n;
    for (std::size_t i = 0; i < z_bar.size(); ++i) {
        const double b = mask[i] ? 1.0 : 0.0;
        z_bar[i] = (rho * pbar[i] + right_scale * observed[i]) / (left_scale * b + rho);
    }
}

}  // namespace

ZUpdateRule parse_z_update_rule(std::string_view name) {
    if (name == "exact") return ZUpdateRule::exact;
    if (name == "paper") return ZUpdateRule::paper;
    throw std::invalid_argument("unknown z-update rule '" + std::string(name) + "' (expected paper|exact)");
}

std::string_view to_string(ZUpdateRule rule) { return rule == ZUpdateRule::exact ? "exact" : "paper"; }

MixtureState MixtureState::zeros(const Shape& shape) {
    return {std::vector<DenseTensor>(shape.size(), DenseTensor(shape)), DenseTensor(shape), DenseTensor(shape),
            DenseTensor(shape)};
}

DenseTensor MixtureState::estimate() const {
    DenseTensor sum(components.front().shape());
    for (const auto& c : components) sum += c;
    return sum;
}

UncollapsedMixtureState UncollapsedMixtureState::zeros(const Shape& shape) {
    return {std::vector<DenseTensor>(shape.size(), DenseTensor(shape)),
            std::vector<DenseTensor>(shape.size(), DenseTensor(shape)),
            std::vector<DenseTensor>(shape.size(), DenseTensor(shape)), DenseTensor(shape)};
}

double radmac_step(MixtureState& state, const DenseTensor& observed, const ObservationMask& mask, double rho,
                   double lambda, ZUpdateRule rule, const std::vector<double>& weights) {
    const Shape& shape = observed.shape();
    const std::size_t modes = state.components.size();
    const std::size_t n = observed.size();

    const DenseTensor x_bar_old = mean_of(state.components);
    DenseTensor operand(shape);
    double nuclear = 0.0;
    for (std::size_t m = 0; m < modes; ++m) {
        auto& xm = state.components[m];
        for (std::size_t i = 0; i < n; ++i) operand[i] = xm[i] - x_bar_old[i] + state.z_bar[i] - state.u[i];
        Shrunk s = shrink(unfold(operand, m), weights[m] / rho);
        nuclear += weights[m] * s.nuclear_norm;
        xm = fold(s.value, m, shape);
    }

    state.x_bar = mean_of(state.components);
    update_z_bar(state.z_bar, state.x_bar + state.u, observed, mask, rho, lambda, rule, modes);
    for (std::size_t i = 0; i < n; ++i) state.u[i] += state.x_bar[i] - state.z_bar[i];
    return nuclear;
}

void radmac_step_uncollapsed(UncollapsedMixtureState& state, const DenseTensor& observed,
                             const ObservationMask& mask, double rho, double lambda, ZUpdateRule rule,
                             const std::vector<double>& weights) {
    const Shape& shape = observed.shape();
    const std::size_t modes = state.components.size();

    for (std::size_t m = 0; m < modes; ++m) {
        state.components[m] = fold(svt(unfold(state.z[m] - state.u[m], m), weights[m] / rho), m, shape);
    }

    std::vector<DenseTensor> p(modes);
    for (std::size_t m = 0; m < modes; ++m) p[m] = state.components[m] + state.u[m];
    const DenseTensor p_bar = mean_of(p);
    update_z_bar(state.z_bar, p_bar, observed, mask, rho, lambda, rule, modes);

    for (std::size_t m = 0; m < modes; ++m) {
        state.z[m] = p[m] + state.z_bar - p_bar;
        state.u[m] += state.components[m] - state.z[m];
    }
}

ReconstructionResult radmac_reconstruct(const DenseTensor& data, const ObservationMask& mask,
                                        const SolverConfig& cfg, ZUpdateRule rule, const IterationObserver& observer,
                                        MixtureState* final_state) {
    cfg.validate();
    const DenseTensor observed = detail::prepare_observed(data, mask, 2);
    const auto weights = detail::resolve_mode_weights(cfg.mode_weights, observed.order());

    ReconstructionResult result;
    result.rho = resolve_rho(observed, mask, cfg.rho);

    MixtureState state = MixtureState::zeros(observed.shape());
    DenseTensor estimate(observed.shape());
    double lambda = cfg.lambda0;
    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        const double nuclear = radmac_step(state, observed, mask, result.rho, lambda, rule, weights);
        DenseTensor next = state.estimate();

        double misfit = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            if (mask[i]) misfit += (next[i] - observed[i]) * (next[i] - observed[i]);
        }
        const double residual = relative_change(next, estimate);
        const double objective = nuclear + 0.5 / lambda * misfit;
        estimate = std::move(next);
        result.residual_trace.push_back(residual);
        result.objective_trace.push_back(objective);
        result.iterations = k + 1;
        result.final_lambda = lambda;
        if (observer) observer({k + 1, lambda, estimate, residual, objective});

        const double consensus = frobenius_norm(state.x_bar - state.z_bar) / std::max(1.0, frobenius_norm(state.z_bar));
        if (lambda == cfg.lambda_min && residual < cfg.tol && consensus < 10.0 * cfg.tol) {
            result.converged = true;
            break;
        }
        lambda = std::max(cfg.c_lambda * lambda, cfg.lambda_min);
    }

    result.estimate = std::move(estimate);
    if (final_state) *final_state = std::move(state);
    return result;
}

}  // namespace sensrec
