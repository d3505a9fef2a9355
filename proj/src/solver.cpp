#include "sensrec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sensrec {

void SolverConfig::validate() const {
    if (!(c_lambda > 0.0 && c_lambda < 1.0)) throw std::invalid_argument("c_lambda must lie in (0, 1)");
    if (!(lambda_min > 0.0 && lambda_min <= lambda0 && lambda0 <= 1.0)) {
        throw std::invalid_argument("need 0 < lambda_min <= lambda0 <= 1");
    }
    if (rho && !(*rho > 0.0 && std::isfinite(*rho))) throw std::invalid_argument("rho must be positive");
    if (max_iters == 0) throw std::invalid_argument("max_iters must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    for (double w : mode_weights) {
        if (!(w > 0.0 && std::isfinite(w))) throw std::invalid_argument("mode weights must be positive");
    }
}

double resolve_rho(const DenseTensor& data, const ObservationMask& mask, std::optional<double> rho) {
    if (rho) {
        if (!(*rho > 0.0 && std::isfinite(*rho))) throw std::invalid_argument("rho must be positive");
        return *rho;
    }
    const double sd = masked_std(data, mask);
    if (!(sd > 0.0)) {
        throw std::invalid_argument("cannot derive rho: observed values are constant; pass rho explicitly");
    }
    return 0.1 / sd;
}

double relative_change(const DenseTensor& x_new, const DenseTensor& x_old) {
    double diff = 0.0, base = 0.0;
    for (std::size_t i = 0; i < x_new.size(); ++i) {
        const double d = x_new[i] - x_old[i];
        diff += d * d;
        base += x_old[i] * x_old[i];
    }
    return std::sqrt(diff) / std::max(1.0, std::sqrt(base));
}

namespace detail {

DenseTensor prepare_observed(const DenseTensor& data, const ObservationMask& mask, std::size_t min_order) {
    if (data.shape() != mask.shape()) {
        throw ShapeError("mask shape " + to_string(mask.shape()) + " does not match data " + to_string(data.shape()));
    }
    if (data.order() < min_order) {
        throw std::invalid_argument("solver needs a tensor of order >= " + std::to_string(min_order));
    }
    if (!mask.any()) throw std::invalid_argument("mask has no observed entries");
    return masked(data, mask);
}

std::vector<double> resolve_mode_weights(const std::vector<double>& weights, std::size_t order) {
    if (weights.empty()) return std::vector<double>(order, 1.0);
    if (weights.size() != order) {
        throw std::invalid_argument("mode_weights has " + std::to_string(weights.size()) +
                                    " entries for a tensor of order " + std::to_string(order));
    }
    return weights;
}

}  // namespace detail

}  // namespace sensrec
