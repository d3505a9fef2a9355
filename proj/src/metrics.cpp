#include "sensrec/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace sensrec {

double error_ratio(const DenseTensor& truth, const DenseTensor& estimate, const ObservationMask& evaluate) {
    if (truth.shape() != estimate.shape() || truth.shape() != evaluate.shape()) {
        throw ShapeError("error_ratio: truth, estimate and selection must share a shape");
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!evaluate[i]) continue;
        const double d = truth[i] - estimate[i];
        num += d * d;
        den += truth[i] * truth[i];
    }
    if (!(den > 0.0)) throw std::invalid_argument("error_ratio: evaluation set is empty or all-zero");
    return std::sqrt(num) / std::sqrt(den);
}

double sampling_ratio(const ObservationMask& mask) {
    if (mask.size() == 0) return 0.0;
    return static_cast<double>(mask.observed_count()) / static_cast<double>(mask.size());
}

}  // namespace sensrec
