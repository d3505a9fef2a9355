#include "sensrec/knn.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sensrec {

namespace {

struct PairStats {
    double similarity = 0.0;
    double mean_target = 0.0, sd_target = 0.0;
    double mean_other = 0.0, sd_other = 0.0;
};

std::optional<PairStats> pair_stats(const DenseTensor& data, const ObservationMask& mask, std::size_t target,
                                    std::size_t other, std::size_t min_overlap) {
    const std::size_t slots = data.cols();
    const std::size_t nodes = data.rows();
    std::size_t count = 0;
    double sum_a = 0.0, sum_b = 0.0;
    for (std::size_t t = 0; t < slots; ++t) {
        const std::size_t ia = target + t * nodes, ib = other + t * nodes;
        if (mask[ia] && mask[ib]) {
            sum_a += data[ia];
            sum_b += data[ib];
            ++count;
        }
    }
    if (count < min_overlap) return std::nullopt;

    PairStats s;
    s.mean_target = sum_a / static_cast<double>(count);
    s.mean_other = sum_b / static_cast<double>(count);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t t = 0; t < slots; ++t) {
        const std::size_t ia = target + t * nodes, ib = other + t * nodes;
        if (mask[ia] && mask[ib]) {
            const double a = data[ia] - s.mean_target, b = data[ib] - s.mean_other;
            saa += a * a;
            sbb += b * b;
            sab += a * b;
        }
    }
    s.sd_target = std::sqrt(saa / static_cast<double>(count));
    s.sd_other = std::sqrt(sbb / static_cast<double>(count));
    s.similarity = (saa > 0.0 && sbb > 0.0) ? sab / std::sqrt(saa * sbb) : 0.0;
    return s;
}

}  // namespace

void KnnConfig::validate() const {
    if (k < 1) throw std::invalid_argument("knn: k must be at least 1");
    if (min_overlap < 2) throw std::invalid_argument("knn: min_overlap must be at least 2");
}

DenseTensor knn_impute(const DenseTensor& data, const ObservationMask& mask, const KnnConfig& cfg) {
    cfg.validate();
    if (data.order() != 2) throw ShapeError("knn_impute expects a nodes x slots matrix");
    if (data.shape() != mask.shape()) throw ShapeError("knn_impute: mask shape does not match data");
    if (!mask.any()) throw std::invalid_argument("knn_impute: mask has no observed entries");

    const std::size_t nodes = data.rows();
    const std::size_t slots = data.cols();

    double global_sum = 0.0;
    std::size_t global_count = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (mask[i]) {
            global_sum += data[i];
            ++global_count;
        }
    }
    const double global_mean = global_sum / static_cast<double>(global_count);

    DenseTensor out = data;
    for (std::size_t node = 0; node < nodes; ++node) {
        std::size_t node_count = 0;
        double node_sum = 0.0;
        for (std::size_t t = 0; t < slots; ++t) {
            if (mask[node + t * nodes]) {
                node_sum += data(node, t);
                ++node_count;
            }
        }
        if (node_count == slots) continue;
        const double fallback = node_count > 0 ? node_sum / static_cast<double>(node_count) : global_mean;

        // Eligible neighbors, most similar first, lower index on ties.
        std::vector<std::pair<std::size_t, PairStats>> ranked;
        for (std::size_t other = 0; other < nodes; ++other) {
            if (other == node) continue;
            if (auto s = pair_stats(data, mask, node, other, cfg.min_overlap); s && s->similarity > 0.0) {
                ranked.emplace_back(other, *s);
            }
        }
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            return a.second.similarity > b.second.similarity;
        });

        for (std::size_t t = 0; t < slots; ++t) {
            if (mask[node + t * nodes]) continue;
            double sum = 0.0;
            std::size_t used = 0;
            for (const auto& [other, s] : ranked) {
                if (used == cfg.k) break;
                if (!mask[other + t * nodes]) continue;
                const double reading = data(other, t);
                sum += cfg.scale_to_target ? s.mean_target + (s.sd_target / s.sd_other) * (reading - s.mean_other)
                                           : reading;
                ++used;
            }
            out(node, t) = used > 0 ? sum / static_cast<double>(used) : fallback;
        }
    }
    return out;
}

}  // namespace sensrec
