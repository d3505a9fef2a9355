#include "sensrec/masks.hpp"

#include "sensrec/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sensrec {

namespace {

std::size_t rounded_count(double fraction, std::size_t total) {
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
}

// First `k` entries of a seeded partial Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace

void MissingPatternSpec::validate(const Shape& shape) const {
    if (node_axis >= shape.size() || time_axis >= shape.size()) {
        throw std::invalid_argument("missing pattern: node/time axis out of range for shape " + to_string(shape));
    }
    if (node_axis == time_axis) throw std::invalid_argument("missing pattern: node_axis equals time_axis");
    if (const auto* r = std::get_if<RandomMissing>(&kind)) {
        if (!(r->sampling_ratio > 0.0 && r->sampling_ratio <= 1.0)) {
            throw std::invalid_argument("missing pattern: sampling ratio must lie in (0, 1]");
        }
    } else {
        const auto& c = std::get<ConsecutiveMissing>(kind);
        if (!(c.node_fraction > 0.0 && c.node_fraction <= 1.0)) {
            throw std::invalid_argument("missing pattern: node fraction must lie in (0, 1]");
        }
        if (!(c.tail_fraction >= 0.0 && c.tail_fraction < 1.0)) {
            throw std::invalid_argument("missing pattern: tail fraction must lie in [0, 1)");
        }
    }
}

ObservationMask generate_mask(const Shape& shape, const MissingPatternSpec& spec) {
    spec.validate(shape);
    const std::size_t total = element_count(shape);
    Rng rng(spec.seed);

    if (const auto* r = std::get_if<RandomMissing>(&spec.kind)) {
        const std::size_t keep = rounded_count(r->sampling_ratio, total);
        if (keep == 0) throw std::invalid_argument("missing pattern: sampling ratio yields zero observed entries");
        ObservationMask mask(shape, false);
        for (std::size_t i : sample_without_replacement(total, keep, rng)) mask.set(i, true);
        return mask;
    }

    const auto& c = std::get<ConsecutiveMissing>(spec.kind);
    const std::size_t n_nodes = shape[spec.node_axis];
    const std::size_t n_slots = shape[spec.time_axis];
    const std::size_t tail = rounded_count(c.tail_fraction, n_slots);
    const std::size_t first_dead_slot = n_slots - tail;

    std::vector<std::uint8_t> dead(n_nodes, 0);
    for (std::size_t node : sample_without_replacement(n_nodes, rounded_count(c.node_fraction, n_nodes), rng)) {
        dead[node] = 1;
    }

    std::size_t node_stride = 1, time_stride = 1;
    for (std::size_t m = 0; m < spec.node_axis; ++m) node_stride *= shape[m];
    for (std::size_t m = 0; m < spec.time_axis; ++m) time_stride *= shape[m];

    ObservationMask mask(shape, true);
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t node = (i / node_stride) % n_nodes;
        const std::size_t slot = (i / time_stride) % n_slots;
        if (dead[node] && slot >= first_dead_slot) mask.set(i, false);
    }
    if (!mask.any()) throw std::invalid_argument("missing pattern: consecutive pattern removes every entry");
    return mask;
}

double realized_sampling_ratio(const ObservationMask& m) {
    if (m.size() == 0) return 0.0;
    return static_cast<double>(m.observed_count()) / static_cast<double>(m.size());
}

}  // namespace sensrec
