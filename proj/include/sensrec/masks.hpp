#pragma once

#include "sensrec/tensor.hpp"

#include <cstdint>
#include <variant>

namespace sensrec {

struct RandomMissing {
    double sampling_ratio = 0.5;  // fraction of entries kept, in (0, 1]
};

/// A fraction of nodes stop reporting: each chosen node loses the last
/// tail_fraction of its time slots, across every other mode.
struct ConsecutiveMissing {
    double node_fraction = 0.1;  // in (0, 1]
    double tail_fraction = 0.0;  // in [0, 1)
};

struct MissingPatternSpec {
    std::variant<RandomMissing, ConsecutiveMissing> kind;
    std::uint64_t seed = 0;
    std::size_t node_axis = 0;  // 0-based mode index
    std::size_t time_axis = 1;

    /// Throws std::invalid_argument if the spec does not fit `shape`.
    void validate(const Shape& shape) const;
};

/// Deterministic in (shape, spec).
ObservationMask generate_mask(const Shape& shape, const MissingPatternSpec& spec);

double realized_sampling_ratio(const ObservationMask& m);

}  // namespace sensrec
