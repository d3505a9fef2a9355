#pragma once

#include "sensrec/tensor.hpp"

namespace sensrec {

/// Relative reconstruction error over the entries selected by `evaluate`
/// (normally the complement of the observation mask):
///   sqrt(sum (x - x_hat)^2) / sqrt(sum x^2).
/// Throws std::invalid_argument when the selection is empty or the truth is
/// identically zero on it.
double error_ratio(const DenseTensor& truth, const DenseTensor& estimate, const ObservationMask& evaluate);

/// Observed entries over all entries.
double sampling_ratio(const ObservationMask& mask);

}  // namespace sensrec
