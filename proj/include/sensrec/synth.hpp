#pragma once

#include "sensrec/tensor.hpp"

#include <cstdint>
#include <vector>

namespace sensrec {

/// A * B^T + noise with A (n x r) and B (t x r) standard normal.
DenseTensor synth_lowrank_matrix(std::size_t n, std::size_t t, std::size_t r, std::uint64_t seed,
                                 double noise_sigma = 0.0);

/// Tucker tensor: standard-normal core of extents `ranks`, multiplied in
/// every mode by a factor with orthonormal columns, plus noise.
DenseTensor synth_tucker_tensor(const Shape& shape, const std::vector<std::size_t>& ranks, std::uint64_t seed,
                                double noise_sigma = 0.0);

/// Standard-normal base tensor with extent r in `deficient_mode`, mixed
/// along that mode by an (extent x r) standard-normal matrix. The result has
/// n-rank r in that mode and is generically full rank in the others.
DenseTensor synth_mixture_tensor(const Shape& shape, std::size_t deficient_mode, std::size_t r, std::uint64_t seed);

}  // namespace sensrec
