#pragma once

#include "sensrec/tensor.hpp"

#include <cstddef>

namespace sensrec {

struct KnnConfig {
    std::size_t k = 3;
    std::size_t min_overlap = 5;  // co-observed slots needed before two nodes are comparable
    /// When set, each neighbor's reading is mapped into the target node's
    /// scale (mean + std ratio over the co-observed slots) before averaging.
    /// When clear, raw neighbor readings are averaged.
    bool scale_to_target = true;

    void validate() const;
};

/// Nearest-neighbor imputation of a nodes x slots matrix.
///
/// Similarity between two nodes is the Pearson correlation over their
/// co-observed slots (0 when either side is constant there). An unobserved
/// entry (i, t) is filled from the k most similar nodes with positive
/// similarity that are observed at t, ties going to the lower node index.
/// Without such neighbors it falls back to node i's observed mean, then to
/// the global observed mean. Observed entries pass through unchanged.
DenseTensor knn_impute(const DenseTensor& data, const ObservationMask& mask, const KnnConfig& cfg = {});

}  // namespace sensrec
