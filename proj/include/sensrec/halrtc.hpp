#pragma once

#include "sensrec/solver.hpp"

#include <optional>
#include <vector>

namespace sensrec {

/// HaLRTC has no relaxation weight, so no lambda schedule.
struct HalrtcConfig {
    std::optional<double> rho;  // derived as 0.1 / std(observed) when unset
    std::size_t max_iters = 500;
    double tol = 1e-6;
    std::vector<double> mode_weights;

    void validate() const;
};

/// High-accuracy low-rank tensor completion: same per-mode splitting as
/// admac_reconstruct, but the observed entries of X are pinned to the data
/// (assigned, never computed) and only the missing entries are averaged
/// from the Y_i + U_i. Starts from X = P_Omega(T). Stops on relative change
/// of X below tol (never on the first iteration, before the duals have
/// moved) or after max_iters. The objective trace holds
/// sum_i alpha_i ||Y_i,(i)||_*.
ReconstructionResult halrtc_reconstruct(const DenseTensor& data, const ObservationMask& mask,
                                        const HalrtcConfig& cfg, const IterationObserver& observer = {});

}  // namespace sensrec
