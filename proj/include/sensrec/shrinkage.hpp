#pragma once

#include "sensrec/tensor.hpp"

#include <stdexcept>
#include <vector>

namespace sensrec {

/// Raised when a decomposition fails to converge or produces non-finite output.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thin SVD m = u * diag(sigma) * vt, sigma descending.
struct SvdFactors {
    DenseTensor u;              // rows x p
    std::vector<double> sigma;  // p = min(rows, cols)
    DenseTensor vt;             // p x cols
};

SvdFactors svd(const DenseTensor& m);

/// Result of singular value thresholding, with the spectrum bookkeeping the
/// solvers need for objective evaluation.
struct Shrunk {
    DenseTensor value;
    double nuclear_norm = 0.0;  // sum of thresholded singular values
    std::size_t rank = 0;       // count of singular values surviving the threshold
};

/// U diag(max(sigma - tau, 0)) V^T; the proximal map of tau * ||.||_*.
Shrunk shrink(const DenseTensor& m, double tau);

inline DenseTensor svt(const DenseTensor& m, double tau) { return shrink(m, tau).value; }

double nuclear_norm(const DenseTensor& m);

/// Count of singular values above rel_tol * sigma_max.
std::size_t numerical_rank(const DenseTensor& m, double rel_tol = 1e-12);

}  // namespace sensrec
