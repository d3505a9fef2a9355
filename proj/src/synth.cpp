#include "sensrec/synth.hpp"

#include "sensrec/rng.hpp"

#include <Eigen/QR>

#include <stdexcept>
#include <string>

namespace sensrec {

namespace {

DenseTensor standard_normal(Shape shape, Rng& rng) {
    DenseTensor t(std::move(shape));
    for (double& v : t.values()) v = rng.normal();
    return t;
}

void add_noise(DenseTensor& t, double sigma, Rng& rng) {
    if (sigma < 0.0) throw std::invalid_argument("noise sigma must be nonnegative");
    if (sigma == 0.0) return;
    for (double& v : t.values()) v += sigma * rng.normal();
}

// I x r matrix with orthonormal columns from the Householder QR of a Gaussian draw.
DenseTensor orthonormal_factor(std::size_t rows, std::size_t r, Rng& rng) {
    const DenseTensor g = standard_normal({rows, r}, rng);
    const auto ri = static_cast<Eigen::Index>(rows), ci = static_cast<Eigen::Index>(r);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::Map<const Eigen::MatrixXd>(g.data(), ri, ci));
    DenseTensor q({rows, r});
    Eigen::Map<Eigen::MatrixXd>(q.data(), ri, ci) = qr.householderQ() * Eigen::MatrixXd::Identity(ri, ci);
    return q;
}

}  // namespace

DenseTensor synth_lowrank_matrix(std::size_t n, std::size_t t, std::size_t r, std::uint64_t seed, double noise_sigma) {
    if (r == 0 || r > n || r > t) throw std::invalid_argument("synth_lowrank_matrix: rank exceeds an extent");
    Rng rng(seed);
    const DenseTensor a = standard_normal({n, r}, rng);
    const DenseTensor b = standard_normal({t, r}, rng);
    DenseTensor m({n, t});
    for (std::size_t j = 0; j < t; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < r; ++k) s += a(i, k) * b(j, k);
            m(i, j) = s;
        }
    add_noise(m, noise_sigma, rng);
    return m;
}

DenseTensor synth_tucker_tensor(const Shape& shape, const std::vector<std::size_t>& ranks, std::uint64_t seed,
                                double noise_sigma) {
    if (ranks.size() != shape.size()) throw std::invalid_argument("synth_tucker_tensor: one rank per mode required");
    for (std::size_t m = 0; m < shape.size(); ++m) {
        if (ranks[m] == 0 || ranks[m] > shape[m]) {
            throw std::invalid_argument("synth_tucker_tensor: rank exceeds extent in mode " + std::to_string(m));
        }
    }
    Rng rng(seed);
    DenseTensor t = standard_normal(Shape(ranks.begin(), ranks.end()), rng);
    for (std::size_t m = 0; m < shape.size(); ++m) t = mode_product(t, orthonormal_factor(shape[m], ranks[m], rng), m);
    add_noise(t, noise_sigma, rng);
    return t;
}

DenseTensor synth_mixture_tensor(const Shape& shape, std::size_t deficient_mode, std::size_t r, std::uint64_t seed) {
    if (deficient_mode >= shape.size()) throw std::invalid_argument("synth_mixture_tensor: mode out of range");
    if (r == 0 || r > shape[deficient_mode]) throw std::invalid_argument("synth_mixture_tensor: rank exceeds extent");
    Rng rng(seed);
    Shape base_shape = shape;
    base_shape[deficient_mode] = r;
    const DenseTensor base = standard_normal(base_shape, rng);
    const DenseTensor mixing = standard_normal({shape[deficient_mode], r}, rng);
    return mode_product(base, mixing, deficient_mode);
}

}  // namespace sensrec
