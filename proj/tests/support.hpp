#pragma once

// Independent reference implementations used by the tests. Nothing here calls
// into the library's unfold/fold or SVD code paths.

#include "sensrec/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

namespace testing {

using sensrec::DenseTensor;
using sensrec::ObservationMask;
using sensrec::Shape;

inline DenseTensor random_tensor(const Shape& shape, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n(0.0, scale);
    DenseTensor t(shape);
    for (auto& v : t.values()) v = n(gen);
    return t;
}

inline ObservationMask random_mask(const Shape& shape, double p, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::bernoulli_distribution b(p);
    ObservationMask m(shape, false);
    for (std::size_t i = 0; i < m.size(); ++i) m.set(i, b(gen));
    return m;
}

inline Eigen::MatrixXd to_eigen(const DenseTensor& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, j);
    return out;
}

inline DenseTensor from_eigen(const Eigen::MatrixXd& m) {
    DenseTensor out({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = m(i, j);
    return out;
}

inline std::vector<std::size_t> multi_index(std::size_t linear, const Shape& shape) {
    std::vector<std::size_t> idx(shape.size());
    for (std::size_t k = 0; k < shape.size(); ++k) {
        idx[k] = linear % shape[k];
        linear /= shape[k];
    }
    return idx;
}

// Mode-k unfolding by enumerating multi-indices: row i_k, column from the
// remaining indices with the earliest mode varying fastest.
inline DenseTensor unfold_oracle(const DenseTensor& t, std::size_t mode) {
    const Shape& s = t.shape();
    const std::size_t cols = t.size() / s[mode];
    DenseTensor out({s[mode], cols});
    for (std::size_t lin = 0; lin < t.size(); ++lin) {
        const auto idx = multi_index(lin, s);
        std::size_t col = 0, stride = 1;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (k == mode) continue;
            col += idx[k] * stride;
            stride *= s[k];
        }
        out(idx[mode], col) = t.at(idx);
    }
    return out;
}

// out[i_perm[0], i_perm[1], ...] = t[i_0, i_1, ...]
inline DenseTensor permute(const DenseTensor& t, const std::vector<std::size_t>& perm) {
    Shape shape(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) shape[k] = t.shape()[perm[k]];
    DenseTensor out(shape);
    for (std::size_t lin = 0; lin < t.size(); ++lin) {
        const auto idx = multi_index(lin, t.shape());
        std::vector<std::size_t> p(perm.size());
        for (std::size_t k = 0; k < perm.size(); ++k) p[k] = idx[perm[k]];
        out.at(p) = t[lin];
    }
    return out;
}

inline ObservationMask permute(const ObservationMask& m, const std::vector<std::size_t>& perm) {
    DenseTensor t(m.shape());
    for (std::size_t i = 0; i < m.size(); ++i) t[i] = m[i] ? 1.0 : 0.0;
    const DenseTensor p = permute(t, perm);
    ObservationMask out(p.shape(), false);
    for (std::size_t i = 0; i < p.size(); ++i) out.set(i, p[i] != 0.0);
    return out;
}

// Singular value thresholding through a one-sided Jacobi SVD.
inline Eigen::MatrixXd svt_oracle(const Eigen::MatrixXd& y, double tau) {
    Eigen::JacobiSVD<Eigen::MatrixXd> s(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sigma = s.singularValues();
    for (Eigen::Index i = 0; i < sigma.size(); ++i) sigma(i) = std::max(sigma(i) - tau, 0.0);
    return s.matrixU() * sigma.asDiagonal() * s.matrixV().transpose();
}

inline double nuclear_oracle(const Eigen::MatrixXd& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().sum();
}

inline std::size_t rank_oracle(const DenseTensor& m, double rel_tol = 1e-9) {
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(m)).singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    return static_cast<std::size_t>((s.array() > rel_tol * s(0)).count());
}

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline double rel_diff(const DenseTensor& a, const DenseTensor& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

inline bool bitwise_equal(const DenseTensor& a, const DenseTensor& b) {
    return a.shape() == b.shape() && std::equal(a.values().begin(), a.values().end(), b.values().begin(),
                                                [](double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; });
}

}  // namespace testing
