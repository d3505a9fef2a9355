#include "sensrec/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace sensrec {

namespace {

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": shape " + to_string(a) + " vs " + to_string(b));
    }
}

// Product of extents strictly before / after `mode`.
std::pair<std::size_t, std::size_t> split_extents(const Shape& shape, std::size_t mode) {
    std::size_t left = 1;
    for (std::size_t m = 0; m < mode; ++m) left *= shape[m];
    std::size_t right = 1;
    for (std::size_t m = mode + 1; m < shape.size(); ++m) right *= shape[m];
    return {left, right};
}

}  // namespace

std::size_t element_count(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string to_string(const Shape& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
    os << ']';
    return os.str();
}

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)), values_(element_count(shape_), 0.0) {
    if (shape_.empty()) throw ShapeError("tensor must have at least one mode");
    for (auto e : shape_) {
        if (e == 0) throw ShapeError("tensor extents must be positive: " + to_string(shape_));
    }
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> values) : DenseTensor(std::move(shape)) {
    if (values.size() != values_.size()) {
        throw ShapeError("value count " + std::to_string(values.size()) + " does not match shape " +
                         to_string(shape_));
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("tensor values must be finite");
    }
    values_ = std::move(values);
}

DenseTensor DenseTensor::filled(Shape shape, double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("tensor values must be finite");
    DenseTensor t(std::move(shape));
    std::fill(t.values_.begin(), t.values_.end(), value);
    return t;
}

DenseTensor DenseTensor::matrix(std::size_t rows, std::size_t cols,
                                std::initializer_list<std::initializer_list<double>> row_major) {
    if (row_major.size() != rows) throw ShapeError("row count mismatch in matrix literal");
    std::vector<double> values(rows * cols);
    std::size_t i = 0;
    for (const auto& row : row_major) {
        if (row.size() != cols) throw ShapeError("column count mismatch in matrix literal");
        std::size_t j = 0;
        for (double v : row) values[i + j++ * rows] = v;
        ++i;
    }
    return DenseTensor({rows, cols}, std::move(values));
}

std::size_t DenseTensor::rows() const {
    if (order() != 2) throw ShapeError("rows() requires a matrix, got " + to_string(shape_));
    return shape_[0];
}

std::size_t DenseTensor::cols() const {
    if (order() != 2) throw ShapeError("cols() requires a matrix, got " + to_string(shape_));
    return shape_[1];
}

std::size_t DenseTensor::linear_index(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size()) throw ShapeError("index arity does not match tensor order");
    std::size_t linear = 0;
    std::size_t stride = 1;
    for (std::size_t m = 0; m < shape_.size(); ++m) {
        if (index[m] >= shape_[m]) throw std::out_of_range("tensor index out of range");
        linear += index[m] * stride;
        stride *= shape_[m];
    }
    return linear;
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
    require_same_shape(shape_, other.shape_, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
    require_same_shape(shape_, other.shape_, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

DenseTensor& DenseTensor::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

void DenseTensor::set_zero() noexcept { std::fill(values_.begin(), values_.end(), 0.0); }

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(double s, DenseTensor a) { return a *= s; }

DenseTensor transpose(const DenseTensor& m) {
    const std::size_t r = m.rows(), c = m.cols();
    DenseTensor out({c, r});
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t i = 0; i < r; ++i) out(j, i) = m(i, j);
    return out;
}

ObservationMask::ObservationMask(Shape shape, bool value)
    : shape_(std::move(shape)), bits_(element_count(shape_), value ? 1 : 0) {}

ObservationMask::ObservationMask(Shape shape, std::vector<std::uint8_t> bits)
    : shape_(std::move(shape)), bits_(std::move(bits)) {
    if (bits_.size() != element_count(shape_)) throw ShapeError("mask length does not match shape");
    for (auto b : bits_) {
        if (b > 1) throw std::invalid_argument("mask entries must be 0 or 1");
    }
}

std::size_t ObservationMask::observed_count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

ObservationMask ObservationMask::complement() const {
    ObservationMask out = *this;
    for (auto& b : out.bits_) b = 1 - b;
    return out;
}

ObservationMask operator&(const ObservationMask& a, const ObservationMask& b) {
    require_same_shape(a.shape(), b.shape(), "mask intersection");
    ObservationMask out(a.shape(), false);
    for (std::size_t i = 0; i < a.size(); ++i) out.set(i, a[i] && b[i]);
    return out;
}

DenseTensor unfold(const DenseTensor& t, std::size_t mode) {
    const Shape& shape = t.shape();
    if (mode >= shape.size()) {
        throw std::out_of_range("unfold: mode " + std::to_string(mode) + " out of range for order " +
                                std::to_string(shape.size()));
    }
    const auto [left, right] = split_extents(shape, mode);
    const std::size_t ik = shape[mode];
    DenseTensor out({ik, left * right});
    const double* src = t.data();
    double* dst = out.data();
    // src(l, i, r) = src[l + i*left + r*left*ik]  ->  dst(i, l + r*left)
    for (std::size_t r = 0; r < right; ++r)
        for (std::size_t i = 0; i < ik; ++i)
            for (std::size_t l = 0; l < left; ++l)
                dst[i + (l + r * left) * ik] = src[l + i * left + r * left * ik];
    return out;
}

DenseTensor fold(const DenseTensor& m, std::size_t mode, const Shape& target_shape) {
    if (mode >= target_shape.size()) throw std::out_of_range("fold: mode out of range");
    const auto [left, right] = split_extents(target_shape, mode);
    const std::size_t ik = target_shape[mode];
    if (m.order() != 2 || m.shape()[0] != ik || m.shape()[1] != left * right) {
        throw ShapeError("fold: matrix shape " + to_string(m.shape()) + " incompatible with mode " +
                         std::to_string(mode) + " of " + to_string(target_shape));
    }
    DenseTensor out(target_shape);
    const double* src = m.data();
    double* dst = out.data();
    for (std::size_t r = 0; r < right; ++r)
        for (std::size_t i = 0; i < ik; ++i)
            for (std::size_t l = 0; l < left; ++l)
                dst[l + i * left + r * left * ik] = src[i + (l + r * left) * ik];
    return out;
}

DenseTensor mode_product(const DenseTensor& t, const DenseTensor& m, std::size_t mode) {
    if (mode >= t.order()) throw std::out_of_range("mode_product: mode out of range");
    if (m.order() != 2 || m.cols() != t.extent(mode)) {
        throw ShapeError("mode_product: factor " + to_string(m.shape()) + " incompatible with mode " +
                         std::to_string(mode) + " of " + to_string(t.shape()));
    }
    const DenseTensor unfolded = unfold(t, mode);
    using Map = Eigen::Map<const Eigen::MatrixXd>;
    Map a(m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    Map b(unfolded.data(), static_cast<Eigen::Index>(unfolded.rows()),
          static_cast<Eigen::Index>(unfolded.cols()));
    DenseTensor product({m.rows(), unfolded.cols()});
    Eigen::Map<Eigen::MatrixXd>(product.data(), a.rows(), b.cols()).noalias() = a * b;
    Shape target = t.shape();
    target[mode] = m.rows();
    return fold(product, mode, target);
}

double frobenius_norm(const DenseTensor& t) {
    double sum = 0.0;
    for (double v : t.values()) sum += v * v;
    return std::sqrt(sum);
}

double inner_product(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a.shape(), b.shape(), "inner_product");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a.shape(), b.shape(), "hadamard");
    DenseTensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

DenseTensor elementwise_div(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a.shape(), b.shape(), "elementwise_div");
    DenseTensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(b[i] > 0.0)) throw std::domain_error("elementwise_div: divisor entries must be positive");
        out[i] = a[i] / b[i];
    }
    return out;
}

DenseTensor masked(const DenseTensor& t, const ObservationMask& m) {
    require_same_shape(t.shape(), m.shape(), "masked");
    DenseTensor out(t.shape());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = m[i] ? t[i] : 0.0;
    return out;
}

double masked_std(const DenseTensor& t, const ObservationMask& m) {
    require_same_shape(t.shape(), m.shape(), "masked_std");
    std::size_t n = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (m[i]) {
            sum += t[i];
            ++n;
        }
    }
    if (n < 2) throw std::invalid_argument("masked_std: need at least 2 observed entries");
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (m[i]) ss += (t[i] - mean) * (t[i] - mean);
    }
    return std::sqrt(ss / static_cast<double>(n));
}

}  // namespace sensrec
