#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sensrec {

using Shape = std::vector<std::size_t>;

/// Thrown when two operands (or an operand and a requested layout) disagree in shape.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::size_t element_count(const Shape& shape);
std::string to_string(const Shape& shape);

/// Dense N-order array of doubles. Storage is column-major in the tensor
/// sense: the first index varies fastest. A matrix is the N == 2 case and
/// entry (i, j) lives at i + j * rows.
class DenseTensor {
public:
    DenseTensor() = default;

    /// Zero-filled tensor.
    explicit DenseTensor(Shape shape);

    /// Takes ownership of `values`. Throws ShapeError on a length mismatch
    /// and std::invalid_argument if any value is not finite.
    DenseTensor(Shape shape, std::vector<double> values);

    static DenseTensor filled(Shape shape, double value);
    static DenseTensor matrix(std::size_t rows, std::size_t cols,
                              std::initializer_list<std::initializer_list<double>> row_major);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t order() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t extent(std::size_t mode) const { return shape_.at(mode); }

    std::size_t rows() const;
    std::size_t cols() const;

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Matrix access; requires order() == 2.
    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i + j * shape_[0]]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i + j * shape_[0]]; }

    std::size_t linear_index(std::span<const std::size_t> index) const;
    double& at(std::span<const std::size_t> index) { return values_[linear_index(index)]; }
    double at(std::span<const std::size_t> index) const { return values_[linear_index(index)]; }

    DenseTensor& operator+=(const DenseTensor& other);
    DenseTensor& operator-=(const DenseTensor& other);
    DenseTensor& operator*=(double s) noexcept;

    void set_zero() noexcept;

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    Shape shape_;
    std::vector<double> values_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(double s, DenseTensor a);

DenseTensor transpose(const DenseTensor& m);

/// Binary indicator of observed entries (1 = observed).
class ObservationMask {
public:
    ObservationMask() = default;
    ObservationMask(Shape shape, bool value);
    ObservationMask(Shape shape, std::vector<std::uint8_t> bits);

    static ObservationMask all_observed(Shape shape) { return {std::move(shape), true}; }
    static ObservationMask none_observed(Shape shape) { return {std::move(shape), false}; }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return bits_.size(); }

    bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
    void set(std::size_t i, bool observed) noexcept { bits_[i] = observed ? 1 : 0; }
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    std::size_t observed_count() const noexcept;
    bool any() const noexcept { return observed_count() > 0; }

    ObservationMask complement() const;

    friend bool operator==(const ObservationMask&, const ObservationMask&) = default;

private:
    Shape shape_;
    std::vector<std::uint8_t> bits_;
};

ObservationMask operator&(const ObservationMask& a, const ObservationMask& b);

/// Mode-k unfolding (mode is 0-based). Entry (i_1..i_N) maps to row i_k and
/// to a column built from the remaining indices in increasing mode order,
/// earlier modes varying fastest.
DenseTensor unfold(const DenseTensor& t, std::size_t mode);

/// Inverse of unfold for the same mode and target shape.
DenseTensor fold(const DenseTensor& m, std::size_t mode, const Shape& target_shape);

/// Mode-k product t x_k m, where m has shape [J, I_k]. Result extent in mode k is J.
DenseTensor mode_product(const DenseTensor& t, const DenseTensor& m, std::size_t mode);

double frobenius_norm(const DenseTensor& t);
double inner_product(const DenseTensor& a, const DenseTensor& b);

DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b);

/// Entrywise a / b. Every entry of b must be strictly positive.
DenseTensor elementwise_div(const DenseTensor& a, const DenseTensor& b);

/// Sampling projection: keeps observed entries, zeroes the rest.
DenseTensor masked(const DenseTensor& t, const ObservationMask& m);

/// Population standard deviation over the observed entries only.
double masked_std(const DenseTensor& t, const ObservationMask& m);

}  // namespace sensrec
