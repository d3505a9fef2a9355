#include "doctest.h"
#include "support.hpp"

#include "sensrec/tensor.hpp"

#include <numeric>

using namespace sensrec;
using testing::random_tensor;

TEST_CASE("construction validates length and finiteness") {
    CHECK_THROWS_AS(DenseTensor({2, 3}, std::vector<double>(5)), ShapeError);
    CHECK_THROWS(DenseTensor({2}, {1.0, std::nan("")}));
    CHECK_THROWS(DenseTensor({2}, {1.0, INFINITY}));
    const DenseTensor z({3, 4});
    CHECK(z.size() == 12);
    for (double v : z.values()) CHECK(v == 0.0);
}

TEST_CASE("matrix helper is row-major in, column-major stored") {
    const auto m = DenseTensor::matrix(2, 2, {{1, 2}, {3, 4}});
    CHECK(m(0, 1) == 2);
    CHECK(m(1, 0) == 3);
    CHECK(m[1] == 3);
}

TEST_CASE("unfold of a matrix along mode 0 is the matrix itself") {
    const auto m = random_tensor({5, 7}, 1);
    CHECK(unfold(m, 0) == m);
    CHECK(unfold(m, 1) == transpose(m));
}

TEST_CASE("unfold matches the enumerated index mapping on 2x3x4") {
    std::vector<double> vals(24);
    std::iota(vals.begin(), vals.end(), 0.0);
    const DenseTensor t({2, 3, 4}, vals);
    for (std::size_t k = 0; k < 3; ++k) {
        const DenseTensor u = unfold(t, k);
        const DenseTensor o = testing::unfold_oracle(t, k);
        CHECK(u.shape() == o.shape());
        CHECK(u == o);
        CHECK(fold(o, k, t.shape()) == t);
    }
    // A couple of hand-checked positions: entry (1,2,3) has linear index 1 + 2*2 + 3*6 = 23.
    const DenseTensor u1 = unfold(t, 1);
    CHECK(u1(2, 1 + 3 * 2) == 23.0);
    const DenseTensor u2 = unfold(t, 2);
    CHECK(u2(3, 1 + 2 * 2) == 23.0);
}

TEST_CASE("fold and unfold round-trip bitwise on random tensors") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto t = random_tensor({4, 5, 6}, seed);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(testing::bitwise_equal(fold(unfold(t, k), k, t.shape()), t));
            CHECK(frobenius_norm(unfold(t, k)) == doctest::Approx(frobenius_norm(t)).epsilon(1e-12));
        }
    }
    CHECK(fold(DenseTensor({5, 24}), 1, {4, 5, 6}) == DenseTensor({4, 5, 6}));
}

TEST_CASE("fold rejects inconsistent shapes") {
    CHECK_THROWS_AS(fold(DenseTensor({5, 23}), 1, {4, 5, 6}), ShapeError);
    CHECK_THROWS_AS(unfold(DenseTensor({2, 3}), 2), std::out_of_range);
}

TEST_CASE("mode product agrees with the unfolded matrix product") {
    const auto t = random_tensor({3, 4, 5}, 2);
    const auto m = random_tensor({6, 4}, 3);
    const DenseTensor p = mode_product(t, m, 1);
    CHECK(p.shape() == Shape{3, 6, 5});
    const Eigen::MatrixXd expect = testing::to_eigen(m) * testing::to_eigen(testing::unfold_oracle(t, 1));
    CHECK(testing::max_abs_diff(testing::unfold_oracle(p, 1), testing::from_eigen(expect)) < 1e-12);
}

TEST_CASE("norms and inner products") {
    CHECK(frobenius_norm(DenseTensor({3, 3})) == 0.0);
    CHECK(frobenius_norm(DenseTensor::matrix(2, 2, {{3, 0}, {0, 4}})) == 5.0);
    const DenseTensor a({2}, {1, 2}), b({2}, {3, 4});
    CHECK(inner_product(a, b) == 11.0);
    CHECK(inner_product(a, DenseTensor({2})) == 0.0);
    const auto t = random_tensor({4, 5, 6}, 9);
    const double n = frobenius_norm(t);
    CHECK(inner_product(t, t) == doctest::Approx(n * n).epsilon(1e-12));
}

TEST_CASE("hadamard, masked and elementwise_div") {
    const auto t = random_tensor({3, 4}, 4);
    CHECK(hadamard(t, DenseTensor::filled({3, 4}, 1.0)) == t);
    CHECK(masked(t, ObservationMask::none_observed({3, 4})) == DenseTensor({3, 4}));
    const auto m = testing::random_mask({3, 4}, 0.5, 5);
    CHECK(masked(masked(t, m), m) == masked(t, m));
    DenseTensor d({3, 4});
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = 0.5 + static_cast<double>(i);
    CHECK(testing::max_abs_diff(elementwise_div(hadamard(t, d), d), t) < 1e-15);
    d[0] = 0.0;
    CHECK_THROWS_AS(elementwise_div(t, d), std::domain_error);
}

TEST_CASE("masked_std") {
    const DenseTensor t({4}, {0, 2, 7, 7});
    ObservationMask m({4}, std::vector<std::uint8_t>{1, 1, 0, 0});
    CHECK(masked_std(t, m) == 1.0);
    ObservationMask same({4}, std::vector<std::uint8_t>{0, 0, 1, 1});
    CHECK(masked_std(t, same) == 0.0);

    const auto r = random_tensor({7, 9}, 6, 3.0);
    const auto mask = testing::random_mask({7, 9}, 0.6, 7);
    double sum = 0.0, count = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (mask[i]) sum += r[i], count += 1.0;
    const double mean = sum / count;
    double ss = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (mask[i]) ss += (r[i] - mean) * (r[i] - mean);
    CHECK(masked_std(r, mask) == doctest::Approx(std::sqrt(ss / count)).epsilon(1e-12));
}

TEST_CASE("mask complement and intersection") {
    const auto m = testing::random_mask({5, 6}, 0.3, 8);
    const auto c = m.complement();
    CHECK(m.observed_count() + c.observed_count() == 30);
    CHECK((m & c).observed_count() == 0);
    CHECK((m & m) == m);
}
