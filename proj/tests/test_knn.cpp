#include "doctest.h"
#include "support.hpp"

#include "sensrec/knn.hpp"
#include "sensrec/masks.hpp"
#include "sensrec/metrics.hpp"

#include <functional>

using namespace sensrec;

namespace {

struct Moments {
    std::size_t n = 0;
    double corr = 0.0, mean_a = 0.0, mean_b = 0.0, sd_a = 0.0, sd_b = 0.0;
};

// One-pass moments over the co-observed slots of rows a and b.
Moments moments(const DenseTensor& x, const ObservationMask& m, std::size_t a, std::size_t b) {
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    Moments r;
    for (std::size_t t = 0; t < x.cols(); ++t) {
        if (!m[a + t * x.rows()] || !m[b + t * x.rows()]) continue;
        const double u = x(a, t), v = x(b, t);
        sa += u, sb += v, saa += u * u, sbb += v * v, sab += u * v;
        ++r.n;
    }
    if (r.n == 0) return r;
    const double n = static_cast<double>(r.n);
    r.mean_a = sa / n;
    r.mean_b = sb / n;
    const double va = saa / n - r.mean_a * r.mean_a, vb = sbb / n - r.mean_b * r.mean_b;
    r.sd_a = std::sqrt(std::max(va, 0.0));
    r.sd_b = std::sqrt(std::max(vb, 0.0));
    r.corr = (va > 1e-14 && vb > 1e-14) ? (sab / n - r.mean_a * r.mean_b) / (r.sd_a * r.sd_b) : 0.0;
    return r;
}

// Fills each gap from the k-subset of eligible neighbors with the largest
// total similarity, found by enumerating every subset.
DenseTensor knn_oracle(const DenseTensor& x, const ObservationMask& m, std::size_t k, std::size_t min_overlap) {
    DenseTensor out = x;
    const std::size_t nodes = x.rows();
    for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t t = 0; t < x.cols(); ++t) {
            if (m[i + t * nodes]) continue;
            std::vector<std::size_t> cand;
            std::vector<Moments> stats(nodes);
            for (std::size_t j = 0; j < nodes; ++j) {
                if (j == i || !m[j + t * nodes]) continue;
                stats[j] = moments(x, m, i, j);
                if (stats[j].n >= min_overlap && stats[j].corr > 0.0) cand.push_back(j);
            }
            if (cand.empty()) {
                double s = 0;
                std::size_t c = 0;
                for (std::size_t u = 0; u < x.cols(); ++u)
                    if (m[i + u * nodes]) s += x(i, u), ++c;
                REQUIRE(c > 0);
                out(i, t) = s / static_cast<double>(c);
                continue;
            }
            const std::size_t size = std::min(k, cand.size());
            std::vector<std::size_t> pick, best;
            double best_score = -1.0;
            std::function<void(std::size_t)> walk = [&](std::size_t from) {
                if (pick.size() == size) {
                    double score = 0;
                    for (auto j : pick) score += stats[j].corr;
                    if (score > best_score) best_score = score, best = pick;
                    return;
                }
                for (std::size_t c = from; c < cand.size(); ++c) {
                    pick.push_back(cand[c]);
                    walk(c + 1);
                    pick.pop_back();
                }
            };
            walk(0);
            double sum = 0;
            for (auto j : best) {
                const auto& s = stats[j];
                sum += s.mean_a + (s.sd_a / s.sd_b) * (x(j, t) - s.mean_b);
            }
            out(i, t) = sum / static_cast<double>(best.size());
        }
    }
    return out;
}

DenseTensor scaled_rows(std::size_t nodes, std::size_t slots, std::uint64_t seed) {
    const auto base = testing::random_tensor({1, slots}, seed);
    const auto noise = testing::random_tensor({nodes, slots}, seed + 1, 0.01);
    DenseTensor x({nodes, slots});
    for (std::size_t j = 0; j < nodes; ++j)
        for (std::size_t t = 0; t < slots; ++t) x(j, t) = static_cast<double>(j + 1) * base(0, t) + noise(j, t);
    return x;
}

}  // namespace

TEST_CASE("knn: fully observed data pass through") {
    const auto x = testing::random_tensor({5, 12}, 1);
    CHECK(knn_impute(x, ObservationMask::all_observed(x.shape())) == x);
}

TEST_CASE("knn: a gap in one of two identical nodes copies the twin") {
    DenseTensor x({2, 10});
    for (std::size_t t = 0; t < 10; ++t) x(0, t) = x(1, t) = std::sin(static_cast<double>(t));
    ObservationMask m = ObservationMask::all_observed(x.shape());
    m.set(0 + 4 * 2, false);
    const auto out = knn_impute(x, m);
    CHECK(out(0, 4) == doctest::Approx(x(1, 4)).epsilon(1e-12));
}

TEST_CASE("knn: scaled-copy rows are recovered") {
    const auto x = scaled_rows(10, 50, 3);
    const auto m = generate_mask(x.shape(), {RandomMissing{0.8}, 3});
    const auto out = knn_impute(x, m, {});
    CHECK(error_ratio(x, out, m.complement()) < 0.1);
}

TEST_CASE("knn: matches the subset-enumeration oracle") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto x = testing::random_tensor({7, 30}, 50 + seed) + scaled_rows(7, 30, 60 + seed);
        const auto m = testing::random_mask(x.shape(), 0.7, 70 + seed);
        for (std::size_t k : {1, 2, 3}) {
            KnnConfig cfg;
            cfg.k = k;
            CHECK(testing::max_abs_diff(knn_impute(x, m, cfg), knn_oracle(x, m, k, cfg.min_overlap)) < 1e-9);
        }
    }
}

TEST_CASE("knn: ties go to the lower node index") {
    // Nodes 1 and 2 agree wherever node 0 is observed, so their similarities
    // to node 0 are bitwise equal; they differ only at the gap.
    DenseTensor x({3, 8});
    for (std::size_t t = 0; t < 8; ++t) {
        x(0, t) = static_cast<double>(t);
        x(1, t) = x(2, t) = 2.0 * static_cast<double>(t);
    }
    x(2, 5) = 1e3;
    ObservationMask m = ObservationMask::all_observed(x.shape());
    m.set(0 + 5 * 3, false);
    KnnConfig cfg;
    cfg.k = 1;
    cfg.scale_to_target = false;
    CHECK(knn_impute(x, m, cfg)(0, 5) == 10.0);
}

TEST_CASE("knn: fallbacks and output finiteness") {
    DenseTensor x({3, 6});
    for (std::size_t t = 0; t < 6; ++t) x(0, t) = x(1, t) = x(2, t) = 1.0 + static_cast<double>(t);
    ObservationMask m = ObservationMask::all_observed(x.shape());
    for (std::size_t t = 0; t < 6; ++t) m.set(2 + t * 3, false);  // node 2 never observed
    m.set(0 + 3 * 3, false);
    KnnConfig cfg;
    cfg.min_overlap = 2;
    const auto out = knn_impute(x, m, cfg);
    for (double v : out.values()) CHECK(std::isfinite(v));
    CHECK(out(0, 3) == doctest::Approx(4.0).epsilon(1e-12));
    for (std::size_t t = 0; t < 6; ++t) CHECK(out(2, t) == doctest::Approx(38.0 / 11.0).epsilon(1e-12));
    CHECK_THROWS_AS(knn_impute(x, ObservationMask::none_observed(x.shape())), std::invalid_argument);
    KnnConfig bad;
    bad.k = 0;
    CHECK_THROWS_AS(knn_impute(x, m, bad), std::invalid_argument);
}
