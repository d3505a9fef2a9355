#include "doctest.h"
#include "support.hpp"

#include "sensrec/admac.hpp"
#include "sensrec/adrm.hpp"
#include "sensrec/halrtc.hpp"
#include "sensrec/masks.hpp"
#include "sensrec/metrics.hpp"
#include "sensrec/radmac.hpp"
#include "sensrec/synth.hpp"

using namespace sensrec;

namespace {

double fidelity(const DenseTensor& x, const DenseTensor& t, const ObservationMask& m) {
    return frobenius_norm(masked(x - t, m)) / frobenius_norm(masked(t, m));
}

SolverConfig with_rho(double rho) {
    SolverConfig c;
    c.rho = rho;
    return c;
}

}  // namespace

TEST_CASE("solver config validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.c_lambda = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.lambda_min = 2.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.rho = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.max_iters = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("rho derivation") {
    const DenseTensor t({4}, {0, 2, 5, 5});
    const ObservationMask m({4}, std::vector<std::uint8_t>{1, 1, 0, 0});
    CHECK(resolve_rho(t, m, std::nullopt) == doctest::Approx(0.1));
    CHECK(resolve_rho(t, m, 3.0) == 3.0);
    const ObservationMask flat({4}, std::vector<std::uint8_t>{0, 0, 1, 1});
    CHECK_THROWS_AS(resolve_rho(t, flat, std::nullopt), std::invalid_argument);
}

TEST_CASE("adrm argument checks") {
    const auto m = testing::random_tensor({4, 5}, 1);
    CHECK_THROWS_AS(adrm_reconstruct(testing::random_tensor({2, 2, 2}, 1), ObservationMask::all_observed({2, 2, 2}), {}),
                    ShapeError);
    CHECK_THROWS_AS(adrm_reconstruct(m, ObservationMask::all_observed({5, 4}), {}), ShapeError);
    CHECK_THROWS_AS(adrm_reconstruct(m, ObservationMask::none_observed({4, 5}), {}), std::invalid_argument);
}

TEST_CASE("adrm: zero is a fixed point") {
    const auto mask = testing::random_mask({8, 9}, 0.5, 2);
    const auto r = adrm_reconstruct(DenseTensor({8, 9}), mask, with_rho(1.0));
    CHECK(r.estimate == DenseTensor({8, 9}));
    CHECK(r.residual_trace.size() == r.iterations);
}

TEST_CASE("adrm: fully observed rank-1 matrix is reproduced") {
    const auto a = testing::random_tensor({20, 1}, 3), b = testing::random_tensor({1, 30}, 4);
    const auto m = testing::from_eigen(testing::to_eigen(a) * testing::to_eigen(b));
    const auto r = adrm_reconstruct(m, ObservationMask::all_observed(m.shape()), {});
    CHECK(r.converged);
    CHECK(testing::rel_diff(r.estimate, m) <= 1e-3);
}

TEST_CASE("adrm: rank-3 recovery, fidelity and determinism") {
    const auto m = synth_lowrank_matrix(50, 60, 3, 7);
    const auto mask = generate_mask(m.shape(), {RandomMissing{0.5}, 7});
    const auto r = adrm_reconstruct(m, mask, {});
    CHECK(r.converged);
    CHECK(r.iterations <= 500);
    CHECK(error_ratio(m, r.estimate, mask.complement()) < 0.01);
    CHECK(fidelity(r.estimate, m, mask) <= 1e-3);
    CHECK(r.residual_trace.size() == r.iterations);
    CHECK(r.objective_trace.size() == r.iterations);

    const auto again = adrm_reconstruct(m, mask, {});
    CHECK(testing::bitwise_equal(again.estimate, r.estimate));
    CHECK(again.residual_trace == r.residual_trace);
}

TEST_CASE("adrm: unobserved input values are ignored") {
    const auto m = synth_lowrank_matrix(12, 15, 2, 5);
    const auto mask = generate_mask(m.shape(), {RandomMissing{0.6}, 1});
    DenseTensor noisy = m;
    for (std::size_t i = 0; i < noisy.size(); ++i)
        if (!mask[i]) noisy[i] = 1e6;
    CHECK(testing::bitwise_equal(adrm_reconstruct(m, mask, {}).estimate, adrm_reconstruct(noisy, mask, {}).estimate));
}

TEST_CASE("adrm: objective does not increase once lambda is fixed") {
    const auto m = synth_lowrank_matrix(30, 40, 3, 17);
    const auto mask = generate_mask(m.shape(), {RandomMissing{0.5}, 17});
    std::vector<double> plateau;
    adrm_reconstruct(m, mask, {}, [&](const IterationView& v) {
        if (v.lambda == 1e-6) plateau.push_back(v.objective);
    });
    REQUIRE(plateau.size() > 2);
    std::size_t violations = 0;
    for (std::size_t i = 1; i < plateau.size(); ++i)
        if (plateau[i] > plateau[i - 1] + 1e-8 * std::max(1.0, std::abs(plateau[i - 1]))) ++violations;
    CHECK(violations == 0);
}

TEST_CASE("adrm: scaling the data and the lambda schedule scales the estimate") {
    // rho is derived from the data, so it scales as 1/s; lambda must scale as s
    // for every update to be positively homogeneous.
    const auto m = synth_lowrank_matrix(30, 40, 3, 19);
    const auto mask = generate_mask(m.shape(), {RandomMissing{0.5}, 19});
    const auto base = adrm_reconstruct(m, mask, {});
    for (double s : {0.1, 0.3, 0.5}) {
        SolverConfig cfg;
        cfg.lambda0 *= s;
        cfg.lambda_min *= s;
        const auto scaled = adrm_reconstruct(s * m, mask, cfg);
        CHECK(scaled.iterations == base.iterations);
        CHECK(testing::rel_diff(scaled.estimate, s * base.estimate) < 1e-9);
    }
}

TEST_CASE("admac: zero fixed point and matrix case") {
    const auto mask = testing::random_mask({4, 5, 3}, 0.5, 4);
    CHECK(admac_reconstruct(DenseTensor({4, 5, 3}), mask, with_rho(1.0)).estimate == DenseTensor({4, 5, 3}));

    const auto m = synth_lowrank_matrix(50, 60, 3, 7);
    const auto mm = generate_mask(m.shape(), {RandomMissing{0.5}, 7});
    const auto r = admac_reconstruct(m, mm, {});
    CHECK(error_ratio(m, r.estimate, mm.complement()) < 0.02);
    CHECK(fidelity(r.estimate, m, mm) <= 1e-3);
}

TEST_CASE("admac: mode symmetry and determinism on a small tensor") {
    const auto t = synth_tucker_tensor({8, 7, 6}, {2, 2, 2}, 3);
    const auto mask = generate_mask(t.shape(), {RandomMissing{0.5}, 3});
    SolverConfig cfg;
    cfg.max_iters = 300;
    AdmacDiagnostics d;
    const auto r = admac_reconstruct(t, mask, cfg, d);
    CHECK(d.consensus_residual >= 0.0);
    const std::vector<std::size_t> perm{2, 0, 1};
    const auto p = admac_reconstruct(testing::permute(t, perm), testing::permute(mask, perm), cfg);
    CHECK(testing::max_abs_diff(p.estimate, testing::permute(r.estimate, perm)) < 1e-9);
    CHECK(testing::bitwise_equal(admac_reconstruct(t, mask, cfg).estimate, r.estimate));
}

TEST_CASE("halrtc: observed entries are pinned at every iteration") {
    const auto t = synth_tucker_tensor({8, 7, 6}, {2, 2, 2}, 5);
    const auto mask = generate_mask(t.shape(), {RandomMissing{0.4}, 5});
    HalrtcConfig cfg;
    cfg.max_iters = 200;
    std::size_t bad = 0, seen = 0;
    const auto r = halrtc_reconstruct(t, mask, cfg, [&](const IterationView& v) {
        ++seen;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (mask[i] && std::memcmp(v.estimate.data() + i, t.data() + i, sizeof(double)) != 0) ++bad;
    });
    CHECK(seen == r.iterations);
    CHECK(bad == 0);
}

TEST_CASE("halrtc: fully observed input and zero input") {
    const auto t = testing::random_tensor({5, 4, 3}, 6);
    bool always_equal = true;
    const auto r = halrtc_reconstruct(t, ObservationMask::all_observed(t.shape()), {},
                                      [&](const IterationView& v) { always_equal &= v.estimate == t; });
    CHECK(always_equal);
    CHECK(r.estimate == t);
    HalrtcConfig cfg;
    cfg.rho = 1.0;
    CHECK(halrtc_reconstruct(DenseTensor({5, 4, 3}), testing::random_mask({5, 4, 3}, 0.5, 1), cfg).estimate ==
          DenseTensor({5, 4, 3}));
}

TEST_CASE("z-update rule names") {
    CHECK(parse_z_update_rule("exact") == ZUpdateRule::exact);
    CHECK(parse_z_update_rule("paper") == ZUpdateRule::paper);
    CHECK(to_string(ZUpdateRule::paper) == "paper");
    CHECK_THROWS_AS(parse_z_update_rule("other"), std::invalid_argument);
}

TEST_CASE("radmac: zero fixed point") {
    const auto mask = testing::random_mask({4, 5, 3}, 0.5, 8);
    CHECK(radmac_reconstruct(DenseTensor({4, 5, 3}), mask, with_rho(1.0)).estimate == DenseTensor({4, 5, 3}));
}

TEST_CASE("radmac: step invariants") {
    const auto t = testing::random_tensor({5, 4, 6}, 21);
    const auto mask = testing::random_mask(t.shape(), 0.5, 22);
    const DenseTensor observed = masked(t, mask);
    const std::vector<double> w(3, 1.0);
    const double n = 3.0, rho = 0.7;
    for (ZUpdateRule rule : {ZUpdateRule::exact, ZUpdateRule::paper}) {
        MixtureState s = MixtureState::zeros(t.shape());
        double lambda = 1.0;
        for (int k = 0; k < 6; ++k, lambda *= 0.5) {
            radmac_step(s, observed, mask, rho, lambda, rule, w);
            const DenseTensor mean = (1.0 / n) * s.estimate();
            CHECK(testing::max_abs_diff(s.x_bar, mean) < 1e-12);
            // Optimality of the shared subproblem, written with the updated dual.
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (!mask[i]) {
                    CHECK(std::abs(s.u[i]) < 1e-12);
                } else if (rule == ZUpdateRule::exact) {
                    CHECK(rho * s.u[i] == doctest::Approx((n * s.z_bar[i] - t[i]) / lambda).epsilon(1e-9));
                } else {
                    CHECK(rho * s.u[i] == doctest::Approx((s.z_bar[i] - t[i] / n) / lambda).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("radmac: collapsed and uncollapsed iterations agree") {
    const auto t = testing::random_tensor({4, 4, 4}, 31);
    const auto mask = testing::random_mask(t.shape(), 0.5, 32);
    const DenseTensor observed = masked(t, mask);
    const std::vector<double> w(3, 1.0);
    MixtureState a = MixtureState::zeros(t.shape());
    UncollapsedMixtureState b = UncollapsedMixtureState::zeros(t.shape());
    double lambda = 1.0;
    for (int k = 0; k < 5; ++k, lambda *= 0.25) {
        radmac_step(a, observed, mask, 0.5, lambda, ZUpdateRule::exact, w);
        radmac_step_uncollapsed(b, observed, mask, 0.5, lambda, ZUpdateRule::exact, w);
        for (std::size_t m = 1; m < 3; ++m) CHECK(testing::max_abs_diff(b.u[m], b.u[0]) <= 1e-12);
        CHECK(testing::max_abs_diff(b.u[0], a.u) <= 1e-12);
        CHECK(testing::max_abs_diff(b.z_bar, a.z_bar) <= 1e-12);
        for (std::size_t m = 0; m < 3; ++m) CHECK(testing::max_abs_diff(b.components[m], a.components[m]) <= 1e-12);
    }
}

TEST_CASE("radmac: recovers a mixture tensor that joint low-rank models miss") {
    const auto t = synth_mixture_tensor({16, 16, 16}, 2, 2, 4);
    const auto mask = generate_mask(t.shape(), {RandomMissing{0.5}, 4});
    MixtureState final_state;
    const auto r = radmac_reconstruct(t, mask, {}, ZUpdateRule::exact, {}, &final_state);
    const auto a = admac_reconstruct(t, mask, {});
    const double er = error_ratio(t, r.estimate, mask.complement());
    CHECK(er < error_ratio(t, a.estimate, mask.complement()));
    CHECK(er < 0.05);
    CHECK(testing::max_abs_diff(final_state.estimate(), r.estimate) == 0.0);
    if (r.converged) {
        CHECK(frobenius_norm(final_state.x_bar - final_state.z_bar) / std::max(1.0, frobenius_norm(final_state.z_bar)) <
              1e-5);
    }
}

TEST_CASE("radmac and admac share the minimizer on a matrix") {
    // For N = 2 both unfoldings have the same rank and ||X1||_* + ||X - X1||_*
    // bottoms out at ||X||_*, so the mixture model adds nothing.
    const auto r = testing::random_tensor({40, 2}, 13), g = testing::random_tensor({2, 40}, 14);
    const auto m = testing::from_eigen(testing::to_eigen(r) * testing::to_eigen(g));
    const auto mask = generate_mask(m.shape(), {RandomMissing{0.5}, 13});
    SolverConfig cfg;
    cfg.tol = 1e-8;
    cfg.max_iters = 20000;
    const double er = error_ratio(m, radmac_reconstruct(m, mask, cfg).estimate, mask.complement());
    const double ea = error_ratio(m, admac_reconstruct(m, mask, cfg).estimate, mask.complement());
    CHECK(er <= ea * (1.0 + 1e-4));
    CHECK(std::abs(er - ea) <= 1e-4 * ea);
}
