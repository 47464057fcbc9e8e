#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hillbloch/spectrum.hpp"
#include "support.hpp"

using namespace hillbloch;
using testing_support::constant_diag;
using testing_support::mathieu;

namespace {

constexpr double pi = std::numbers::pi;

GapReport gaps_of(const MatrixPotential& p, SweepOptions opt) {
    const auto bt = sweep_bands(p, opt);
    return detect_gaps(refine_bands(p, bt), bt.lambda_max);
}

// Gaps of a union of spectra: intersections of the two gap families.
std::vector<Gap> intersect(const std::vector<Gap>& a, const std::vector<Gap>& b, double min_width) {
    std::vector<Gap> out;
    for (const auto& x : a)
        for (const auto& y : b) {
            const double lo = std::max(x.lo, y.lo), hi = std::min(x.hi, y.hi);
            if (hi - lo > min_width) out.push_back({lo, hi});
        }
    std::sort(out.begin(), out.end(), [](const Gap& u, const Gap& v) { return u.lo < v.lo; });
    return out;
}

}  // namespace

TEST_CASE("sweep grid contains 0 and pi exactly") {
    const auto bt = sweep_bands(mathieu(), {.K = 10, .grid_size = 66, .lambda_max = 200.0});
    CHECK(bt.t.size() % 4 == 0);
    CHECK(bt.t.size() >= 66);
    CHECK(bt.t[bt.index_zero] == 0.0);
    CHECK(bt.t[bt.index_pi] == pi);
    CHECK(bt.t.front() == -pi / 2);
    CHECK(bt.continuous);
    CHECK(bt.max_jump <= bt.jump_bound);
}

TEST_CASE("sweep errors") {
    CHECK_THROWS_AS(sweep_bands(mathieu(), {.K = 5, .grid_size = 64, .lambda_max = 1000.0}), SpectralError);
    CHECK_THROWS_AS(sweep_bands(mathieu(), {.K = 16, .grid_size = 32, .lambda_max = 100.0}), SpectralError);
    try {
        sweep_bands(mathieu(), {.K = 5, .grid_size = 64, .lambda_max = 1000.0});
    } catch (const SpectralError& e) {
        CHECK(e.code() == ErrorCode::CutoffTooHigh);
    }
}

TEST_CASE("free operator has no gaps") {
    const auto g = gaps_of(constant_diag({0.0}), {.K = 12, .grid_size = 64, .lambda_max = 1000.0});
    CHECK(g.gaps.empty());
    CHECK(g.unresolved.empty());
    REQUIRE(g.spectrum.size() == 1);
    CHECK(std::abs(g.spectrum[0].lo) < 1e-12);
    CHECK(g.spectrum[0].hi == 1000.0);
    // band n covers [((n−1)π)², (nπ)²]
    for (std::size_t n = 0; n < 5; ++n) {
        CHECK(g.bands[n].lo == doctest::Approx(std::pow(n * pi, 2)).epsilon(1e-10));
        CHECK(g.bands[n].hi == doctest::Approx(std::pow((n + 1) * pi, 2)).epsilon(1e-10));
    }
}

TEST_CASE("constant diag(0, 100) and constant diag(0, 1, 3) have no gaps") {
    const auto a = gaps_of(constant_diag({0.0, 100.0}), {.K = 12, .grid_size = 64, .lambda_max = 1000.0});
    CHECK(a.gaps.empty());
    CHECK(a.spectrum.size() == 1);
    const auto b = gaps_of(constant_diag({0.0, 1.0, 3.0}), {.K = 12, .grid_size = 64, .lambda_max = 1000.0});
    CHECK(b.gaps.empty());
}

TEST_CASE("Mathieu gaps against scipy band edges") {
    const auto g = gaps_of(mathieu(), {.K = 16, .grid_size = 64, .lambda_max = 300.0});
    REQUIRE(g.gaps.size() == 3);
    // (b_r, a_r)·π² at q = 1/π², scipy.special.mathieu_b / mathieu_a
    const double edges[3][2] = {{8.857098951351016, 10.85677820231389},
                                {39.469974548564295, 39.52057748770511},
                                {88.83261246934947, 88.83293321695717}};
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(g.gaps[i].lo - edges[i][0]) < 1e-6);
        CHECK(std::abs(g.gaps[i].hi - edges[i][1]) < 1e-6);
    }
    CHECK(g.gaps[0].width() > g.gaps[1].width());
    CHECK(g.gaps[1].width() > g.gaps[2].width());
    CHECK(std::abs(g.lambda_min - (-0.050603841998408644)) < 1e-6);
}

TEST_CASE("band edges cross-checked with the oracle") {
    const auto bt = sweep_bands(mathieu(), {.K = 16, .grid_size = 64, .lambda_max = 200.0});
    const auto checks = cross_check_edges(mathieu(), bt);
    REQUIRE(checks.size() == 2);
    for (const auto& c : checks) {
        CHECK(c.counts_match);
        CHECK(c.compared >= 4);
        CHECK(c.max_deviation < 1e-6);
    }
}

TEST_CASE("grid refinement does not move the gaps") {
    const auto p = testing_support::hand_m2();
    const auto a = gaps_of(p, {.K = 14, .grid_size = 64, .lambda_max = 400.0});
    const auto b = gaps_of(p, {.K = 14, .grid_size = 256, .lambda_max = 400.0});
    REQUIRE(a.gaps.size() == b.gaps.size());
    for (std::size_t i = 0; i < a.gaps.size(); ++i) {
        CHECK(std::abs(a.gaps[i].lo - b.gaps[i].lo) < 1e-6);
        CHECK(std::abs(a.gaps[i].hi - b.gaps[i].hi) < 1e-6);
    }
}

TEST_CASE("decoupled potential: gaps are intersections of the scalar gap families") {
    const SweepOptions opt{.K = 16, .grid_size = 64, .lambda_max = 600.0};
    const auto ga = gaps_of(mathieu(), opt);
    const ComplexMatrix q1 = ComplexMatrix::from_rows({{1.5}}), q2 = ComplexMatrix::from_rows({{0.5}});
    const auto pb = from_fourier(1, {{1, q1}, {2, q2}});
    const auto gb = gaps_of(pb, opt);
    const auto pair = block_diagonal(mathieu(), pb);
    const auto g = gaps_of(pair, opt);
    const auto want = intersect(ga.gaps, gb.gaps, g.merge_tol);
    REQUIRE(g.gaps.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(std::abs(g.gaps[i].lo - want[i].lo) < 1e-6);
        CHECK(std::abs(g.gaps[i].hi - want[i].hi) < 1e-6);
    }
}

TEST_CASE("detect_gaps merge tolerance") {
    std::vector<BandInterval> bands{{0, 0.0, 1.0}, {1, 1.5, 2.0}, {2, 2.0 + 1e-9, 3.0}, {3, 2.5, 4.0}};
    const auto g = detect_gaps(bands, 10.0, 1e-6);
    REQUIRE(g.gaps.size() == 2);
    CHECK(g.gaps[0].lo == 1.0);
    CHECK(g.gaps[0].hi == 1.5);
    CHECK(g.gaps[1].lo == 4.0);
    CHECK(g.gaps[1].hi == 10.0);
    REQUIRE(g.unresolved.size() == 1);
    CHECK(g.unresolved[0].lo == 2.0);
}

TEST_CASE("finite-gap condition fixed cases") {
    auto verdict = [](std::vector<double> mu) { return finite_gap_condition(mean_spectrum(constant_diag(mu))); };
    const auto a = verdict({0.0, 1.0, 3.0});
    CHECK(a.holds);
    REQUIRE(a.witness);
    CHECK(*a.witness == std::array<std::size_t, 3>{1, 2, 3});

    const auto b = verdict({0.0, 1.0, 2.0});
    CHECK_FALSE(b.holds);
    REQUIRE(b.violation);
    CHECK(*b.violation == std::array<std::size_t, 3>{3, 2, 1});
    CHECK(*b.common_sum == doctest::Approx(2.0));

    const auto c = verdict({0.0, 0.0, 5.0});
    CHECK_FALSE(c.holds);
    CHECK(c.simple_count == 1);
    CHECK(c.reason == "fewer than three simple eigenvalues");
}

TEST_CASE("finite-gap condition agrees with brute force on random mu-sets") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> msize(1, 5), small(0, 6);
    std::uniform_real_distribution<double> real(-3.0, 3.0);
    int holds = 0, fails = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = msize(rng);
        std::vector<double> mu;
        for (int i = 0; i < m; ++i) mu.push_back(trial % 3 == 2 ? real(rng) : small(rng));
        std::sort(mu.begin(), mu.end());
        const auto v = finite_gap_condition(mean_spectrum(constant_diag(mu)), 1e-9);
        const auto ref = testing_support::brute_finite_gap(mu, 1e-9);
        CAPTURE(trial);
        CHECK(v.holds == ref.holds);
        (v.holds ? holds : fails)++;
    }
    CHECK(holds > 10);
    CHECK(fails > 10);
}

TEST_CASE("gap census on simple fixtures") {
    const auto z = gap_census_demo(constant_diag({0.0}), {.K = 12, .grid_size = 64, .lambda_max = 1000.0});
    CHECK(z.vacuous);
    CHECK(z.h_empirical == doctest::Approx(z.gaps.lambda_min));
    CHECK(z.label == "consistency demonstration, not a proof");

    const auto m = gap_census_demo(mathieu(), {.K = 16, .grid_size = 64, .lambda_max = 300.0});
    CHECK_FALSE(m.vacuous);
    CHECK(m.upper_smaller);
    CHECK(m.largest_lower == doctest::Approx(10.85677820231389 - 8.857098951351016).epsilon(1e-6));
    CHECK(m.h_empirical == doctest::Approx(88.83293321695717).epsilon(1e-8));
    CHECK_FALSE(m.verdict.holds);
}
