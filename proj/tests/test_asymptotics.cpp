#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hillbloch/asymptotics.hpp"
#include "support.hpp"

using namespace hillbloch;
using testing_support::constant_diag;
using testing_support::mathieu;

namespace {

constexpr double pi = std::numbers::pi;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const SpectralError& e) {
        return e.code();
    }
    return ErrorCode::ParseError;
}

MeanSpectrum spectrum_of(std::vector<double> mu) { return mean_spectrum(constant_diag(std::move(mu))); }

std::vector<std::pair<int, double>> fixture(auto&& f) {
    std::vector<std::pair<int, double>> out;
    for (int k = 8; k <= 64; ++k) out.emplace_back(k, f(static_cast<double>(k)));
    return out;
}

}  // namespace

TEST_CASE("a_set branches") {
    auto members = [](int k, double t) { return a_set(k, t).members; };
    CHECK(members(10, pi / 2) == std::vector<int>{10});
    CHECK(members(10, 0.1) == std::vector<int>{10, -10});
    CHECK(members(10, pi + 0.2) == std::vector<int>{10, -11});
    CHECK(a_set(10, pi + 0.2).branch == ResonanceBranch::NearPi);
    CHECK(a_set(10, 2 * pi + 0.1).branch == ResonanceBranch::NearZero);
    CHECK(a_set(10, -0.1).branch == ResonanceBranch::NearZero);
    CHECK(code_of([] { a_set(2, 0.0); }) == ErrorCode::IndexTooSmall);
    CHECK(code_of([] { a_set(-1, 0.0); }) == ErrorCode::IndexTooSmall);
}

TEST_CASE("a_set branches are exhaustive and exclusive") {
    for (int k = 3; k <= 100; k += 7)
        for (int i = 0; i < 10000; i += 13) {
            const double t = -pi / 2 + 2 * pi * i / 10000.0;
            const auto a = a_set(k, t);
            const double w = 1.0 / std::log(k);
            const bool z = std::abs(t) < w, p = std::abs(t - pi) < w;
            CHECK(!(z && p));
            const auto want = z ? ResonanceBranch::NearZero : p ? ResonanceBranch::NearPi : ResonanceBranch::Generic;
            CHECK(a.branch == want);
        }
}

TEST_CASE("s_interval examples") {
    const auto a = s_interval(10, -10, 1.0, 0.01);
    CHECK(a.lo == doctest::Approx(0.99 / (80 * pi)));
    CHECK(a.hi == doctest::Approx(1.01 / (80 * pi)));
    CHECK(a.lo == doctest::Approx(0.0039393).epsilon(1e-4));
    CHECK(a.hi == doctest::Approx(0.0040189).epsilon(1e-4));

    const auto b = s_interval(10, -10, 0.0, 0.01);
    CHECK(b.lo == -b.hi);
    CHECK(b.hi == doctest::Approx(0.01 / (80 * pi)));

    const auto c = s_interval(10, -11, 1.0, 0.01);
    CHECK(c.lo == doctest::Approx(pi + 0.99 / (84 * pi)));
    CHECK(c.hi == doctest::Approx(pi + 1.01 / (84 * pi)));

    CHECK(code_of([] { s_interval(10, 10, 1.0, 0.01); }) == ErrorCode::InvalidN);
    CHECK(code_of([] { s_interval(10, -9, 1.0, 0.01); }) == ErrorCode::InvalidN);
    CHECK(code_of([] { s_interval(2, -2, 1.0, 0.01); }) == ErrorCode::IndexTooSmall);
}

TEST_CASE("forbidden_set examples") {
    const auto one = forbidden_set(spectrum_of({0.0}), 0, 10, 0.01);
    REQUIRE(one.intervals.size() == 2);
    CHECK(0.5 * (one.intervals[0].lo + one.intervals[0].hi) == doctest::Approx(0.0));
    CHECK(0.5 * (one.intervals[1].lo + one.intervals[1].hi) == doctest::Approx(pi));
    CHECK(one.contains(0.0));
    CHECK(one.contains(pi));
    CHECK(one.contains(2 * pi));
    CHECK_FALSE(one.contains(pi / 2));

    const auto two = forbidden_set(spectrum_of({0.0, 1.0}), 0, 10, 0.01);
    CHECK(two.intervals.size() == 4);
    const double want = 2 * 0.01 / (8 * pi * 10) * 2 + 2 * 0.01 / (4 * pi * 21) * 2;
    CHECK(two.measure() == doctest::Approx(want));

    CHECK(code_of([] { forbidden_set(spectrum_of({1.0, 1.0}), 0, 10, 0.01); }) == ErrorCode::NonSimpleEigenvalue);
}

TEST_CASE("forbidden_set is the union of s_interval outputs and its measure shrinks") {
    const auto p = random_potential({.m = 3, .degree = 2, .norm = 2.0, .seed = 5});
    const auto ms = mean_spectrum(p);
    for (int k = 10; k <= 60; k += 5)
        for (std::size_t j = 0; j < 3; ++j) {
            const auto ws = width_schedule(p, k, 3.0);
            const auto b = forbidden_set(ms, j, k, ws);
            std::vector<OpenInterval> raw;
            for (int n : {-k, -k - 1})
                for (double mu : ms.mu) raw.push_back(s_interval(k, n, mu - ms.mu[j], ws.alpha));
            CHECK(b.pieces == raw);
            CHECK(b.intervals == merge_intervals(raw));
            CHECK(b.measure() <= 3 * ws.alpha / k);
        }
}

TEST_CASE("merge_intervals joins overlaps") {
    const auto m = merge_intervals({{3, 4}, {0, 1}, {0.5, 2}, {2, 2.5}});
    REQUIRE(m.size() == 2);
    CHECK(m[0] == OpenInterval{0, 2.5});
    CHECK(m[1] == OpenInterval{3, 4});
}

TEST_CASE("width schedule") {
    const auto p = testing_support::hand_m2();
    const auto ws = width_schedule(p, 10, 2.0);
    CHECK(ws.b_k == 0.0);
    CHECK(ws.eps == doctest::Approx(2.0 * std::log(10.0) / 10.0));
    CHECK(ws.alpha * ws.alpha == doctest::Approx(ws.eps));
    for (int k = 2; k < 20; ++k) CHECK(coefficient_tail(p, k).b == 0.0);
    CHECK(coefficient_tail(p, 1).b > 0.0);
}

TEST_CASE("residual vanishes for constant and free potentials") {
    const auto c = constant_diag({1.0, 4.0});
    const auto sol = solve(c, BlochParams(pi / 2, 24), {.vectors = false});
    const auto ms = mean_spectrum(c);
    for (int k = -18; k <= 18; ++k)
        for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(residual(sol, ms, k, j)) < 1e-9);
    CHECK(code_of([&] { residual(sol, ms, 23, 0); }) == ErrorCode::BoundaryContaminated);

    const auto z = constant_diag({0.0});
    const auto zs = solve(z, BlochParams(0.4, 10), {.vectors = false});
    for (int k = -5; k <= 5; ++k) CHECK(residual(zs, mean_spectrum(z), k, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("verify_decay fixtures") {
    // Exact ln k / k over k = 8..64: the least-squares slope is −0.68494
    // (numpy.polyfit on the same 57 points), above the −0.8 threshold.
    const auto lk = verify_decay(fixture([](double k) { return std::log(k) / k; }));
    REQUIRE(lk.slope);
    CHECK(*lk.slope == doctest::Approx(-0.6849379290109815).epsilon(1e-10));
    CHECK(lk.c_hat == doctest::Approx(1.0));
    CHECK(lk.stable);
    CHECK_FALSE(lk.pass);

    const auto sq = verify_decay(fixture([](double k) { return 1.0 / (k * k); }));
    CHECK(*sq.slope == doctest::Approx(-2.0));
    CHECK(sq.pass);

    const auto cst = verify_decay(fixture([](double) { return 0.3; }));
    CHECK(std::abs(*cst.slope) < 1e-12);
    CHECK_FALSE(cst.pass);

    const auto zero = verify_decay(fixture([](double) { return 0.0; }));
    CHECK(zero.exact);
    CHECK(zero.pass);

    std::vector<std::pair<int, double>> few{{8, 1.0}, {9, 0.5}};
    CHECK(code_of([&] { verify_decay(few); }) == ErrorCode::InsufficientSamples);
    auto back = fixture([](double k) { return 1.0 / k; });
    std::swap(back[0], back[1]);
    CHECK(code_of([&] { verify_decay(back); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("projection defect and leading term vanish for Q = C") {
    const auto c = constant_diag({1.0, 4.0});
    const auto ms = mean_spectrum(c);
    const auto sol = solve(c, BlochParams(pi / 2, 20));
    for (int k = 3; k <= 12; ++k)
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(projection_defect(sol, ms, k, j) < 1e-9);
            const auto lt = leading_term_check(sol, ms, k, j, width_schedule(c, k, 1.0));
            CHECK(lt.distance < 1e-9);
            CHECK(lt.overlap == doctest::Approx(1.0));
            CHECK(uniqueness_census(sol, ms, width_schedule(c, k, 1.0), k, j) == 1);
        }
}

TEST_CASE("projection defect is zero for a degenerate free system") {
    const auto z = constant_diag({0.0, 0.0});
    const auto sol = solve(z, BlochParams(pi / 2, 12));
    for (int k = 3; k <= 8; ++k)
        for (std::size_t j = 0; j < 2; ++j) CHECK(projection_defect(sol, mean_spectrum(z), k, j) < 1e-12);
}

TEST_CASE("leading term refuses t inside the forbidden set") {
    const auto p = mathieu();
    const auto ms = mean_spectrum(p);
    const auto sol = solve(p, BlochParams(0.0, 40));
    const auto ws = width_schedule(p, 16, 1.0);
    CHECK(code_of([&] { leading_term_check(sol, ms, 16, 0, ws); }) == ErrorCode::TInForbiddenSet);
    CHECK(code_of([&] { uniqueness_census(sol, ms, ws, 16, 0); }) == ErrorCode::TInForbiddenSet);
    CHECK(code_of([&] { uniqueness_census(p, mean_spectrum(constant_diag({2.0, 2.0})), ws, 16, 0, 1.0); }) ==
          ErrorCode::NonSimpleEigenvalue);
}

TEST_CASE("Mathieu leading term at t = pi/2 is within the alpha scale") {
    const auto p = mathieu();
    const auto ms = mean_spectrum(p);
    const auto sol = solve(p, BlochParams(pi / 2, 64));
    std::vector<ConstantSample> s;
    for (int k = 8; k <= 24; ++k) {
        const auto ws = width_schedule(p, k, 1.0);
        s.push_back({k, leading_term_check(sol, ms, k, 0, ws).distance, ws.alpha});
    }
    const auto fit = fit_constant(s);
    CHECK(fit.stable);
    CHECK(fit.c_hat < 1.0);
}

TEST_CASE("m = 2 projection defect decays at the ln k / k rate") {
    const auto p = random_potential({.m = 2, .degree = 2, .norm = 1.0, .seed = 1});
    const auto ms = mean_spectrum(p);
    const auto sol = solve(p, BlochParams(pi / 2, 72));
    std::vector<ConstantSample> s;
    for (int k = 8; k <= 32; ++k) {
        double worst = 0.0;
        for (std::size_t j = 0; j < 2; ++j) worst = std::max(worst, projection_defect(sol, ms, k, j));
        s.push_back({k, worst, std::log(k) / k});
    }
    CHECK(fit_constant(s).stable);
}

TEST_CASE("fit_constant") {
    const auto f = fit_constant({{8, 2.0, 1.0}, {9, 1.0, 1.0}, {10, 0.5, 1.0}, {11, 0.1, 1.0}});
    CHECK(f.c_hat == 2.0);
    CHECK(f.c_hat_upper == 0.5);
    CHECK(f.stable);
}

TEST_CASE("uniqueness census on seeded pairs for a random m = 2 potential") {
    const auto p = random_potential({.m = 2, .degree = 2, .norm = 1.0, .seed = 2});
    const auto ms = mean_spectrum(p);
    const auto cal = calibrate_c8(p, 8, 16, {0.4, 1.2, 2.0, 2.8}, 2 * 16 + 6, 1.0);
    CHECK(cal.calibrated);
    CHECK(cal.c8 > 0.0);
    const auto pairs = census_pairs(p, ms, cal.c8, 8, 16, 10, 3);
    REQUIRE(pairs.size() == 10);
    for (const auto& [k, t] : pairs) {
        const auto ws = width_schedule(p, k, cal.c8);
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK_FALSE(forbidden_set(ms, j, k, ws).contains(t));
            CHECK(uniqueness_census(p, ms, ws, k, j, t) == 1);
        }
    }
    CHECK(census_pairs(p, ms, cal.c8, 8, 16, 10, 3) == pairs);
}

TEST_CASE("calibrate_c8 falls back when residuals vanish") {
    const auto c = constant_diag({1.0, 4.0});
    const auto cal = calibrate_c8(c, 8, 12, {0.5, 1.5}, 30, 1.7);
    CHECK_FALSE(cal.calibrated);
    CHECK(cal.c8 == 1.7);
}
