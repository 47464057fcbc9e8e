#include "hillbloch/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "hillbloch/galerkin.hpp"
#include "hillbloch/oracle.hpp"
#include "hillbloch/parallel.hpp"

namespace hillbloch {

namespace {

constexpr double pi = std::numbers::pi;

double band_value(const MatrixPotential& p, int K, double t, std::size_t n) {
    return galerkin_eigenvalues(p, BlochParams(t, K))[n];
}

}  // namespace

BandTable sweep_bands(const MatrixPotential& p, const SweepOptions& opt) {
    const int d = p.degree();
    if (opt.grid_size < 64) throw SpectralError(ErrorCode::InvalidArgument, "grid_size must be at least 64");
    if (opt.K < d + 3) throw SpectralError(ErrorCode::InvalidArgument, "K must exceed d + 2");
    if (!(opt.lambda_max > 0.0) || !std::isfinite(opt.lambda_max))
        throw SpectralError(ErrorCode::InvalidArgument, "lambda_max must be positive");
    const double trusted = 2.0 * pi * (opt.K - d - 2);
    if (opt.lambda_max > trusted * trusted)
        throw SpectralError(ErrorCode::CutoffTooHigh, "lambda_max exceeds (2pi(K-d-2))^2 = " +
                                                          std::to_string(trusted * trusted) + "; raise K");

    const std::size_t N = static_cast<std::size_t>((opt.grid_size + 3) / 4 * 4);
    const double dt = 2.0 * pi / static_cast<double>(N);
    BandTable bt;
    bt.K = opt.K;
    bt.lambda_max = opt.lambda_max;
    bt.t.resize(N);
    for (std::size_t i = 0; i < N; ++i) bt.t[i] = -0.5 * pi + static_cast<double>(i) * dt;
    bt.index_zero = N / 4;
    bt.index_pi = 3 * N / 4;
    bt.t[bt.index_zero] = 0.0;
    bt.t[bt.index_pi] = pi;

    std::vector<std::vector<double>> all(N);
    parallel_for(N, opt.workers, [&](std::size_t i) { all[i] = galerkin_eigenvalues(p, BlochParams(bt.t[i], opt.K)); });

    for (const auto& v : all)
        bt.bands = std::max(bt.bands, static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), opt.lambda_max) - v.begin()));
    bt.values.resize(N);
    for (std::size_t i = 0; i < N; ++i) bt.values[i].assign(all[i].begin(), all[i].begin() + static_cast<std::ptrdiff_t>(bt.bands));

    // λ_n(t) is 2π-periodic, so the last sample neighbours the first.
    for (std::size_t i = 0; i < N; ++i) {
        const auto& a = bt.values[i];
        const auto& b = bt.values[(i + 1) % N];
        for (std::size_t n = 0; n < bt.bands; ++n) bt.max_jump = std::max(bt.max_jump, std::abs(b[n] - a[n]));
    }
    bt.jump_bound = 2.0 * (2.0 * pi * opt.K + 2.0 * pi) * dt + 1e-9 * std::max(1.0, opt.lambda_max);
    bt.continuous = bt.max_jump <= bt.jump_bound;
    return bt;
}

std::vector<BandInterval> grid_bands(const BandTable& table) {
    std::vector<BandInterval> out(table.bands);
    for (std::size_t n = 0; n < table.bands; ++n) {
        BandInterval& b = out[n];
        b.index = n;
        b.lo = std::numeric_limits<double>::infinity();
        b.hi = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < table.t.size(); ++i) {
            const double v = table.values[i][n];
            if (v < b.lo) {
                b.lo = v;
                b.t_lo = table.t[i];
            }
            if (v > b.hi) {
                b.hi = v;
                b.t_hi = table.t[i];
            }
        }
    }
    return out;
}

std::vector<BandInterval> refine_bands(const MatrixPotential& p, const BandTable& table, unsigned workers) {
    std::vector<BandInterval> out = grid_bands(table);
    const std::size_t B = table.bands;
    if (B == 0 || table.t.empty()) return out;
    const MeanSpectrum ms = mean_spectrum(p);
    const double q = p.oscillation_bound() + std::max(std::abs(ms.mu.front()), std::abs(ms.mu.back()));

    // Free levels (2πk+t)² + μ_a and (2πl+t)² + μ_b cross at
    // t ≡ πs + (μ_b − μ_a)/(4πs), s = k − l, at energy about (πs)². For large
    // s these crossings crowd into a single grid cell next to 0 or π and the
    // sorted band functions pick up several kinks per cell, so they are
    // sampled as well.
    const int smax = static_cast<int>(std::ceil(std::sqrt(std::max(0.0, table.lambda_max + q)) / pi)) + 1;
    std::vector<double> extra;
    for (int sh = 1; sh <= smax; ++sh)
        for (std::size_t i = 0; i < ms.dim(); ++i)
            for (std::size_t j = 0; j < ms.dim(); ++j)
                if (ms.mu[i] != ms.mu[j])
                    extra.push_back(normalize_quasimomentum(pi * sh + (ms.mu[j] - ms.mu[i]) / (4.0 * pi * sh)));
    std::sort(extra.begin(), extra.end());

    struct Sample {
        double t;
        const std::vector<double>* values;
    };
    std::vector<std::vector<double>> extra_values;
    {
        std::vector<double> keep;
        for (double t : extra) {
            const auto it = std::lower_bound(table.t.begin(), table.t.end(), t);
            const bool near_grid = (it != table.t.end() && *it - t < 1e-12) ||
                                   (it != table.t.begin() && t - *(it - 1) < 1e-12);
            if (!near_grid && (keep.empty() || t - keep.back() >= 1e-12)) keep.push_back(t);
        }
        extra = std::move(keep);
        extra_values.resize(extra.size());
        parallel_for(extra.size(), workers, [&](std::size_t i) {
            auto v = galerkin_eigenvalues(p, BlochParams(extra[i], table.K));
            v.resize(B);
            extra_values[i] = std::move(v);
        });
    }
    std::vector<Sample> samples;
    samples.reserve(table.t.size() + extra.size());
    for (std::size_t i = 0; i < table.t.size(); ++i) samples.push_back({table.t[i], &table.values[i]});
    for (std::size_t i = 0; i < extra.size(); ++i) samples.push_back({extra[i], &extra_values[i]});
    std::sort(samples.begin(), samples.end(), [](const Sample& x, const Sample& y) { return x.t < y.t; });
    const std::size_t N = samples.size();

    // Every discrete local extremum of the merged samples is refined on the
    // span of its two neighbours. By Hellmann-Feynman |dλ/dt| ≤ 2√(λ + q)
    // with q ≥ sup‖Q(x)‖₂, so a sample v with neighbours within h cannot hide
    // anything beyond v ± √(λ + q)h; such candidates are skipped when they
    // cannot beat the current extreme.
    auto reach = [&](double top, double h) { return std::sqrt(std::max(0.0, top + table.jump_bound) + q) * h + 1e-12; };
    parallel_for(B, workers, [&](std::size_t n) {
        BandInterval& b = out[n];
        for (std::size_t i = 0; i < N; ++i) {
            const double v = (*samples[i].values)[n];
            const double l = (*samples[(i + N - 1) % N].values)[n];
            const double r = (*samples[(i + 1) % N].values)[n];
            if (v < b.lo) {
                b.lo = v;
                b.t_lo = samples[i].t;
            }
            if (v > b.hi) {
                b.hi = v;
                b.t_hi = samples[i].t;
            }
            const double t0 = i == 0 ? samples[N - 1].t - 2.0 * pi : samples[i - 1].t;
            const double t1 = i + 1 == N ? samples[0].t + 2.0 * pi : samples[i + 1].t;
            const double h = std::max(samples[i].t - t0, t1 - samples[i].t);
            auto f = [&](double t) { return band_value(p, table.K, t, n); };
            if (v <= l && v <= r && v - reach(std::max(l, r), h) < b.lo) {
                const auto m = boost::math::tools::brent_find_minima(f, t0, t1, 40);
                if (m.second < b.lo) {
                    b.lo = m.second;
                    b.t_lo = normalize_quasimomentum(m.first);
                }
            }
            if (v >= l && v >= r && v + reach(v, h) > b.hi) {
                const auto m = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, t0, t1, 40);
                if (-m.second > b.hi) {
                    b.hi = -m.second;
                    b.t_hi = normalize_quasimomentum(m.first);
                }
            }
        }
    });
    return out;
}

GapReport detect_gaps(const std::vector<BandInterval>& bands, double lambda_max, double merge_tol) {
    GapReport rep;
    rep.lambda_max = lambda_max;
    rep.merge_tol = merge_tol > 0.0 ? merge_tol : 1e-7 * lambda_max;
    rep.bands = bands;

    std::vector<Gap> pieces;
    for (const auto& b : bands)
        if (b.lo < lambda_max) pieces.push_back({b.lo, std::min(b.hi, lambda_max)});
    if (pieces.empty()) return rep;
    std::sort(pieces.begin(), pieces.end(), [](const Gap& a, const Gap& b) { return a.lo < b.lo; });
    rep.lambda_min = pieces.front().lo;

    Gap cur = pieces.front();
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        const Gap& nx = pieces[i];
        if (nx.lo > cur.hi) {
            const Gap g{cur.hi, nx.lo};
            if (g.width() >= rep.merge_tol) {
                rep.spectrum.push_back(cur);
                rep.gaps.push_back(g);
                cur = nx;
                continue;
            }
            rep.unresolved.push_back(g);
        }
        cur.hi = std::max(cur.hi, nx.hi);
    }
    rep.spectrum.push_back(cur);
    // Nothing below the cutoff covers (cur.hi, Λ_max): that stretch is a gap
    // cut off at Λ_max.
    if (lambda_max - cur.hi >= rep.merge_tol)
        rep.gaps.push_back({cur.hi, lambda_max});
    else if (cur.hi < lambda_max)
        rep.unresolved.push_back({cur.hi, lambda_max});
    return rep;
}

GapReport detect_gaps(const BandTable& table, double merge_tol) {
    return detect_gaps(grid_bands(table), table.lambda_max, merge_tol);
}

std::vector<EdgeCheck> cross_check_edges(const MatrixPotential& p, const BandTable& table, double cap) {
    const double top = std::min(cap, table.lambda_max);
    std::vector<EdgeCheck> out;
    for (std::size_t idx : {table.index_zero, table.index_pi}) {
        EdgeCheck ec;
        ec.t = table.t[idx];
        std::vector<double> gal;
        for (double v : table.values[idx])
            if (v < top) gal.push_back(v);
        if (gal.empty()) {
            out.push_back(ec);
            continue;
        }
        // Bracket ends sit midway to the neighbouring eigenvalues so that no
        // root lands on them.
        const auto& row = table.values[idx];
        const double lo = gal.front() - 1.0;
        double hi = top;
        if (gal.size() < row.size()) hi = 0.5 * (gal.back() + row[gal.size()]);
        const QuasimomentumRoots qr = find_eigenvalues(p, ec.t, {lo, hi}, {.validate = false});
        std::vector<double> roots;
        for (const auto& r : qr.roots)
            for (int c = 0; c < r.multiplicity; ++c) roots.push_back(r.lambda);
        ec.counts_match = roots.size() == gal.size();
        ec.compared = std::min(roots.size(), gal.size());
        for (std::size_t i = 0; i < ec.compared; ++i) ec.max_deviation = std::max(ec.max_deviation, std::abs(roots[i] - gal[i]));
        if (!ec.counts_match)
            ec.note = std::to_string(roots.size()) + " oracle roots against " + std::to_string(gal.size()) +
                      " Galerkin eigenvalues";
        out.push_back(ec);
    }
    return out;
}

FiniteGapVerdict finite_gap_condition(const MeanSpectrum& ms, double tol_sum) {
    FiniteGapVerdict v;
    const std::size_t m = ms.dim();
    std::vector<std::size_t> simple;
    for (std::size_t j = 0; j < m; ++j)
        if (ms.simple[j]) simple.push_back(j);
    v.simple_count = simple.size();
    if (simple.size() < 3) {
        v.reason = "fewer than three simple eigenvalues";
        return v;
    }
    const auto& mu = ms.mu;
    auto near = [&](double a, double b) { return std::abs(a - b) <= tol_sum; };

    for (std::size_t a = 0; a < simple.size(); ++a)
        for (std::size_t b = a + 1; b < simple.size(); ++b)
            for (std::size_t c = b + 1; c < simple.size(); ++c) {
                const std::size_t j1 = simple[a], j2 = simple[b], j3 = simple[c];
                bool violated = false;
                for (std::size_t i1 = 0; i1 < m && !violated; ++i1)
                    for (std::size_t i2 = 0; i2 < m && !violated; ++i2)
                        for (std::size_t i3 = 0; i3 < m && !violated; ++i3) {
                            const double s1 = mu[j1] + mu[i1], s2 = mu[j2] + mu[i2], s3 = mu[j3] + mu[i3];
                            if (near(s1, s2) && near(s2, s3) && near(s1, s3)) {
                                violated = true;
                                if (!v.violation) {
                                    v.violation = {i1 + 1, i2 + 1, i3 + 1};
                                    v.violated_j = {j1 + 1, j2 + 1, j3 + 1};
                                    v.common_sum = s1;
                                }
                            }
                        }
                if (!violated) {
                    v.holds = true;
                    v.witness = {j1 + 1, j2 + 1, j3 + 1};
                    v.violation.reset();
                    v.violated_j.reset();
                    v.common_sum.reset();
                    v.reason = "triple of simple eigenvalues with at least two distinct sums";
                    return v;
                }
            }
    v.reason = "every triple of simple eigenvalues admits three equal sums";
    return v;
}

GapCensus gap_census_demo(const MatrixPotential& p, const SweepOptions& opt) {
    const BandTable bt = sweep_bands(p, opt);
    return gap_census(finite_gap_condition(mean_spectrum(p)), detect_gaps(refine_bands(p, bt, opt.workers), bt.lambda_max));
}

GapCensus gap_census(const FiniteGapVerdict& verdict, const GapReport& gaps) {
    GapCensus gc;
    gc.verdict = verdict;
    gc.gaps = gaps;

    const double half = 0.5 * gaps.lambda_max;
    // Unresolved gaps still count against the upper half.
    std::vector<Gap> every = gc.gaps.gaps;
    every.insert(every.end(), gc.gaps.unresolved.begin(), gc.gaps.unresolved.end());
    for (const Gap& g : every) {
        const double mid = 0.5 * (g.lo + g.hi);
        if (mid < half)
            gc.largest_lower = std::max(gc.largest_lower, g.width());
        else
            gc.largest_upper = std::max(gc.largest_upper, g.width());
    }
    gc.vacuous = every.empty();
    gc.upper_smaller = gc.vacuous || gc.largest_upper < gc.largest_lower;
    if (gc.gaps.gaps.empty()) {
        gc.h_empirical = gc.gaps.lambda_min;
    } else {
        const Gap& top = gc.gaps.gaps.back();
        gc.h_empirical = top.hi;
        gc.highest_gap_midpoint = 0.5 * (top.lo + top.hi);
    }
    return gc;
}

}  // namespace hillbloch
