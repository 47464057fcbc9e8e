#include "hillbloch/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hillbloch/parallel.hpp"

namespace hillbloch {

namespace {

constexpr double pi = std::numbers::pi;

void require_index(int k) {
    if (std::abs(k) <= 2)
        throw SpectralError(ErrorCode::IndexTooSmall, "|k| = " + std::to_string(std::abs(k)) + " is below 3");
}

void require_simple(const MeanSpectrum& ms, std::size_t j) {
    if (j >= ms.dim()) throw SpectralError(ErrorCode::UnknownLabel, "j = " + std::to_string(j) + " out of range");
    if (!ms.simple[j])
        throw SpectralError(ErrorCode::NonSimpleEigenvalue, "mu_" + std::to_string(j + 1) + " is not simple");
}

double squared_norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return s;
}

double log_over(int k) { return std::log(static_cast<double>(k)) / static_cast<double>(k); }

}  // namespace

ResonanceIndexSet a_set(int k, double t) {
    require_index(k);
    ResonanceIndexSet out;
    out.k = k;
    out.t = normalize_quasimomentum(t);
    const double w = 1.0 / std::log(static_cast<double>(std::abs(k)));
    if (std::abs(out.t) < w) {
        out.branch = ResonanceBranch::NearZero;
        out.members = {k, -k};
    } else if (std::abs(out.t - pi) < w) {
        out.branch = ResonanceBranch::NearPi;
        out.members = {k, -k - 1};
    } else {
        out.members = {k};
    }
    return out;
}

std::vector<OpenInterval> merge_intervals(std::vector<OpenInterval> in) {
    std::sort(in.begin(), in.end(), [](const OpenInterval& a, const OpenInterval& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    });
    std::vector<OpenInterval> out;
    for (const auto& iv : in) {
        // Touching open intervals leave a single point out; that point is
        // measure zero and is absorbed.
        if (!out.empty() && iv.lo <= out.back().hi)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    return out;
}

OpenInterval s_interval(int k, int n, double dmu, double alpha) {
    require_index(k);
    if (k < 0) throw SpectralError(ErrorCode::InvalidArgument, "s_interval needs k > 0");
    if (n == -k) {
        const double den = 8.0 * pi * k;
        return {(dmu - alpha) / den, (dmu + alpha) / den};
    }
    if (n == -k - 1) {
        const double den = 4.0 * pi * (2.0 * k + 1.0);
        return {pi + (dmu - alpha) / den, pi + (dmu + alpha) / den};
    }
    throw SpectralError(ErrorCode::InvalidN, "n = " + std::to_string(n) + " is neither -k nor -k-1");
}

WidthSchedule width_schedule(const MatrixPotential& p, int k, double c8) {
    require_index(k);
    if (!(c8 > 0.0) || !std::isfinite(c8)) throw SpectralError(ErrorCode::InvalidArgument, "c8 must be positive");
    WidthSchedule ws;
    ws.k = k;
    ws.c8 = c8;
    ws.b_k = coefficient_tail(p, k).b;
    ws.eps = c8 * (log_over(std::abs(k)) + ws.b_k);
    ws.alpha = std::sqrt(ws.eps);
    return ws;
}

bool ForbiddenSet::contains(double t) const {
    const double r = normalize_quasimomentum(t);
    return std::any_of(intervals.begin(), intervals.end(), [r](const OpenInterval& iv) { return iv.contains(r); });
}

double ForbiddenSet::measure() const {
    double s = 0.0;
    for (const auto& iv : intervals) s += iv.length();
    return s;
}

ForbiddenSet forbidden_set(const MeanSpectrum& ms, std::size_t j, int k, double alpha) {
    require_simple(ms, j);
    if (!(alpha > 0.0)) throw SpectralError(ErrorCode::InvalidArgument, "alpha must be positive");
    ForbiddenSet fs;
    fs.k = k;
    fs.j = j;
    fs.alpha = alpha;
    for (int n : {-k, -k - 1})
        for (std::size_t i = 0; i < ms.dim(); ++i) fs.pieces.push_back(s_interval(k, n, ms.mu[i] - ms.mu[j], alpha));
    fs.intervals = merge_intervals(fs.pieces);
    return fs;
}

double residual(const BlochSolution& sol, const MeanSpectrum& ms, int k, std::size_t j) {
    const double lambda = sol.eigenvalue(k, j);
    if (sol.boundary_contaminated(k))
        throw SpectralError(ErrorCode::BoundaryContaminated,
                            "k = " + std::to_string(k) + " is too close to K = " + std::to_string(sol.params.K));
    const double w = 2.0 * pi * k + sol.params.t;
    return lambda - w * w - ms.mu[j];
}

DecayReport verify_decay(const std::vector<std::pair<int, double>>& residuals, const DecayOptions& opt) {
    if (residuals.size() < opt.min_samples)
        throw SpectralError(ErrorCode::InsufficientSamples, std::to_string(residuals.size()) + " samples, need " +
                                                                std::to_string(opt.min_samples));
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if (residuals[i].first < 2) throw SpectralError(ErrorCode::InvalidArgument, "k must be at least 2");
        if (i > 0 && residuals[i].first <= residuals[i - 1].first)
            throw SpectralError(ErrorCode::InvalidArgument, "k must be strictly ascending");
        if (!std::isfinite(residuals[i].second)) throw SpectralError(ErrorCode::InvalidArgument, "residual not finite");
    }

    DecayReport rep;
    rep.samples = residuals;
    rep.exact = std::all_of(residuals.begin(), residuals.end(),
                            [&](const auto& s) { return std::abs(s.second) <= opt.zero_tol; });

    const std::size_t n = residuals.size();
    auto c_over = [&](std::size_t from) {
        double c = 0.0;
        for (std::size_t i = from; i < n; ++i) c = std::max(c, std::abs(residuals[i].second) / log_over(residuals[i].first));
        return c;
    };
    rep.c_hat = c_over(0);
    rep.c_hat_upper = c_over(n / 2);
    rep.stable = std::isfinite(rep.c_hat) && rep.c_hat_upper <= 2.0 * rep.c_hat;

    if (rep.exact) {
        rep.pass = true;
        return rep;
    }

    // Zero residuals only strengthen the bound; they are left out of the log fit.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (const auto& [k, r] : residuals) {
        if (r == 0.0) continue;
        const double x = std::log(static_cast<double>(k)), y = std::log(std::abs(r));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (used >= 2) {
        const double u = static_cast<double>(used);
        const double slope = (u * sxy - sx * sy) / (u * sxx - sx * sx);
        rep.slope = slope;
        rep.intercept = (sy - slope * sx) / u;
    }
    rep.pass = rep.slope && *rep.slope <= opt.slope_max && std::isfinite(rep.c_hat) && rep.stable;
    return rep;
}

double projection_defect(const BlochSolution& sol, const MeanSpectrum& ms, int k, std::size_t j) {
    const auto psi = sol.coefficients(k, j);
    const ResonanceIndexSet A = a_set(k, sol.params.t);
    const std::size_t m = sol.m;
    const int K = sol.params.K;

    std::vector<std::size_t> partners;
    for (std::size_t i = 0; i < ms.dim(); ++i)
        if (std::abs(ms.mu[i] - ms.mu[j]) <= ms.tol_simple) partners.push_back(i);

    double outside = 0.0;
    for (int n = -K; n <= K; ++n) {
        std::span<const cplx> slice(psi.data() + static_cast<std::size_t>(n + K) * m, m);
        if (std::find(A.members.begin(), A.members.end(), n) == A.members.end()) {
            outside += squared_norm(slice);
            continue;
        }
        std::vector<cplx> rest(slice.begin(), slice.end());
        for (std::size_t i : partners) {
            const auto v = ms.vector(i);
            const cplx c = inner(v, slice);
            for (std::size_t s = 0; s < m; ++s) rest[s] -= c * v[s];
        }
        outside += squared_norm(rest);
    }
    return std::sqrt(outside);
}

namespace {

void require_off_forbidden(const MeanSpectrum& ms, int k, std::size_t j, double alpha, double t) {
    require_simple(ms, j);
    const ForbiddenSet fs = forbidden_set(ms, j, k, alpha);
    if (fs.contains(t))
        throw SpectralError(ErrorCode::TInForbiddenSet, "t = " + std::to_string(t) + " lies in B(alpha_" +
                                                            std::to_string(k) + ", mu_" + std::to_string(j + 1) + ")");
}

}  // namespace

LeadingTerm leading_term_check(const BlochSolution& sol, const MeanSpectrum& ms, int k, std::size_t j,
                               const WidthSchedule& ws) {
    require_off_forbidden(ms, k, j, ws.alpha, sol.params.t);
    const auto psi = sol.coefficients(k, j);
    const auto slice = sol.coefficient_slice(k, j, k);
    const auto v = ms.vector(j);
    LeadingTerm lt;
    lt.overlap = std::abs(inner(v, slice));
    // min over θ of ‖a − e^{iθ} b‖² is ‖a‖² + ‖b‖² − 2|(b, a)|.
    lt.distance = std::sqrt(std::max(0.0, squared_norm(psi) + 1.0 - 2.0 * lt.overlap));
    lt.slice_distance = std::sqrt(std::max(0.0, squared_norm(slice) + 1.0 - 2.0 * lt.overlap));
    return lt;
}

std::size_t uniqueness_census(const BlochSolution& sol, const MeanSpectrum& ms, const WidthSchedule& ws, int k,
                              std::size_t j) {
    require_off_forbidden(ms, k, j, ws.alpha, sol.params.t);
    const double w = 2.0 * pi * k + sol.params.t;
    const double centre = w * w + ms.mu[j];
    return static_cast<std::size_t>(std::count_if(sol.raw.values.begin(), sol.raw.values.end(), [&](double x) {
        return std::abs(x - centre) < ws.eps;
    }));
}

std::size_t uniqueness_census(const MatrixPotential& p, const MeanSpectrum& ms, const WidthSchedule& ws, int k,
                              std::size_t j, double t) {
    const int K = 2 * std::abs(k) + p.degree() + 4;
    return uniqueness_census(solve(p, BlochParams(t, K), {.vectors = false}), ms, ws, k, j);
}

ConstantFit fit_constant(const std::vector<ConstantSample>& samples) {
    ConstantFit fit;
    if (samples.empty()) return fit;
    std::vector<int> ks;
    for (const auto& s : samples) ks.push_back(s.k);
    std::sort(ks.begin(), ks.end());
    const int median = ks[ks.size() / 2];
    for (const auto& s : samples) {
        const double c = s.value / s.scale;
        fit.c_hat = std::max(fit.c_hat, c);
        if (s.k >= median) fit.c_hat_upper = std::max(fit.c_hat_upper, c);
    }
    fit.stable = std::isfinite(fit.c_hat) && fit.c_hat_upper <= 2.0 * fit.c_hat;
    return fit;
}

C8Calibration calibrate_c8(const MatrixPotential& p, int k_lo, int k_hi, const std::vector<double>& ts, int K,
                           double fallback) {
    require_index(k_lo);
    if (k_hi < k_lo) throw SpectralError(ErrorCode::InvalidArgument, "empty calibration window");
    C8Calibration cal;
    cal.c8 = fallback;
    double max_abs = 0.0;
    for (double t : ts) {
        const BlochSolution sol = solve(p, BlochParams(t, K), {.vectors = false});
        for (int k = k_lo; k <= k_hi; ++k) {
            const double scale = log_over(k) + coefficient_tail(p, k).b;
            for (std::size_t j = 0; j < sol.m; ++j) {
                const double r = std::abs(residual(sol, sol.mean, k, j));
                max_abs = std::max(max_abs, r);
                cal.max_ratio = std::max(cal.max_ratio, r / scale);
            }
        }
    }
    if (max_abs > 1e-9) {
        cal.c8 = 2.0 * cal.max_ratio;
        cal.calibrated = true;
    }
    return cal;
}

std::vector<std::pair<int, double>> census_pairs(const MatrixPotential& p, const MeanSpectrum& ms, double c8,
                                                 int k_lo, int k_hi, int count, std::uint64_t seed) {
    require_index(k_lo);
    if (k_hi < k_lo || count < 0) throw SpectralError(ErrorCode::InvalidArgument, "empty census range");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_k(k_lo, k_hi);
    std::uniform_real_distribution<double> pick_t(-0.5 * pi, 1.5 * pi);
    std::vector<std::pair<int, double>> out;
    while (static_cast<int>(out.size()) < count) {
        const int k = pick_k(rng);
        const double t = pick_t(rng);
        const WidthSchedule ws = width_schedule(p, k, c8);
        bool ok = true;
        for (std::size_t j = 0; j < ms.dim() && ok; ++j)
            if (ms.simple[j] && forbidden_set(ms, j, k, ws).contains(t)) ok = false;
        if (ok) out.emplace_back(k, t);
    }
    return out;
}

VerifyReport run_verification(const MatrixPotential& p, const VerifyConfig& cfg) {
    const int d = p.degree();
    if (cfg.k_min <= 2 || cfg.n0 <= 2)
        throw SpectralError(ErrorCode::IndexTooSmall, "verification k-range must start at 3 or above");
    if (cfg.k_max <= cfg.k_min || cfg.census_k_max < cfg.n0)
        throw SpectralError(ErrorCode::InvalidArgument, "empty verification k-range");

    VerifyReport rep;
    rep.config = cfg;
    rep.K = cfg.K > 0 ? cfg.K : recommended_truncation(cfg.k_max, d);
    if (cfg.k_max > rep.K - d - 2)
        throw SpectralError(ErrorCode::BoundaryContaminated, "k_max exceeds K - d - 2 for K = " + std::to_string(rep.K));
    const MeanSpectrum ms = mean_spectrum(p);
    const std::size_t m = ms.dim();
    for (std::size_t j = 0; j < m; ++j)
        if (!ms.simple[j]) rep.skipped_j.push_back(j);

    // c₈ from a window of trusted indices at evenly spaced quasimomenta.
    std::vector<double> ts;
    for (int i = 0; i < 8; ++i) ts.push_back(-0.5 * pi + (i + 0.5) * (2.0 * pi / 8.0));
    if (cfg.calibrate)
        rep.c8 = calibrate_c8(p, cfg.n0, cfg.census_k_max, ts, 2 * cfg.census_k_max + d + 4, cfg.c8);
    else
        rep.c8 = {cfg.c8, false, 0.0};
    const double c8 = rep.c8.c8;

    // (a)-(b): eigenvalues at the full truncation.
    const BlochSolution values = solve(p, BlochParams(cfg.t, rep.K), {.vectors = false});
    std::vector<std::pair<int, double>> sup;
    rep.residual_by_j.resize(m);
    std::vector<std::vector<std::pair<int, double>>> per_j(m);
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
        double worst = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double r = residual(values, ms, k, j);
            per_j[j].emplace_back(k, r);
            worst = std::max(worst, std::abs(r));
        }
        sup.emplace_back(k, worst);
    }
    for (std::size_t j = 0; j < m; ++j) rep.residual_by_j[j] = verify_decay(per_j[j]);
    rep.residual_sup = verify_decay(sup);

    // Vectors for k ≤ k_max do not need the full truncation.
    const int Kv = std::min(rep.K, 2 * cfg.k_max + d + 4);
    const BlochSolution vecs = solve(p, BlochParams(cfg.t, Kv));
    std::vector<std::pair<int, double>> defect;
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
        double worst = 0.0;
        for (std::size_t j = 0; j < m; ++j) worst = std::max(worst, projection_defect(vecs, ms, k, j));
        defect.emplace_back(k, worst);
    }
    rep.projection_sup = verify_decay(defect);

    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
        const WidthSchedule ws = width_schedule(p, k, c8);
        for (std::size_t j = 0; j < m; ++j) {
            if (!ms.simple[j] || forbidden_set(ms, j, k, ws).contains(cfg.t)) continue;
            rep.leading_samples.push_back({k, leading_term_check(vecs, ms, k, j, ws).distance, ws.alpha});
        }
    }
    rep.leading_fit = fit_constant(rep.leading_samples);
    rep.leading_pass = !rep.leading_samples.empty() && rep.leading_fit.stable;

    // (c): uniqueness and concentration at seeded (k, t) pairs.
    const auto pairs = census_pairs(p, ms, c8, cfg.n0, cfg.census_k_max, cfg.census_pairs, cfg.seed);
    std::vector<std::vector<CensusEntry>> slots(pairs.size());
    parallel_for(pairs.size(), cfg.workers, [&](std::size_t idx) {
        const auto [k, t] = pairs[idx];
        const BlochSolution sol = solve(p, BlochParams(t, 2 * k + d + 4));
        const WidthSchedule ws = width_schedule(p, k, c8);
        for (std::size_t j = 0; j < m; ++j) {
            if (!ms.simple[j]) continue;
            CensusEntry e;
            e.k = k;
            e.t = sol.params.t;
            e.j = j;
            e.count = uniqueness_census(sol, ms, ws, k, j);
            e.distance = leading_term_check(sol, ms, k, j, ws).distance;
            e.alpha = ws.alpha;
            slots[idx].push_back(e);
        }
    });
    std::vector<ConstantSample> cs;
    for (auto& s : slots)
        for (auto& e : s) {
            cs.push_back({e.k, e.distance, e.alpha});
            rep.census.push_back(e);
        }
    rep.census_fit = fit_constant(cs);
    rep.census_pass = !rep.census.empty() && rep.census_fit.stable &&
                      std::all_of(rep.census.begin(), rep.census.end(), [](const CensusEntry& e) { return e.count == 1; });
    return rep;
}

}  // namespace hillbloch
