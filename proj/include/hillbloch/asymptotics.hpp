#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hillbloch/galerkin.hpp"
#include "hillbloch/potential.hpp"

namespace hillbloch {

enum class ResonanceBranch { Generic, NearZero, NearPi };

/// A(k, t): the indices whose unperturbed levels can sit close to (2πk+t)².
struct ResonanceIndexSet {
    int k = 0;
    double t = 0.0;  // reduced into [−π/2, 3π/2)
    ResonanceBranch branch = ResonanceBranch::Generic;
    std::vector<int> members;
};

/// {k} on T(k), {k, −k} for |t| < 1/ln|k|, {k, −k−1} for |t − π| < 1/ln|k|.
/// Throws IndexTooSmall for |k| ≤ 2.
ResonanceIndexSet a_set(int k, double t);

struct OpenInterval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const noexcept { return lo < x && x < hi; }
    double length() const noexcept { return hi - lo; }
    bool operator==(const OpenInterval&) const = default;
};

/// Sorts and joins intervals that overlap or touch.
std::vector<OpenInterval> merge_intervals(std::vector<OpenInterval> in);

/// S(k, j, n, i) for n ∈ {−k, −k−1} with dmu = μ_i − μ_j:
///   n = −k:   ((dmu − α)/(8πk), (dmu + α)/(8πk))
///   n = −k−1: π + ((dmu − α), (dmu + α))/(4π(2k+1))
/// Throws InvalidN for any other n, IndexTooSmall for k ≤ 2.
OpenInterval s_interval(int k, int n, double dmu, double alpha);

struct WidthSchedule {
    int k = 0;
    double c8 = 1.0;
    double b_k = 0.0;
    double eps = 0.0;    // c₈ (ln k / k + b_k)
    double alpha = 0.0;  // √eps
};

WidthSchedule width_schedule(const MatrixPotential& p, int k, double c8);

/// B(α_k, μ_j).
struct ForbiddenSet {
    int k = 0;
    std::size_t j = 0;
    double alpha = 0.0;
    std::vector<OpenInterval> pieces;     // one per (n, i), n = −k first
    std::vector<OpenInterval> intervals;  // merged union

    bool contains(double t) const;  // t reduced first
    double measure() const;
};

/// Throws NonSimpleEigenvalue when μ_j is not simple.
ForbiddenSet forbidden_set(const MeanSpectrum& ms, std::size_t j, int k, double alpha);
inline ForbiddenSet forbidden_set(const MeanSpectrum& ms, std::size_t j, int k, const WidthSchedule& ws) {
    return forbidden_set(ms, j, k, ws.alpha);
}

/// λ_{k,j}(t) − (2πk+t)² − μ_j. Throws UnknownLabel, BoundaryContaminated.
double residual(const BlochSolution& sol, const MeanSpectrum& ms, int k, std::size_t j);

struct DecayOptions {
    double slope_max = -0.8;
    double zero_tol = 1e-9;
    std::size_t min_samples = 8;
};

struct DecayReport {
    std::vector<std::pair<int, double>> samples;
    bool exact = false;  // every |r_k| ≤ zero_tol
    std::optional<double> slope;
    std::optional<double> intercept;
    double c_hat = 0.0;        // max |r_k| k / ln k
    double c_hat_upper = 0.0;  // same over the upper half of the k-range
    bool stable = false;
    bool pass = false;
};

/// Least squares of log|r_k| against log k plus the fitted constant of the
/// ln k / k bound. Throws InsufficientSamples, InvalidArgument (k not strictly
/// ascending or k < 2).
DecayReport verify_decay(const std::vector<std::pair<int, double>>& residuals, const DecayOptions& opt = {});

/// ‖Ψ_{k,j} − PΨ_{k,j}‖ with P the projection onto v_i ⊗ e^{i(2πn+t)x}
/// for n ∈ A(k, t) and μ_i = μ_j. Needs eigenvectors.
double projection_defect(const BlochSolution& sol, const MeanSpectrum& ms, int k, std::size_t j);

struct LeadingTerm {
    double distance = 0.0;        // min_θ ‖Ψ_{k,j} − e^{iθ} v_j e^{i(2πk+t)x}‖
    double slice_distance = 0.0;  // min_θ ‖c_k − e^{iθ} v_j‖ on the index-k slice alone
    double overlap = 0.0;         // |(Ψ_{k,j}, Φ_{k,j})|
};

/// Throws NonSimpleEigenvalue, TInForbiddenSet.
LeadingTerm leading_term_check(const BlochSolution& sol, const MeanSpectrum& ms, int k, std::size_t j,
                               const WidthSchedule& ws);

/// Number of Galerkin eigenvalues in (μ_{k,j}(t) − ε_k, μ_{k,j}(t) + ε_k).
/// Throws NonSimpleEigenvalue, TInForbiddenSet.
std::size_t uniqueness_census(const BlochSolution& sol, const MeanSpectrum& ms, const WidthSchedule& ws, int k,
                              std::size_t j);
std::size_t uniqueness_census(const MatrixPotential& p, const MeanSpectrum& ms, const WidthSchedule& ws, int k,
                              std::size_t j, double t);

struct ConstantSample {
    int k = 0;
    double value = 0.0;
    double scale = 1.0;
};

struct ConstantFit {
    double c_hat = 0.0;        // max value / scale
    double c_hat_upper = 0.0;  // over samples with k at or above the median k
    bool stable = false;       // c_hat_upper ≤ 2 c_hat and finite
};

ConstantFit fit_constant(const std::vector<ConstantSample>& samples);

struct C8Calibration {
    double c8 = 1.0;
    bool calibrated = false;  // false: residuals vanished, configured value kept
    double max_ratio = 0.0;
};

/// ĉ₈ = 2 max |λ_{k,j} − μ_{k,j}| / (ln k/k + b_k) over k ∈ [k_lo, k_hi],
/// all j and the given t samples.
C8Calibration calibrate_c8(const MatrixPotential& p, int k_lo, int k_hi, const std::vector<double>& ts, int K,
                           double fallback);

struct VerifyConfig {
    double t = 1.5707963267948966;
    int k_min = 8;
    int k_max = 64;
    int K = 0;                  // 0: 4 k_max + d
    double c8 = 1.0;
    bool calibrate = true;
    int n0 = 8;
    int census_pairs = 50;
    int census_k_max = 24;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

struct CensusEntry {
    int k = 0;
    double t = 0.0;
    std::size_t j = 0;
    std::size_t count = 0;
    double distance = 0.0;
    double alpha = 0.0;
};

struct VerifyReport {
    VerifyConfig config;
    int K = 0;
    C8Calibration c8;
    std::vector<DecayReport> residual_by_j;
    DecayReport residual_sup;         // r_k = max_j |r_{k,j}|; drives PASS
    DecayReport projection_sup;
    std::vector<ConstantSample> leading_samples;
    ConstantFit leading_fit;
    bool leading_pass = false;
    std::vector<CensusEntry> census;
    ConstantFit census_fit;
    bool census_pass = false;
    std::vector<std::size_t> skipped_j;  // non-simple μ_j are left out of (c)
};

/// Runs the residual, projection, leading-term and uniqueness suites.
VerifyReport run_verification(const MatrixPotential& p, const VerifyConfig& cfg);

/// Seeded (k, t) pairs with t outside B(α_k, μ_j) for every simple j.
std::vector<std::pair<int, double>> census_pairs(const MatrixPotential& p, const MeanSpectrum& ms, double c8,
                                                 int k_lo, int k_hi, int count, std::uint64_t seed);

}  // namespace hillbloch
