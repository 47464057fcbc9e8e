#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hillbloch/asymptotics.hpp"
#include "hillbloch/potential.hpp"

namespace hillbloch {

struct SweepOptions {
    int K = 32;
    int grid_size = 128;       // rounded up to a multiple of 4 so that 0 and π are grid points
    double lambda_max = 1000.0;
    unsigned workers = 1;
};

/// Sorted-position band functions on a uniform t-grid of [−π/2, 3π/2).
struct BandTable {
    int K = 0;
    double lambda_max = 0.0;
    std::vector<double> t;
    std::vector<std::vector<double>> values;  // values[i][n], n < bands
    std::size_t bands = 0;
    std::size_t index_zero = 0;  // t[index_zero] == 0
    std::size_t index_pi = 0;    // t[index_pi] == π
    double max_jump = 0.0;       // largest |Δλ| between neighbouring samples, any band
    double jump_bound = 0.0;     // 2(2πK + 2π)Δt + tolerance
    bool continuous = true;
};

/// Throws CutoffTooHigh when Λ_max > (2π(K − d − 2))², InvalidArgument for
/// grid_size < 64.
BandTable sweep_bands(const MatrixPotential& p, const SweepOptions& opt);

struct BandInterval {
    std::size_t index = 0;  // sorted position, 0-based
    double lo = 0.0;
    double hi = 0.0;
    double t_lo = 0.0;  // where the extremes were found
    double t_hi = 0.0;
};

/// Refines interior extrema of each band function (edges at t = 0, π are grid
/// points already). Uses values-only solves at the table's K.
std::vector<BandInterval> refine_bands(const MatrixPotential& p, const BandTable& table, unsigned workers = 1);

/// Unrefined ranges straight from the grid.
std::vector<BandInterval> grid_bands(const BandTable& table);

struct Gap {
    double lo = 0.0;
    double hi = 0.0;
    double width() const noexcept { return hi - lo; }
};

struct GapReport {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double merge_tol = 0.0;
    std::vector<BandInterval> bands;
    std::vector<Gap> spectrum;    // merged closed pieces inside [λ_min, Λ_max]
    std::vector<Gap> gaps;        // resolved open gaps, ascending
    std::vector<Gap> unresolved;  // gaps narrower than merge_tol
};

/// δ_merge ≤ 0 selects the default 1e-7·Λ_max.
GapReport detect_gaps(const std::vector<BandInterval>& bands, double lambda_max, double merge_tol = -1.0);
GapReport detect_gaps(const BandTable& table, double merge_tol = -1.0);

/// Compares the band edge candidates at t = 0 and π with floquet-oracle roots.
struct EdgeCheck {
    double t = 0.0;
    std::size_t compared = 0;
    double max_deviation = 0.0;
    bool counts_match = true;
    std::string note;
};

/// Only eigenvalues below min(cap, Λ_max) are compared; the oracle gets slow
/// at high energy.
std::vector<EdgeCheck> cross_check_edges(const MatrixPotential& p, const BandTable& table,
                                         double cap = std::numeric_limits<double>::infinity());

struct FiniteGapVerdict {
    bool holds = false;
    std::size_t simple_count = 0;
    std::optional<std::array<std::size_t, 3>> witness;    // 1-based j₁ < j₂ < j₃
    std::optional<std::array<std::size_t, 3>> violation;  // 1-based (i₁, i₂, i₃) for the first j-triple
    std::optional<std::array<std::size_t, 3>> violated_j;
    std::optional<double> common_sum;
    std::string reason;
};

/// holds iff some simple triple μ_{j₁} < μ_{j₂} < μ_{j₃} has no (i₁, i₂, i₃)
/// with μ_{j₁}+μ_{i₁} = μ_{j₂}+μ_{i₂} = μ_{j₃}+μ_{i₃} (within tol_sum).
FiniteGapVerdict finite_gap_condition(const MeanSpectrum& ms, double tol_sum = 1e-9);

struct GapCensus {
    FiniteGapVerdict verdict;
    GapReport gaps;
    double largest_lower = 0.0;  // widest gap (resolved or not) with midpoint below Λ_max / 2
    double largest_upper = 0.0;  // widest gap with midpoint at or above Λ_max / 2
    bool upper_smaller = true;   // every upper gap narrower than the widest lower one
    bool vacuous = false;        // no gaps at all, resolved or not
    double h_empirical = 0.0;    // top of the highest resolved gap, or λ_min
    std::optional<double> highest_gap_midpoint;
    std::string label = "consistency demonstration, not a proof";
};

GapCensus gap_census_demo(const MatrixPotential& p, const SweepOptions& opt);
GapCensus gap_census(const FiniteGapVerdict& verdict, const GapReport& gaps);

}  // namespace hillbloch
