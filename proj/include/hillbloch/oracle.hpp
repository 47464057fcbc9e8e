#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hillbloch/hermitian.hpp"
#include "hillbloch/potential.hpp"

namespace hillbloch {

/// Transfer matrix of −y″ + Q y = λ y over one period, acting on (y, y′).
struct MonodromyMatrix {
    double lambda = 0.0;
    int steps = 0;
    ComplexMatrix m;              // 2m×2m
    double error_estimate = 0.0;  // max entry change against half the steps, /15 (RK4)
    cplx det{1.0, 0.0};
};

struct OracleRoot {
    double lambda = 0.0;
    int multiplicity = 1;
    double eigen_distance = 0.0;  // min_ρ |ρ − e^{it}|
    double sigma_min = 0.0;       // smallest singular value of M − e^{it} I
};

enum class RootStatus { Ok, SuspectedMissedRoot };

struct QuasimomentumRoots {
    double t = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    std::vector<OracleRoot> roots;
    std::size_t root_count = 0;        // Σ multiplicity
    std::size_t galerkin_count = 0;    // Galerkin eigenvalues inside the bracket
    int galerkin_K = 0;
    RootStatus status = RootStatus::Ok;
    std::string note;
};

struct OracleOptions {
    int steps = 4096;           // minimum RK4 steps; raised to 512√λ for high brackets
    double scan_step = 0.02;    // λ-grid step inside scan windows (never above (2π)²/4)
    double window_pad = 0.5;    // added around each Weyl window
    bool validate = true;       // compare root count with a Galerkin solve
};

/// Classical RK4 on Y′ = [[0, I], [Q − λ, 0]] Y, Y(0) = I. Throws
/// AccuracyFailure when |det M − 1| > 1e-5.
MonodromyMatrix monodromy(const MatrixPotential& p, double lambda, int steps);

/// Quasimomenta t ∈ [−π/2, 3π/2) of the unit-circle eigenvalues of M
/// (||ρ| − 1| ≤ 1e-6), ascending, one per eigenvalue.
std::vector<double> quasimomenta(const MonodromyMatrix& mono);

/// min_ρ |ρ(M(λ)) − e^{it}|
double eigen_distance(const MonodromyMatrix& mono, double t);

/// Real characteristic function e^{−imt} det(M(λ) − e^{it} I); it vanishes
/// exactly at the Bloch eigenvalues of L_t and is real because M is J-unitary.
double characteristic(const MonodromyMatrix& mono, double t);

/// All Bloch eigenvalues of L_t inside (lo, hi). The scan is restricted to
/// the windows |λ − μ_{k,j}(t)| ≤ sup‖Q − C‖ + pad, outside which no
/// eigenvalue can lie.
QuasimomentumRoots find_eigenvalues(const MatrixPotential& p, double t, std::pair<double, double> bracket,
                                    const OracleOptions& opt = {});

}  // namespace hillbloch
