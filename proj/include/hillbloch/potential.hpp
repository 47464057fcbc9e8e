#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hillbloch/hermitian.hpp"

namespace hillbloch {

/// Periodic Hermitian matrix potential Q(x) = Σ_{|n|≤d} Q_n e^{2πinx} with
/// Q_n = ∫₀¹ Q(x) e^{−2πinx} dx. Immutable once built; Q_{−n} = Q_n† holds
/// exactly after construction.
class MatrixPotential {
public:
    std::size_t dim() const noexcept { return m_; }
    int degree() const noexcept { return d_; }

    /// Q_n, or the zero matrix when |n| > d.
    const ComplexMatrix& block(int n) const;
    /// (Q_n)_{s,q}; zero outside the support.
    cplx coefficient(int n, std::size_t s, std::size_t q) const;

    /// Σ_n Q_n e^{2πinx}.
    ComplexMatrix evaluate(double x) const;

    /// Σ_{n≠0} ‖Q_n‖_F, an upper bound on sup_x ‖Q(x) − C‖₂.
    double oscillation_bound() const;

private:
    friend MatrixPotential from_fourier(std::size_t, const std::vector<std::pair<int, ComplexMatrix>>&);
    friend MatrixPotential from_samples(std::size_t, const std::vector<ComplexMatrix>&, int);

    std::size_t m_ = 0;
    int d_ = 0;
    std::vector<ComplexMatrix> blocks_;  // index n + d
    ComplexMatrix zero_;
};

struct MeanSpectrum {
    ComplexMatrix c;
    std::vector<double> mu;             // ascending
    ComplexMatrix vectors;              // column j is v_j
    std::vector<bool> simple;
    double tol_simple = 1e-9;

    std::size_t dim() const noexcept { return mu.size(); }
    std::vector<cplx> vector(std::size_t j) const { return vectors.column(j); }
};

struct CoefficientTail {
    int k = 0;
    double b = 0.0;
};

/// Missing conjugate blocks are filled with Q_{−n} = Q_n†. When both are given
/// they must agree to 1e-12; Q_0 must be Hermitian to the same tolerance.
MatrixPotential from_fourier(std::size_t m, const std::vector<std::pair<int, ComplexMatrix>>& blocks);

/// Samples Q(j/N), j = 0..N−1, projected onto degree d by DFT.
MatrixPotential from_samples(std::size_t m, const std::vector<ComplexMatrix>& samples, int degree);

MeanSpectrum mean_spectrum(const MatrixPotential& p, double tol_simple = 1e-9);

/// b_k = max |(Q_n)_{ij}| over n ∈ {2k, −2k, 2k+1, −2k−1}.
CoefficientTail coefficient_tail(const MatrixPotential& p, int k);

struct RandomPotentialSpec {
    std::size_t m = 2;
    int degree = 2;
    double norm = 1.0;              // Σ_n ‖Q_n‖_F after scaling (bounds sup ‖Q(x)‖₂)
    bool zero_mean = false;
    std::uint64_t seed = 1;
};

/// Seeded random trigonometric Hermitian potential (mt19937_64, uniform
/// entries in [−1, 1]).
MatrixPotential random_potential(const RandomPotentialSpec& spec);

/// Q + diag(shift) (adds to Q_0).
MatrixPotential add_mean(const MatrixPotential& p, const ComplexMatrix& c);
MatrixPotential scaled(const MatrixPotential& p, double factor);
/// Block-diagonal diag(a, b).
MatrixPotential block_diagonal(const MatrixPotential& a, const MatrixPotential& b);
/// U† Q U for constant unitary U.
MatrixPotential conjugated(const MatrixPotential& p, const ComplexMatrix& u);

}  // namespace hillbloch
