#pragma once

#include <optional>
#include <vector>

#include "hillbloch/hermitian.hpp"
#include "hillbloch/potential.hpp"

namespace hillbloch {

/// Reduce t mod 2π into [−π/2, 3π/2).
double normalize_quasimomentum(double t);

/// Fourier truncation of the fiber operator L_t: basis e^{i(2πn+t)x} ⊗ e_s
/// for n ∈ [−K, K], s ∈ [0, m).
struct BlochParams {
    double t = 0.0;
    int K = 16;

    BlochParams() = default;
    BlochParams(double t_, int K_);
};

/// Truncation width that keeps index k at least a factor four inside the
/// basis, K = 4·k_max + d.
int recommended_truncation(int k_max, int degree);

struct BlochLabel {
    int k = 0;
    std::size_t j = 0;  // 0-based index into MeanSpectrum::mu
};

/// μ_{k,j}(t) = (2πk+t)² + μ_j, Φ_{k,j,t} = v_j e^{i(2πk+t)x}.
class UnperturbedLadder {
public:
    UnperturbedLadder(double t, int K, std::vector<double> mu);

    double value(int k, std::size_t j) const;
    double t() const noexcept { return t_; }
    int K() const noexcept { return K_; }
    std::size_t dim() const noexcept { return mu_.size(); }
    std::size_t size() const noexcept { return mu_.size() * static_cast<std::size_t>(2 * K_ + 1); }

private:
    double t_;
    int K_;
    std::vector<double> mu_;
};

struct LabelAssignment {
    std::vector<BlochLabel> by_position;   // label of sorted eigenvalue i
    std::vector<std::size_t> position_of;  // index (k+K)·m + j -> sorted position
    std::size_t ambiguous_ties = 0;        // ladder ties within tie_tol (warning only)
};

/// Rank matching of ascending eigenvalues against the ascending ladder; within
/// ladder ties the order is (k, j) lexicographic. Rank matching minimizes
/// Σ|λ − μ| and is a bijection by construction.
LabelAssignment label_eigenpairs(const std::vector<double>& values, const UnperturbedLadder& ladder,
                                 double tie_tol = 1e-9);

struct SolveOptions {
    bool vectors = true;
    EigenOptions eigen{};
};

class BlochSolution {
public:
    BlochParams params;
    std::size_t m = 0;
    int degree = 0;
    MeanSpectrum mean;
    EigenDecomposition raw;
    LabelAssignment labels;

    std::size_t size() const noexcept { return raw.values.size(); }
    bool has_vectors() const noexcept { return !raw.vectors.empty(); }

    bool labeled(int k, std::size_t j) const noexcept;
    /// |k| > K − d − 2: too close to the truncation edge to be trusted.
    bool boundary_contaminated(int k) const noexcept;
    std::size_t position(int k, std::size_t j) const;  // throws UnknownLabel
    double eigenvalue(int k, std::size_t j) const;     // λ_{k,j}(t)
    /// Coefficients (Ψ_{k,j,t}, φ_{n,s,t}) for s = 0..m−1.
    std::vector<cplx> coefficient_slice(int k, std::size_t j, int n) const;
    /// Full coefficient vector of Ψ_{k,j,t}, ordered (n, s) lexicographic.
    std::vector<cplx> coefficients(int k, std::size_t j) const;
};

/// Galerkin matrix: block (n, p) = Q_{n−p} for n ≠ p and (2πn+t)² I + Q_0 on
/// the diagonal; rows ordered (n, s) with n from −K to K.
ComplexMatrix assemble(const MatrixPotential& p, const BlochParams& bp);

BlochSolution solve(const MatrixPotential& p, const BlochParams& bp, const SolveOptions& opt = {});

/// Sorted Galerkin eigenvalues only.
std::vector<double> galerkin_eigenvalues(const MatrixPotential& p, const BlochParams& bp,
                                         const EigenOptions& opt = {});

/// (Ψ_{k,j,t}, Φ_{n,·,t}) with Φ = target ⊗ e^{i(2πn+t)x}, i.e. Σ_s c_{n,s} conj(target_s).
cplx eigenfunction_overlap(const BlochSolution& sol, int k, std::size_t j, int n, std::span<const cplx> target);

}  // namespace hillbloch
