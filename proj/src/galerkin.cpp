#include "hillbloch/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace hillbloch {

namespace {
constexpr double pi = std::numbers::pi;
}

double normalize_quasimomentum(double t) {
    if (!std::isfinite(t)) throw SpectralError(ErrorCode::InvalidArgument, "quasimomentum is not finite");
    double r = t - 2.0 * pi * std::floor((t + 0.5 * pi) / (2.0 * pi));
    if (r >= 1.5 * pi) r -= 2.0 * pi;
    if (r < -0.5 * pi) r += 2.0 * pi;
    return r;
}

BlochParams::BlochParams(double t_, int K_) : t(normalize_quasimomentum(t_)), K(K_) {
    if (K < 0) throw SpectralError(ErrorCode::InvalidArgument, "truncation half-width must be nonnegative");
}

int recommended_truncation(int k_max, int degree) { return 4 * std::abs(k_max) + degree; }

UnperturbedLadder::UnperturbedLadder(double t, int K, std::vector<double> mu) : t_(t), K_(K), mu_(std::move(mu)) {}

double UnperturbedLadder::value(int k, std::size_t j) const {
    const double w = 2.0 * pi * k + t_;
    return w * w + mu_[j];
}

LabelAssignment label_eigenpairs(const std::vector<double>& values, const UnperturbedLadder& ladder, double tie_tol) {
    const std::size_t m = ladder.dim();
    const int K = ladder.K();
    const std::size_t total = ladder.size();
    if (values.size() != total)
        throw SpectralError(ErrorCode::DimensionMismatch, "eigenvalue count does not match ladder size");

    struct Entry {
        double value;
        int k;
        std::size_t j;
    };
    std::vector<Entry> entries;
    entries.reserve(total);
    for (int k = -K; k <= K; ++k)
        for (std::size_t j = 0; j < m; ++j) entries.push_back({ladder.value(k, j), k, j});
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });

    LabelAssignment out;
    // Ties: chain entries within tie_tol and order each run by (k, j).
    for (std::size_t a = 0; a < total;) {
        std::size_t b = a + 1;
        while (b < total && entries[b].value - entries[b - 1].value <= tie_tol) ++b;
        if (b - a > 1) {
            out.ambiguous_ties += b - a - 1;
            std::sort(entries.begin() + static_cast<std::ptrdiff_t>(a), entries.begin() + static_cast<std::ptrdiff_t>(b),
                      [](const Entry& x, const Entry& y) { return x.k != y.k ? x.k < y.k : x.j < y.j; });
        }
        a = b;
    }

    out.by_position.resize(total);
    out.position_of.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        out.by_position[i] = {entries[i].k, entries[i].j};
        out.position_of[static_cast<std::size_t>(entries[i].k + K) * m + entries[i].j] = i;
    }
    return out;
}

bool BlochSolution::labeled(int k, std::size_t j) const noexcept {
    return std::abs(k) <= params.K && j < m;
}

bool BlochSolution::boundary_contaminated(int k) const noexcept {
    return std::abs(k) > params.K - degree - 2;
}

std::size_t BlochSolution::position(int k, std::size_t j) const {
    if (!labeled(k, j))
        throw SpectralError(ErrorCode::UnknownLabel,
                            "(k=" + std::to_string(k) + ", j=" + std::to_string(j) + ") is not labeled");
    return labels.position_of[static_cast<std::size_t>(k + params.K) * m + j];
}

double BlochSolution::eigenvalue(int k, std::size_t j) const { return raw.values[position(k, j)]; }

std::vector<cplx> BlochSolution::coefficient_slice(int k, std::size_t j, int n) const {
    const std::size_t pos = position(k, j);
    if (!has_vectors()) throw SpectralError(ErrorCode::InvalidArgument, "solution was computed without eigenvectors");
    if (std::abs(n) > params.K) throw SpectralError(ErrorCode::InvalidArgument, "basis index outside truncation");
    std::vector<cplx> out(m);
    const std::size_t row0 = static_cast<std::size_t>(n + params.K) * m;
    for (std::size_t s = 0; s < m; ++s) out[s] = raw.vectors(row0 + s, pos);
    return out;
}

std::vector<cplx> BlochSolution::coefficients(int k, std::size_t j) const {
    const std::size_t pos = position(k, j);
    if (!has_vectors()) throw SpectralError(ErrorCode::InvalidArgument, "solution was computed without eigenvectors");
    return raw.vectors.column(pos);
}

ComplexMatrix assemble(const MatrixPotential& p, const BlochParams& bp) {
    const std::size_t m = p.dim();
    const int K = bp.K;
    const int d = p.degree();
    const std::size_t size = m * static_cast<std::size_t>(2 * K + 1);
    ComplexMatrix h(size, size);
    for (int n = -K; n <= K; ++n) {
        const std::size_t r0 = static_cast<std::size_t>(n + K) * m;
        for (int q = std::max(-K, n - d); q <= std::min(K, n + d); ++q) {
            const ComplexMatrix& blk = p.block(n - q);
            const std::size_t c0 = static_cast<std::size_t>(q + K) * m;
            for (std::size_t s = 0; s < m; ++s)
                for (std::size_t u = 0; u < m; ++u) h(r0 + s, c0 + u) = blk(s, u);
        }
        const double w = 2.0 * pi * n + bp.t;
        for (std::size_t s = 0; s < m; ++s) h(r0 + s, r0 + s) += w * w;
    }
    return h;
}

BlochSolution solve(const MatrixPotential& p, const BlochParams& bp, const SolveOptions& opt) {
    BlochSolution sol;
    sol.params = bp;
    sol.m = p.dim();
    sol.degree = p.degree();
    sol.mean = mean_spectrum(p);
    const ComplexMatrix h = assemble(p, bp);
    if (opt.vectors) {
        sol.raw = eig_hermitian(h, opt.eigen);
    } else {
        sol.raw.values = eigvals_hermitian(h, opt.eigen);
    }
    sol.labels = label_eigenpairs(sol.raw.values, UnperturbedLadder(bp.t, bp.K, sol.mean.mu));
    return sol;
}

std::vector<double> galerkin_eigenvalues(const MatrixPotential& p, const BlochParams& bp, const EigenOptions& opt) {
    return eigvals_hermitian(assemble(p, bp), opt);
}

cplx eigenfunction_overlap(const BlochSolution& sol, int k, std::size_t j, int n, std::span<const cplx> target) {
    if (target.size() != sol.m) throw SpectralError(ErrorCode::DimensionMismatch, "target vector has wrong length");
    const auto slice = sol.coefficient_slice(k, j, n);
    // (Ψ, v ⊗ φ_n) = Σ_s c_{n,s} conj(v_s)
    return inner(target, slice);
}

}  // namespace hillbloch
