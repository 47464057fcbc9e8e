#include "hillbloch/potential.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace hillbloch {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    return (a + a.adjoint()) * cplx{0.5, 0.0};
}

}  // namespace

const ComplexMatrix& MatrixPotential::block(int n) const {
    if (n < -d_ || n > d_) return zero_;
    return blocks_[static_cast<std::size_t>(n + d_)];
}

cplx MatrixPotential::coefficient(int n, std::size_t s, std::size_t q) const {
    if (n < -d_ || n > d_) return {};
    return blocks_[static_cast<std::size_t>(n + d_)](s, q);
}

ComplexMatrix MatrixPotential::evaluate(double x) const {
    ComplexMatrix half(m_, m_);
    for (int n = 1; n <= d_; ++n) {
        const double arg = two_pi * n * x;
        const cplx e{std::cos(arg), std::sin(arg)};
        const ComplexMatrix& qn = block(n);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < m_; ++j) half(i, j) += qn(i, j) * e;
    }
    // Q_0 + Σ_{n>0} (Q_n e^{2πinx} + h.c.) is Hermitian by construction.
    return block(0) + half + half.adjoint();
}

double MatrixPotential::oscillation_bound() const {
    double s = 0.0;
    for (int n = -d_; n <= d_; ++n)
        if (n != 0) s += block(n).frobenius_norm();
    return s;
}

MatrixPotential from_fourier(std::size_t m, const std::vector<std::pair<int, ComplexMatrix>>& blocks) {
    if (m == 0) throw SpectralError(ErrorCode::DimensionMismatch, "potential dimension must be positive");
    std::map<int, ComplexMatrix> given;
    for (const auto& [n, q] : blocks) {
        if (q.rows() != m || q.cols() != m)
            throw SpectralError(ErrorCode::DimensionMismatch,
                                "block " + std::to_string(n) + " is not " + std::to_string(m) + "x" + std::to_string(m));
        if (!given.emplace(n, q).second)
            throw SpectralError(ErrorCode::InvalidArgument, "duplicate block index " + std::to_string(n));
    }
    int d = 0;
    for (const auto& [n, q] : given) d = std::max(d, std::abs(n));

    MatrixPotential p;
    p.m_ = m;
    p.d_ = d;
    p.zero_ = ComplexMatrix(m, m);
    p.blocks_.assign(static_cast<std::size_t>(2 * d + 1), ComplexMatrix(m, m));

    if (auto it = given.find(0); it != given.end()) {
        const double dev = hermitian_check(it->second);
        if (dev > 1e-12 * std::max(1.0, it->second.max_abs()))
            throw SpectralError(ErrorCode::SymmetryViolation, "Q_0 is not Hermitian");
        p.blocks_[static_cast<std::size_t>(d)] = hermitian_part(it->second);
    }
    for (int n = 1; n <= d; ++n) {
        auto pos = given.find(n);
        auto neg = given.find(-n);
        ComplexMatrix qn(m, m);
        if (pos != given.end() && neg != given.end()) {
            const ComplexMatrix diff = neg->second - pos->second.adjoint();
            if (diff.max_abs() > 1e-12 * std::max(1.0, pos->second.max_abs()))
                throw SpectralError(ErrorCode::SymmetryViolation,
                                    "Q_{-" + std::to_string(n) + "} differs from (Q_" + std::to_string(n) + ")^H");
            qn = pos->second;
        } else if (pos != given.end()) {
            qn = pos->second;
        } else if (neg != given.end()) {
            qn = neg->second.adjoint();
        }
        p.blocks_[static_cast<std::size_t>(d + n)] = qn;
        p.blocks_[static_cast<std::size_t>(d - n)] = qn.adjoint();
    }
    return p;
}

MatrixPotential from_samples(std::size_t m, const std::vector<ComplexMatrix>& samples, int degree) {
    if (degree < 0) throw SpectralError(ErrorCode::InvalidArgument, "degree must be nonnegative");
    const std::size_t grid = samples.size();
    if (grid < static_cast<std::size_t>(2 * degree + 1))
        throw SpectralError(ErrorCode::InsufficientSamples,
                            std::to_string(grid) + " samples cannot resolve degree " + std::to_string(degree));
    for (std::size_t j = 0; j < grid; ++j) {
        const ComplexMatrix& s = samples[j];
        if (s.rows() != m || s.cols() != m)
            throw SpectralError(ErrorCode::DimensionMismatch, "sample " + std::to_string(j) + " has wrong shape");
        if (hermitian_check(s) > 1e-8)
            throw SpectralError(ErrorCode::NonHermitianSample, "sample " + std::to_string(j) + " is not Hermitian");
    }

    auto dft = [&](int n) {
        ComplexMatrix acc(m, m);
        for (std::size_t j = 0; j < grid; ++j) {
            // Reduce n*j mod grid before forming the angle to keep it small.
            const long long r = (static_cast<long long>(n) * static_cast<long long>(j)) % static_cast<long long>(grid);
            const double arg = -two_pi * static_cast<double>(r) / static_cast<double>(grid);
            const cplx e{std::cos(arg), std::sin(arg)};
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) acc(a, b) += samples[j](a, b) * e;
        }
        return acc * cplx{1.0 / static_cast<double>(grid), 0.0};
    };

    std::vector<std::pair<int, ComplexMatrix>> blocks;
    blocks.emplace_back(0, hermitian_part(dft(0)));
    for (int n = 1; n <= degree; ++n) {
        const ComplexMatrix pos = dft(n);
        const ComplexMatrix neg = dft(-n);
        blocks.emplace_back(n, (pos + neg.adjoint()) * cplx{0.5, 0.0});
    }
    MatrixPotential p = from_fourier(m, blocks);
    if (p.d_ < degree) {
        // Keep the requested degree even when the top blocks vanish.
        std::vector<ComplexMatrix> padded(static_cast<std::size_t>(2 * degree + 1), ComplexMatrix(m, m));
        for (int n = -p.d_; n <= p.d_; ++n) padded[static_cast<std::size_t>(n + degree)] = p.block(n);
        p.blocks_ = std::move(padded);
        p.d_ = degree;
    }
    return p;
}

MeanSpectrum mean_spectrum(const MatrixPotential& p, double tol_simple) {
    MeanSpectrum ms;
    ms.c = p.block(0);
    ms.tol_simple = tol_simple;
    EigenDecomposition eig = eig_hermitian(ms.c);
    ms.mu = std::move(eig.values);
    ms.vectors = std::move(eig.vectors);
    const std::size_t m = ms.mu.size();
    ms.simple.assign(m, true);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i)
            if (i != j && std::abs(ms.mu[i] - ms.mu[j]) <= tol_simple) ms.simple[j] = false;
    return ms;
}

CoefficientTail coefficient_tail(const MatrixPotential& p, int k) {
    CoefficientTail tail{k, 0.0};
    for (int n : {2 * k, -2 * k, 2 * k + 1, -2 * k - 1}) {
        if (std::abs(n) > p.degree()) continue;
        tail.b = std::max(tail.b, p.block(n).max_abs());
    }
    return tail;
}

MatrixPotential random_potential(const RandomPotentialSpec& spec) {
    if (spec.m == 0 || spec.degree < 0 || !(spec.norm >= 0.0))
        throw SpectralError(ErrorCode::InvalidArgument, "invalid random potential specification");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const std::size_t m = spec.m;
    auto draw = [&] {
        ComplexMatrix a(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const double re = uni(rng);
                const double im = uni(rng);
                a(i, j) = {re, im};
            }
        return a;
    };

    std::vector<std::pair<int, ComplexMatrix>> blocks;
    ComplexMatrix q0 = hermitian_part(draw());
    if (spec.zero_mean) q0 = ComplexMatrix(m, m);
    blocks.emplace_back(0, q0);
    for (int n = 1; n <= spec.degree; ++n) blocks.emplace_back(n, draw());

    double total = q0.frobenius_norm();
    for (int n = 1; n <= spec.degree; ++n) total += 2.0 * blocks[static_cast<std::size_t>(n)].second.frobenius_norm();
    const double factor = total > 0.0 ? spec.norm / total : 0.0;
    for (auto& [n, b] : blocks) b = b * cplx{factor, 0.0};
    return from_fourier(m, blocks);
}

namespace {

std::vector<std::pair<int, ComplexMatrix>> nonnegative_blocks(const MatrixPotential& p) {
    std::vector<std::pair<int, ComplexMatrix>> blocks;
    for (int n = 0; n <= p.degree(); ++n) blocks.emplace_back(n, p.block(n));
    return blocks;
}

}  // namespace

MatrixPotential add_mean(const MatrixPotential& p, const ComplexMatrix& c) {
    auto blocks = nonnegative_blocks(p);
    blocks[0].second = blocks[0].second + c;
    return from_fourier(p.dim(), blocks);
}

MatrixPotential scaled(const MatrixPotential& p, double factor) {
    auto blocks = nonnegative_blocks(p);
    for (auto& [n, b] : blocks) b = b * cplx{factor, 0.0};
    return from_fourier(p.dim(), blocks);
}

MatrixPotential block_diagonal(const MatrixPotential& a, const MatrixPotential& b) {
    const std::size_t ma = a.dim(), mb = b.dim(), m = ma + mb;
    const int d = std::max(a.degree(), b.degree());
    std::vector<std::pair<int, ComplexMatrix>> blocks;
    for (int n = 0; n <= d; ++n) {
        ComplexMatrix q(m, m);
        for (std::size_t i = 0; i < ma; ++i)
            for (std::size_t j = 0; j < ma; ++j) q(i, j) = a.coefficient(n, i, j);
        for (std::size_t i = 0; i < mb; ++i)
            for (std::size_t j = 0; j < mb; ++j) q(ma + i, ma + j) = b.coefficient(n, i, j);
        blocks.emplace_back(n, q);
    }
    return from_fourier(m, blocks);
}

MatrixPotential conjugated(const MatrixPotential& p, const ComplexMatrix& u) {
    if (u.rows() != p.dim() || u.cols() != p.dim())
        throw SpectralError(ErrorCode::DimensionMismatch, "unitary has wrong shape");
    const ComplexMatrix ua = u.adjoint();
    auto blocks = nonnegative_blocks(p);
    for (auto& [n, b] : blocks) b = ua * b * u;
    return from_fourier(p.dim(), blocks);
}

}  // namespace hillbloch
