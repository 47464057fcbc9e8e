#pragma once

// Independent reference code for the tests. Nothing here calls the library's
// eigensolver.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "hillbloch/potential.hpp"

namespace testing_support {

using hillbloch::ComplexMatrix;
using hillbloch::cplx;

// Cyclic Jacobi for Hermitian matrices, eigenvalues only. Each rotation first
// rotates the phase of a_pq away, then applies a real Givens rotation.
inline std::vector<double> jacobi_eigenvalues(ComplexMatrix a) {
    const std::size_t n = a.rows();
    auto off = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };
    const double scale = std::max(1.0, a.frobenius_norm());
    for (int sweep = 0; sweep < 100 && off() > 1e-15 * scale; ++sweep) {
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r < 1e-300) continue;
                const cplx ph = a(p, q) / r;  // a_pq = r·ph
                // D = diag(.., conj(ph) at q, ..): A <- D† A D makes a_pq real.
                for (std::size_t k = 0; k < n; ++k) a(k, q) *= std::conj(ph);
                for (std::size_t k = 0; k < n; ++k) a(q, k) *= ph;
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx kp = a(k, p), kq = a(k, q);
                    a(k, p) = c * kp - s * kq;
                    a(k, q) = s * kp + c * kq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx pk = a(p, k), qk = a(q, k);
                    a(p, k) = c * pk - s * qk;
                    a(q, k) = s * pk + c * qk;
                }
            }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a(i, i).real();
    std::sort(out.begin(), out.end());
    return out;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = {g(rng), g(rng)};
            a(j, i) = std::conj(a(i, j));
        }
    }
    return a;
}

// Largest singular value via power iteration on E†E.
inline double spectral_norm(const ComplexMatrix& e) {
    const std::size_t n = e.cols();
    std::vector<cplx> v(n, cplx{1.0, 0.3});
    double lam = 0.0;
    const ComplexMatrix ee = e.adjoint() * e;
    for (int it = 0; it < 500; ++it) {
        std::vector<cplx> w = ee * std::span<const cplx>(v);
        double nrm = 0.0;
        for (auto z : w) nrm += std::norm(z);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        for (auto& z : w) z /= nrm;
        lam = nrm;
        v = w;
    }
    return std::sqrt(lam);
}

// Brute force for the finite-gap condition: the three sum sets
// {μ_{j_p} + μ_i : i} share a common value iff the triple is violated.
struct BruteVerdict {
    bool holds = false;
    bool enough_simple = false;
};

inline BruteVerdict brute_finite_gap(const std::vector<double>& mu, double tol) {
    BruteVerdict v;
    std::vector<double> simple;
    for (std::size_t a = 0; a < mu.size(); ++a) {
        bool single = true;
        for (std::size_t b = 0; b < mu.size(); ++b)
            if (a != b && std::abs(mu[a] - mu[b]) <= tol) single = false;
        if (single) simple.push_back(mu[a]);
    }
    v.enough_simple = simple.size() >= 3;
    if (!v.enough_simple) return v;
    auto sums = [&](double base) {
        std::vector<double> s;
        for (double x : mu) s.push_back(base + x);
        return s;
    };
    auto hit = [&](double x, const std::vector<double>& set) {
        return std::any_of(set.begin(), set.end(), [&](double y) { return std::abs(x - y) <= tol; });
    };
    for (std::size_t a = 0; a < simple.size(); ++a)
        for (std::size_t b = a + 1; b < simple.size(); ++b)
            for (std::size_t c = b + 1; c < simple.size(); ++c) {
                const auto s1 = sums(simple[a]), s2 = sums(simple[b]), s3 = sums(simple[c]);
                bool common = false;
                for (double x : s1)
                    if (hit(x, s2) && hit(x, s3)) {
                        // the s2 and s3 partners must also agree with each other
                        for (double y : s2)
                            if (std::abs(x - y) <= tol && hit(y, s3)) common = true;
                    }
                if (!common) {
                    v.holds = true;
                    return v;
                }
            }
    return v;
}

inline hillbloch::MatrixPotential mathieu(double half_amplitude = 1.0) {
    ComplexMatrix q(1, 1);
    q(0, 0) = half_amplitude;
    return hillbloch::from_fourier(1, {{1, q}});
}

inline hillbloch::MatrixPotential constant_diag(std::vector<double> d) {
    return hillbloch::from_fourier(d.size(), {{0, ComplexMatrix::diagonal(d)}});
}

// Fixed m = 2, d = 2 complex potential; its Galerkin values below were computed
// with an independent numpy assembly + LAPACK eigvalsh.
inline hillbloch::MatrixPotential hand_m2() {
    using C = cplx;
    ComplexMatrix q0 = ComplexMatrix::from_rows({{C(0.3, 0), C(0.1, -0.2)}, {C(0.1, 0.2), C(-0.4, 0)}});
    ComplexMatrix q1 = ComplexMatrix::from_rows({{C(0.2, 0.1), C(0, -0.15)}, {C(0.05, 0), C(0.1, -0.05)}});
    ComplexMatrix q2 = ComplexMatrix::from_rows({{C(0, 0), C(0.08, 0)}, {C(0.03, 0.04), C(0, -0.06)}});
    return hillbloch::from_fourier(2, {{0, q0}, {1, q1}, {2, q2}});
}

}  // namespace testing_support
