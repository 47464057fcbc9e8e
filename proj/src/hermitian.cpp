#include "hillbloch/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hillbloch {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw SpectralError(ErrorCode::DimensionMismatch, "entry count does not match rows*cols");
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw SpectralError(ErrorCode::InvalidArgument, "matrix entry is not finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cplx>>& rows) {
    if (rows.empty()) return {};
    const std::size_t c = rows.front().size();
    std::vector<cplx> data;
    data.reserve(rows.size() * c);
    for (const auto& r : rows) {
        if (r.size() != c) throw SpectralError(ErrorCode::DimensionMismatch, "ragged matrix rows");
        data.insert(data.end(), r.begin(), r.end());
    }
    return ComplexMatrix(rows.size(), c, std::move(data));
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

std::vector<cplx> ComplexMatrix::column(std::size_t j) const {
    std::vector<cplx> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw SpectralError(ErrorCode::DimensionMismatch, "matrix product shape");
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx a = (*this)(i, k);
            if (a == cplx{}) continue;
            const cplx* b = rhs.data_.data() + k * rhs.cols_;
            cplx* o = out.data_.data() + i * rhs.cols_;
            for (std::size_t j = 0; j < rhs.cols_; ++j) o[j] += a * b[j];
        }
    return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw SpectralError(ErrorCode::DimensionMismatch, "matrix sum shape");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw SpectralError(ErrorCode::DimensionMismatch, "matrix difference shape");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator*(cplx s) const {
    ComplexMatrix out = *this;
    for (cplx& z : out.data_) z *= s;
    return out;
}

std::vector<cplx> ComplexMatrix::operator*(std::span<const cplx> v) const {
    if (v.size() != cols_) throw SpectralError(ErrorCode::DimensionMismatch, "matrix-vector shape");
    std::vector<cplx> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        cplx acc{};
        const cplx* r = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * v[j];
        out[i] = acc;
    }
    return out;
}

double ComplexMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double vector_norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double hermitian_check(const ComplexMatrix& a) {
    if (!a.square()) throw SpectralError(ErrorCode::NonSquare, "hermitian_check needs a square matrix");
    double dev = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j) dev = std::max(dev, std::abs(a(i, j) - std::conj(a(j, i))));
    return dev;
}

namespace {

void require_hermitian(const ComplexMatrix& a, const EigenOptions& opt) {
    const double dev = hermitian_check(a);
    if (dev > opt.hermitian_tol * a.max_abs())
        throw SpectralError(ErrorCode::NonHermitianInput,
                            "max |A - A^H| = " + std::to_string(dev) + " exceeds tolerance");
}

struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;    // off[i] couples i and i+1; off[n-1] = 0
    std::vector<cplx> phase;    // D with A = (Q D) T_real (Q D)^H
};

// Householder reduction A = Q T Q^H. When `q` is non-null it receives Q.
Tridiagonal householder_tridiagonalize(const ComplexMatrix& input, ComplexMatrix* q) {
    const std::size_t n = input.rows();
    ComplexMatrix a = input;
    std::vector<std::vector<cplx>> reflectors;
    std::vector<double> taus;
    std::vector<cplx> p(n), v(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t r = n - k - 1;
        double tail = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
        if (tail == 0.0) {
            if (q) {
                reflectors.emplace_back();
                taus.push_back(0.0);
            }
            continue;
        }
        const cplx x0 = a(k + 1, k);
        const double xnorm = std::sqrt(tail + std::norm(x0));
        const cplx unit = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0, 0.0};
        const cplx alpha = -unit * xnorm;

        for (std::size_t i = 0; i < r; ++i) v[i] = a(k + 1 + i, k);
        v[0] -= alpha;
        const double vnorm2 = 2.0 * xnorm * (xnorm + std::abs(x0));
        const double tau = 2.0 / vnorm2;

        // p = tau * S v on the trailing block S.
        for (std::size_t i = 0; i < r; ++i) {
            const cplx* row = &a(k + 1 + i, k + 1);
            cplx acc{};
            for (std::size_t j = 0; j < r; ++j) acc += row[j] * v[j];
            p[i] = tau * acc;
        }
        cplx vp{};
        for (std::size_t i = 0; i < r; ++i) vp += std::conj(v[i]) * p[i];
        const double half = 0.5 * tau * vp.real();
        for (std::size_t i = 0; i < r; ++i) p[i] -= half * v[i];

        // S <- S - v p^H - p v^H
        for (std::size_t i = 0; i < r; ++i) {
            cplx* row = &a(k + 1 + i, k + 1);
            const cplx vi = v[i], pi = p[i];
            for (std::size_t j = 0; j < r; ++j) row[j] -= vi * std::conj(p[j]) + pi * std::conj(v[j]);
        }
        a(k + 1, k) = alpha;
        a(k, k + 1) = std::conj(alpha);
        for (std::size_t i = k + 2; i < n; ++i) {
            a(i, k) = 0.0;
            a(k, i) = 0.0;
        }
        if (q) {
            reflectors.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r));
            taus.push_back(tau);
        }
    }

    Tridiagonal t;
    t.diag.resize(n);
    t.off.assign(n, 0.0);
    t.phase.assign(n, cplx{1.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = a(i, i).real();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const cplx e = a(i + 1, i);
        const double mag = std::abs(e);
        t.off[i] = mag;
        t.phase[i + 1] = mag > 0.0 ? t.phase[i] * (e / mag) : t.phase[i];
    }

    if (q) {
        *q = ComplexMatrix::identity(n);
        std::vector<cplx> w(n);
        // Backward accumulation: Q = H_0 H_1 ... H_{n-3}.
        for (std::size_t kk = reflectors.size(); kk-- > 0;) {
            if (taus[kk] == 0.0) continue;
            const auto& refl = reflectors[kk];
            const std::size_t off = kk + 1;
            const std::size_t r = refl.size();
            std::fill(w.begin(), w.end(), cplx{});
            for (std::size_t i = 0; i < r; ++i) {
                const cplx cv = std::conj(refl[i]);
                const cplx* row = &(*q)(off + i, 0);
                for (std::size_t j = off; j < n; ++j) w[j] += cv * row[j];
            }
            for (std::size_t i = 0; i < r; ++i) {
                const cplx s = taus[kk] * refl[i];
                cplx* row = &(*q)(off + i, 0);
                for (std::size_t j = off; j < n; ++j) row[j] -= s * w[j];
            }
        }
    }
    return t;
}

// Implicit QL with Wilkinson-type shifts on a real symmetric tridiagonal
// matrix. When `zt` is non-null, row i of *zt accumulates eigenvector i.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<std::vector<double>>* zt,
                    int max_iterations) {
    const int n = static_cast<int>(d.size());
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iterations)
                    throw SpectralError(ErrorCode::ConvergenceFailure, "implicit QL iteration cap exceeded");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    e[i + 1] = (r = std::hypot(f, g));
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    d[i + 1] = g + (p = s * r);
                    g = c * r - b;
                    if (zt) {
                        auto& zi = (*zt)[i];
                        auto& zi1 = (*zt)[i + 1];
                        for (int k = 0; k < n; ++k) {
                            f = zi1[k];
                            zi1[k] = s * zi[k] + c * f;
                            zi[k] = c * zi[k] - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

std::vector<std::size_t> ascending_order(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    return order;
}

void fix_phase(ComplexMatrix& v, std::size_t col) {
    const std::size_t n = v.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::abs(v(i, col));
        if (mag > 1e-8) {
            const cplx rot = std::conj(v(i, col)) / mag;
            for (std::size_t r = 0; r < n; ++r) v(r, col) *= rot;
            return;
        }
    }
}

// Replace the columns [c0, c1) of a degenerate cluster by the Gram-Schmidt
// orthonormalization of the projected standard basis e_0, e_1, ... .
void canonicalize_cluster(ComplexMatrix& v, std::size_t c0, std::size_t c1) {
    const std::size_t n = v.rows();
    const std::size_t s = c1 - c0;
    // Coefficients live in the s-dimensional cluster space; P e_i has
    // coordinates conj(V(i, c0..c1)).
    std::vector<std::vector<cplx>> basis;
    for (std::size_t i = 0; i < n && basis.size() < s; ++i) {
        std::vector<cplx> a(s);
        for (std::size_t l = 0; l < s; ++l) a[l] = std::conj(v(i, c0 + l));
        if (vector_norm(a) < 1e-6) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) {
                const cplx proj = inner(b, a);
                for (std::size_t l = 0; l < s; ++l) a[l] -= proj * b[l];
            }
        const double nrm = vector_norm(a);
        if (nrm < 1e-6) continue;
        for (cplx& z : a) z /= nrm;
        basis.push_back(std::move(a));
    }
    if (basis.size() < s) return;  // keep the solver's basis
    std::vector<cplx> block(n * s);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < s; ++c) {
            cplx acc{};
            for (std::size_t l = 0; l < s; ++l) acc += v(r, c0 + l) * basis[c][l];
            block[r * s + c] = acc;
        }
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < s; ++c) v(r, c0 + c) = block[r * s + c];
}

}  // namespace

EigenDecomposition eig_hermitian(const ComplexMatrix& a, const EigenOptions& opt) {
    require_hermitian(a, opt);
    const std::size_t n = a.rows();
    EigenDecomposition out;
    if (n == 0) return out;

    ComplexMatrix q;
    Tridiagonal t = householder_tridiagonalize(a, &q);
    std::vector<std::vector<double>> zt(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) zt[i][i] = 1.0;
    tridiagonal_ql(t.diag, t.off, &zt, opt.max_iterations);

    // W = Q D, then eigenvector j = W z_j.
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) q(r, c) *= t.phase[c];

    const auto order = ascending_order(t.diag);
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.values[j] = t.diag[src];
        const auto& z = zt[src];
        for (std::size_t r = 0; r < n; ++r) {
            const cplx* wr = &q(r, 0);
            cplx acc{};
            for (std::size_t k = 0; k < n; ++k) acc += wr[k] * z[k];
            out.vectors(r, j) = acc;
        }
    }

    const double scale = std::max(1.0, std::max(std::abs(out.values.front()), std::abs(out.values.back())));
    const double tol = opt.cluster_tol * scale;
    for (std::size_t c0 = 0; c0 < n;) {
        std::size_t c1 = c0 + 1;
        while (c1 < n && out.values[c1] - out.values[c1 - 1] <= tol) ++c1;
        if (c1 - c0 > 1) canonicalize_cluster(out.vectors, c0, c1);
        for (std::size_t c = c0; c < c1; ++c) fix_phase(out.vectors, c);
        c0 = c1;
    }
    return out;
}

std::vector<double> eigvals_hermitian(const ComplexMatrix& a, const EigenOptions& opt) {
    require_hermitian(a, opt);
    if (a.rows() == 0) return {};
    Tridiagonal t = householder_tridiagonalize(a, nullptr);
    tridiagonal_ql(t.diag, t.off, nullptr, opt.max_iterations);
    std::sort(t.diag.begin(), t.diag.end());
    return t.diag;
}

}  // namespace hillbloch
