#include "hillbloch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "hillbloch/galerkin.hpp"

namespace hillbloch {

namespace {

constexpr double pi = std::numbers::pi;

using EigenMat = Eigen::MatrixXcd;

// Fixed-step RK4 propagator with Q sampled once on the half-step grid.
class Propagator {
public:
    Propagator(const MatrixPotential& p, int steps) : m_(p.dim()), steps_(steps) {
        const std::size_t nodes = static_cast<std::size_t>(2 * steps + 1);
        q_.resize(nodes * m_ * m_);
        for (std::size_t i = 0; i < nodes; ++i) {
            const ComplexMatrix qx = p.evaluate(static_cast<double>(i) / (2.0 * steps));
            std::copy(qx.data().begin(), qx.data().end(), q_.begin() + static_cast<std::ptrdiff_t>(i * m_ * m_));
        }
    }

    int steps() const noexcept { return steps_; }

    EigenMat run(double lambda) const {
        const std::size_t n2 = 2 * m_;
        const std::size_t sz = n2 * n2;
        std::vector<cplx> y(sz, cplx{}), k1(sz), k2(sz), k3(sz), k4(sz), tmp(sz);
        for (std::size_t i = 0; i < n2; ++i) y[i * n2 + i] = 1.0;
        const double h = 1.0 / steps_;

        for (int s = 0; s < steps_; ++s) {
            const std::size_t node = static_cast<std::size_t>(2 * s);
            rhs(node, lambda, y, k1);
            axpy(y, k1, 0.5 * h, tmp);
            rhs(node + 1, lambda, tmp, k2);
            axpy(y, k2, 0.5 * h, tmp);
            rhs(node + 1, lambda, tmp, k3);
            axpy(y, k3, h, tmp);
            rhs(node + 2, lambda, tmp, k4);
            const double w = h / 6.0;
            for (std::size_t i = 0; i < sz; ++i) y[i] += w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
        EigenMat out(static_cast<Eigen::Index>(n2), static_cast<Eigen::Index>(n2));
        for (std::size_t i = 0; i < n2; ++i)
            for (std::size_t j = 0; j < n2; ++j)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = y[i * n2 + j];
        return out;
    }

private:
    static void axpy(const std::vector<cplx>& y, const std::vector<cplx>& k, double a, std::vector<cplx>& out) {
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
    }

    // (Y_top, Y_bottom)′ = (Y_bottom, (Q(x) − λ) Y_top)
    void rhs(std::size_t node, double lambda, const std::vector<cplx>& y, std::vector<cplx>& out) const {
        const std::size_t m = m_, n2 = 2 * m_;
        const cplx* q = q_.data() + node * m * m;
        std::copy(y.begin() + static_cast<std::ptrdiff_t>(m * n2), y.end(), out.begin());
        for (std::size_t s = 0; s < m; ++s) {
            cplx* o = out.data() + (m + s) * n2;
            for (std::size_t c = 0; c < n2; ++c) o[c] = -lambda * y[s * n2 + c];
            for (std::size_t r = 0; r < m; ++r) {
                const cplx qsr = q[s * m + r];
                const cplx* yr = y.data() + r * n2;
                for (std::size_t c = 0; c < n2; ++c) o[c] += qsr * yr[c];
            }
        }
    }

    std::size_t m_;
    int steps_;
    std::vector<cplx> q_;
};

ComplexMatrix to_complex_matrix(const EigenMat& a) {
    ComplexMatrix out(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = a(i, j);
    return out;
}

EigenMat to_eigen(const ComplexMatrix& a) {
    EigenMat out(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return out;
}

Eigen::VectorXcd spectrum_of(const EigenMat& m) {
    Eigen::ComplexEigenSolver<EigenMat> solver(m, false);
    return solver.eigenvalues();
}

double distance_to(const Eigen::VectorXcd& rho, double t) {
    const cplx target = std::polar(1.0, t);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rho.size(); ++i) best = std::min(best, std::abs(rho(i) - target));
    return best;
}

double characteristic_of(const EigenMat& m, double t) {
    const Eigen::Index n = m.rows();
    const cplx target = std::polar(1.0, t);
    const EigenMat shifted = m - target * EigenMat::Identity(n, n);
    const cplx det = shifted.determinant();
    return (det * std::polar(1.0, -0.5 * static_cast<double>(n) * t)).real();
}

int steps_for_bracket(int requested, double hi) {
    const double needed = 512.0 * std::sqrt(std::max(1.0, std::abs(hi)));
    int steps = 256;
    while (steps < requested || steps < needed) steps *= 2;
    return steps;
}

}  // namespace

MonodromyMatrix monodromy(const MatrixPotential& p, double lambda, int steps) {
    if (steps < 256) throw SpectralError(ErrorCode::InvalidArgument, "monodromy needs at least 256 steps");
    const EigenMat full = Propagator(p, steps).run(lambda);
    const EigenMat half = Propagator(p, steps / 2).run(lambda);

    MonodromyMatrix out;
    out.lambda = lambda;
    out.steps = steps;
    out.m = to_complex_matrix(full);
    out.error_estimate = (full - half).cwiseAbs().maxCoeff() / 15.0;
    out.det = full.determinant();
    if (std::abs(out.det - 1.0) > 1e-5)
        throw SpectralError(ErrorCode::AccuracyFailure, "det M = " + std::to_string(std::abs(out.det)) +
                                                            " deviates from 1 at lambda = " + std::to_string(lambda));
    return out;
}

std::vector<double> quasimomenta(const MonodromyMatrix& mono) {
    const Eigen::VectorXcd rho = spectrum_of(to_eigen(mono.m));
    std::vector<double> ts;
    for (Eigen::Index i = 0; i < rho.size(); ++i)
        if (std::abs(std::abs(rho(i)) - 1.0) <= 1e-6) ts.push_back(normalize_quasimomentum(std::arg(rho(i))));
    std::sort(ts.begin(), ts.end());
    return ts;
}

double eigen_distance(const MonodromyMatrix& mono, double t) { return distance_to(spectrum_of(to_eigen(mono.m)), t); }

double characteristic(const MonodromyMatrix& mono, double t) { return characteristic_of(to_eigen(mono.m), t); }

QuasimomentumRoots find_eigenvalues(const MatrixPotential& p, double t, std::pair<double, double> bracket,
                                    const OracleOptions& opt) {
    auto [lo, hi] = bracket;
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw SpectralError(ErrorCode::InvalidArgument, "bracket must be a finite interval with lo < hi");
    const double step = std::min(opt.scan_step, 0.25 * (2.0 * pi) * (2.0 * pi));
    if (!(step > 0.0)) throw SpectralError(ErrorCode::InvalidArgument, "scan step must be positive");

    t = normalize_quasimomentum(t);
    QuasimomentumRoots out;
    out.t = t;
    out.bracket = bracket;

    const MeanSpectrum ms = mean_spectrum(p);
    const double reach = p.oscillation_bound() + opt.window_pad;
    const double mu_lo = ms.mu.front(), mu_hi = ms.mu.back();

    // Weyl windows around the unperturbed levels (2πk+t)² + μ_j.
    std::vector<std::pair<double, double>> windows;
    const int kmax = static_cast<int>(std::ceil(std::sqrt(std::max(0.0, hi - mu_lo + reach)) / (2.0 * pi))) + 1;
    for (int k = -kmax; k <= kmax; ++k) {
        const double w = 2.0 * pi * k + t;
        const double a = std::max(lo, w * w + mu_lo - reach);
        const double b = std::min(hi, w * w + mu_hi + reach);
        if (a < b) windows.emplace_back(a, b);
    }
    std::sort(windows.begin(), windows.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& w : windows) {
        if (!merged.empty() && w.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, w.second);
        else
            merged.push_back(w);
    }

    const Propagator prop(p, steps_for_bracket(opt.steps, hi));
    auto eval_f = [&](double lam) { return characteristic_of(prop.run(lam), t); };
    auto eval_g = [&](double lam) { return distance_to(spectrum_of(prop.run(lam)), t); };

    std::vector<OracleRoot> roots;
    auto add_root = [&](double lam, int mult) { roots.push_back({lam, mult, 0.0, 0.0}); };
    boost::math::tools::eps_tolerance<double> tol(48);

    auto refine_sign_change = [&](double a, double b, double fa, double fb) {
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(eval_f, a, b, fa, fb, tol, iters);
        add_root(0.5 * (r.first + r.second), 1);
    };

    for (const auto& [a, b] : merged) {
        const int n = std::max(2, static_cast<int>(std::ceil((b - a) / step)));
        std::vector<double> xs(static_cast<std::size_t>(n) + 1), fs(xs.size()), gs(xs.size());
        for (int i = 0; i <= n; ++i) {
            const double lam = a + (b - a) * static_cast<double>(i) / n;
            const EigenMat mono = prop.run(lam);
            xs[static_cast<std::size_t>(i)] = lam;
            fs[static_cast<std::size_t>(i)] = characteristic_of(mono, t);
            gs[static_cast<std::size_t>(i)] = distance_to(spectrum_of(mono), t);
        }
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            if (fs[i] == 0.0) {
                add_root(xs[i], 1);
                continue;
            }
            if (fs[i] * fs[i + 1] < 0.0) refine_sign_change(xs[i], xs[i + 1], fs[i], fs[i + 1]);
        }
        // Pairs of roots (or a tangency) inside one cell leave no sign change
        // but do leave a dip of the eigenvalue distance.
        for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
            if (!(gs[i] <= gs[i - 1] && gs[i] <= gs[i + 1] && gs[i] < 0.5)) continue;
            if (fs[i - 1] * fs[i] <= 0.0 || fs[i] * fs[i + 1] <= 0.0) continue;
            const double sgn = fs[i] > 0.0 ? 1.0 : -1.0;
            const auto [xmin, smin] = boost::math::tools::brent_find_minima(
                [&](double lam) { return sgn * eval_f(lam); }, xs[i - 1], xs[i + 1], 40);
            if (smin >= 0.0 && eval_g(xmin) <= 1e-6) {
                // The distance is V-shaped at a tangency; it pins the point
                // much tighter than the quadratic touch of F.
                const double w = 1e-5 * std::max(1.0, std::abs(xmin));
                const double x = boost::math::tools::brent_find_minima(eval_g, xmin - w, xmin + w, 50).first;
                const double fx = sgn * eval_f(x);
                if (fx < 0.0 && x > xs[i - 1] && x < xs[i + 1]) {
                    // Two simple roots closer than the minimizer could see.
                    refine_sign_change(xs[i - 1], x, fs[i - 1], sgn * fx);
                    refine_sign_change(x, xs[i + 1], sgn * fx, fs[i + 1]);
                } else {
                    add_root(x, 0);  // multiplicity counted below
                }
            } else if (smin < 0.0) {
                refine_sign_change(xs[i - 1], xmin, fs[i - 1], sgn * smin);
                refine_sign_change(xmin, xs[i + 1], sgn * smin, fs[i + 1]);
            }
        }
    }

    std::sort(roots.begin(), roots.end(), [](const OracleRoot& x, const OracleRoot& y) { return x.lambda < y.lambda; });
    std::vector<OracleRoot> unique;
    for (const auto& r : roots) {
        if (!unique.empty() && std::abs(r.lambda - unique.back().lambda) <= 1e-9) {
            if (r.multiplicity == 0) unique.back().multiplicity = 0;
            continue;
        }
        unique.push_back(r);
    }

    const cplx target = std::polar(1.0, t);
    for (auto& r : unique) {
        const EigenMat mono = prop.run(r.lambda);
        const Eigen::VectorXcd rho = spectrum_of(mono);
        r.eigen_distance = distance_to(rho, t);
        const Eigen::Index n = mono.rows();
        Eigen::JacobiSVD<EigenMat> svd(mono - target * EigenMat::Identity(n, n));
        r.sigma_min = svd.singularValues()(n - 1);
        if (r.multiplicity == 0) {
            int count = 0;
            for (Eigen::Index i = 0; i < rho.size(); ++i)
                if (std::abs(rho(i) - target) <= 1e-3) ++count;
            r.multiplicity = std::max(2, count);
        }
        out.root_count += static_cast<std::size_t>(r.multiplicity);
    }
    out.roots = std::move(unique);

    if (opt.validate) {
        const int K = std::max(16, static_cast<int>(std::ceil(std::sqrt(std::max(0.0, hi)) / (2.0 * pi))) + p.degree() + 8);
        const auto values = galerkin_eigenvalues(p, BlochParams(t, K));
        out.galerkin_K = K;
        out.galerkin_count = static_cast<std::size_t>(
            std::count_if(values.begin(), values.end(), [&](double v) { return v > lo && v < hi; }));
        if (out.galerkin_count != out.root_count) {
            out.status = RootStatus::SuspectedMissedRoot;
            out.note = "oracle found " + std::to_string(out.root_count) + " roots, Galerkin count is " +
                       std::to_string(out.galerkin_count);
        }
    }
    return out;
}

}  // namespace hillbloch
