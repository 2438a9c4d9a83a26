#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "finsleroid/types.hpp"

// Shared numeric kernels: central finite differences with Richardson
// extrapolation, numeric Hessians, a guarded scalar Newton solver, and a
// cyclic Jacobi eigenvalue routine for small symmetric matrices.

namespace finsleroid {

struct DiffConfig {
    double base_step = 1e-2;     // first-derivative step, scaled by max(1, |v|_inf)
    int richardson_levels = 2;   // 0 = plain central difference
    // Second differences divide rounding noise by step^2, so they start from
    // a wider stencil; extrapolation still removes the truncation terms.
    double second_step = 3e-2;
    // Hessian stencils stay plain O(h^2): mixed second differences over wide
    // steps would leave the smooth neighborhood near domain boundaries.
    double cross_step = 1e-4;
};

struct RootConfig {
    double tol = 1e-12;
    int max_iter = 100;
    bool has_bracket = false;
    double lo = 0.0;
    double hi = 0.0;
};

// One auditable record of every tolerance class used by the check battery.
struct Tolerances {
    double algebraic = 1e-12;        // closed-form identities
    double roundtrip = 1e-10;        // composed maps
    double finite_diff = 1e-6;       // comparisons against numeric derivatives
    double exclusion_radius = 1e-3;  // samples closer than this to a pole are resampled
};

struct ConvergenceError : std::runtime_error {
    double last_iterate;
    double residual;
    ConvergenceError(const std::string& msg, double it, double res)
        : std::runtime_error(msg), last_iterate(it), residual(res) {}
};

using ScalarField = std::function<double(const EventVector&)>;

namespace detail {

inline double inf_norm(const EventVector& v) {
    double m = std::fabs(v.t);
    for (double c : v.x) m = std::max(m, std::fabs(c));
    return m;
}

inline std::string fmt_point(const EventVector& v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.t);
    std::string s = "(";
    s += buf;
    for (double c : v.x) {
        std::snprintf(buf, sizeof buf, ", %.17g", c);
        s += buf;
    }
    return s + ")";
}

inline double eval_checked(const ScalarField& f, const EventVector& v) {
    double y = f(v);
    if (!std::isfinite(y))
        throw std::runtime_error("non-finite field value at probe point " + fmt_point(v));
    return y;
}

inline EventVector shifted(const EventVector& v, int coord, double delta) {
    EventVector r = v;
    if (coord == 0) r.t += delta;
    else r.x[static_cast<std::size_t>(coord - 1)] += delta;
    return r;
}

// Richardson/Neville extrapolation of a stencil whose error expands in even
// powers of the step; `levels` extra rows kill h^2, h^4, ... in turn.
template <typename Stencil>
double richardson(Stencil&& stencil, double h, int levels) {
    constexpr int kMaxRows = 7;
    double t[kMaxRows][kMaxRows];
    const int rows = std::clamp(levels, 0, kMaxRows - 1) + 1;
    for (int i = 0; i < rows; ++i) {
        t[i][0] = stencil(h);
        double pow4 = 1.0;
        for (int k = 1; k <= i; ++k) {
            pow4 *= 4.0;
            t[i][k] = (pow4 * t[i][k - 1] - t[i - 1][k - 1]) / (pow4 - 1.0);
        }
        h *= 0.5;
    }
    return t[rows - 1][rows - 1];
}

} // namespace detail

// First derivative of a one-variable function, central difference with
// Richardson extrapolation.
inline double diff_scalar(const std::function<double(double)>& f, double x,
                          const DiffConfig& cfg = {}) {
    double h = cfg.base_step * std::max(1.0, std::fabs(x));
    auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
    return detail::richardson(central, h, cfg.richardson_levels);
}

// Second derivative of a one-variable function.
inline double diff2_scalar(const std::function<double(double)>& f, double x,
                           const DiffConfig& cfg = {}) {
    double h = cfg.second_step * std::max(1.0, std::fabs(x));
    auto stencil = [&](double step) {
        return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
    };
    return detail::richardson(stencil, h, cfg.richardson_levels);
}

// Gradient of a scalar field by extrapolated central differences. Step is
// scaled per point, not per coordinate axis, because the fields of interest
// are homogeneous and absolute steps misbehave far from the unit shell.
inline CoVector grad_fd(const ScalarField& f, const EventVector& v,
                        const DiffConfig& cfg = {}) {
    const int n = static_cast<int>(v.x.size()) + 1;
    const double scale = std::max(1.0, detail::inf_norm(v));
    CoVector g;
    g.xi.resize(v.x.size());
    for (int i = 0; i < n; ++i) {
        auto central = [&](double step) {
            return (detail::eval_checked(f, detail::shifted(v, i, step)) -
                    detail::eval_checked(f, detail::shifted(v, i, -step))) / (2.0 * step);
        };
        double d = detail::richardson(central, cfg.base_step * scale, cfg.richardson_levels);
        if (i == 0) g.t = d;
        else g.xi[static_cast<std::size_t>(i - 1)] = d;
    }
    return g;
}

// Symmetric numeric Hessian: standard 3-point diagonal and averaged 4-point
// off-diagonal stencils, O(step^2).
inline SymMatrix hessian_fd(const ScalarField& f, const EventVector& v,
                            const DiffConfig& cfg = {}) {
    const int n = static_cast<int>(v.x.size()) + 1;
    const double h = cfg.cross_step * std::max(1.0, detail::inf_norm(v));
    SymMatrix m(n);
    const double f0 = detail::eval_checked(f, v);
    for (int i = 0; i < n; ++i) {
        double fp = detail::eval_checked(f, detail::shifted(v, i, h));
        double fm = detail::eval_checked(f, detail::shifted(v, i, -h));
        m.at(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        for (int j = i + 1; j < n; ++j) {
            double fpp = detail::eval_checked(f, detail::shifted(detail::shifted(v, i, h), j, h));
            double fpm = detail::eval_checked(f, detail::shifted(detail::shifted(v, i, h), j, -h));
            double fmp = detail::eval_checked(f, detail::shifted(detail::shifted(v, i, -h), j, h));
            double fmm = detail::eval_checked(f, detail::shifted(detail::shifted(v, i, -h), j, -h));
            double d = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            m.at(i, j) = d;
            m.at(j, i) = d;
        }
    }
    return m;
}

// Scalar root-finder: Newton iteration with a numeric derivative; when a
// bracket is supplied the bracket is kept current and any Newton step that
// leaves it is replaced by bisection.
inline double newton_scalar(const std::function<double(double)>& f, double seed,
                            const RootConfig& cfg = {}) {
    double lo = cfg.lo, hi = cfg.hi;
    double flo = 0.0, fhi = 0.0;
    if (cfg.has_bracket) {
        if (lo > hi) std::swap(lo, hi);
        flo = f(lo);
        fhi = f(hi);
        if (flo == 0.0) return lo;
        if (fhi == 0.0) return hi;
        if (flo * fhi > 0.0)
            throw ConvergenceError("newton_scalar: bracket does not straddle a sign change",
                                   seed, flo);
    }
    double x = seed;
    double fx = f(x);
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (std::fabs(fx) <= cfg.tol) return x;
        double dstep = 1e-7 * std::max(1.0, std::fabs(x));
        double d = (f(x + dstep) - f(x - dstep)) / (2.0 * dstep);
        double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d
                                                     : std::numeric_limits<double>::quiet_NaN();
        if (cfg.has_bracket) {
            if (fx * flo < 0.0) { hi = x; fhi = fx; }
            else { lo = x; flo = fx; }
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        } else if (!std::isfinite(next)) {
            throw ConvergenceError("newton_scalar: derivative vanished away from a root", x, fx);
        }
        x = next;
        fx = f(x);
        if (!std::isfinite(fx))
            throw ConvergenceError("newton_scalar: non-finite residual", x, fx);
    }
    if (std::fabs(fx) <= cfg.tol) return x;
    throw ConvergenceError("newton_scalar: max_iter exhausted", x, fx);
}

// All eigenvalues of a small symmetric matrix (n <= 8) by cyclic Jacobi
// rotations; returned sorted ascending. Input asymmetry beyond 1e-12 of the
// matrix scale is a caller error.
inline std::vector<double> sym_eigenvalues(const SymMatrix& m) {
    const int n = m.n;
    if (n < 1 || n > 8)
        throw std::domain_error("sym_eigenvalues: matrix order must be between 1 and 8");
    double scale = 0.0;
    for (double v : m.a) scale = std::max(scale, std::fabs(v));
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q)
            if (std::fabs(m.at(p, q) - m.at(q, p)) > 1e-12 * std::max(1.0, scale))
                throw std::domain_error("sym_eigenvalues: input matrix is not symmetric");

    SymMatrix a = m;
    // symmetrize exactly so rotations preserve symmetry to rounding
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            double v = 0.5 * (a.at(p, q) + a.at(q, p));
            a.at(p, q) = v;
            a.at(q, p) = v;
        }

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
        if (off <= 1e-30 * std::max(1.0, scale * scale)) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a.at(p, q);
                if (apq == 0.0) continue;
                double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a.at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline double min_eigen_sym(const SymMatrix& m) { return sym_eigenvalues(m).front(); }

// Determinant by Gaussian elimination with partial pivoting; fine for the
// small dense matrices this library produces.
inline double det(const SymMatrix& m) {
    const int n = m.n;
    SymMatrix a = m;
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row)
            if (std::fabs(a.at(row, col)) > std::fabs(a.at(piv, col))) piv = row;
        if (a.at(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            for (int k = 0; k < n; ++k) std::swap(a.at(piv, k), a.at(col, k));
            d = -d;
        }
        d *= a.at(col, col);
        for (int row = col + 1; row < n; ++row) {
            double f = a.at(row, col) / a.at(col, col);
            for (int k = col; k < n; ++k) a.at(row, k) -= f * a.at(col, k);
        }
    }
    return d;
}

} // namespace finsleroid
