#pragma once

#include <cmath>
#include <stdexcept>

#include "finsleroid/pd_metric.hpp"
#include "finsleroid/types.hpp"

// The spherical diffeomorphism: an explicit degree-1 homogeneous map tau
// carrying the indicatrix onto the Euclidean sphere of radius r = 1/h, its
// inverse lambda, the closed-form Jacobian of tau, and the quasi-Euclidean
// tensor pair that pulls back to the metric tensor of K.

namespace finsleroid {

// Euclidean length of an image point.
inline double sphere_norm(const SphereImage& s) {
    return std::sqrt(s.t * s.t + spatial_norm_sq(s.x));
}

// tau^0 = (T + g*rho/2) * j * r, tau^a = R^a * j.
// Satisfies sphere_norm(tau(v)) = r * K(v) exactly in real arithmetic.
inline SphereImage tau(const PdParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "tau");
    if (is_zero_vector(v))
        throw std::domain_error("tau: undefined at the zero vector");
    double j = j_factor(p, v);
    SphereImage s;
    s.t = (v.t + 0.5 * p.g * rho_of(v)) * j * p.r;
    s.x.reserve(v.x.size());
    for (double c : v.x) s.x.push_back(c * j);
    return s;
}

// Axial component of the inverse: I = h*t~ - g*|x~|/2. The preimage slope is
// w = |x~|/I, so the angle factor of the preimage can be reconstructed from
// the image alone; the two-argument arctangent form below stays finite when
// I -> 0 (image direction on the edge where the preimage crosses T = 0).
inline double lambda_axial(const PdParams& p, const SphereImage& s) {
    return p.h * s.t - 0.5 * p.g * spatial_norm(s.x);
}

// Inverse map: lambda^0 = I/j~, lambda^a = x~^a/j~ with
// j~ = exp(G/2 * atan2(2hI, 2|x~| + gI)), the preimage's angle factor
// written in image variables.
inline EventVector lambda_inv(const PdParams& p, const SphereImage& s) {
    require_dim(p.dim, s.x.size(), "lambda_inv");
    if (sphere_norm(s) == 0.0)
        throw std::domain_error("lambda_inv: undefined at the zero image");
    double rim = spatial_norm(s.x);
    double I = p.h * s.t - 0.5 * p.g * rim;
    double jt = std::exp(0.5 * p.G * std::atan2(2.0 * p.h * I, 2.0 * rim + p.g * I));
    EventVector v;
    v.t = I / jt;
    v.x.reserve(s.x.size());
    for (double c : s.x) v.x.push_back(c / jt);
    return v;
}

// Closed-form Jacobian d tau^p / d R^q, row-major with index 0 = T.
// Written entirely in T and rho so every entry has a finite rho -> 0 limit:
//   J[0][0] = j*r*(1 + g*rho*(T + g*rho/2)/(2B))
//   J[0][a] = j*r*x_a*g*(rho + g*T/2)/(2B)
//   J[a][0] = j*x_a*g*rho/(2B)
//   J[a][b] = j*(delta_ab - g*T*x_a*x_b/(2*B*rho)),  rho = 0 giving j*delta.
// det J = r*j^N > 0 and J contracted with R^q reproduces tau (degree-1
// homogeneity).
inline SymMatrix tau_jacobian(const PdParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "tau_jacobian");
    if (is_zero_vector(v))
        throw std::domain_error("tau_jacobian: undefined at the zero vector");
    const int n = p.dim;
    const double rho = rho_of(v);
    const double B = b_form(p, v);
    const double j = j_factor(p, v);
    SymMatrix m(n);
    m.at(0, 0) = j * p.r * (1.0 + p.g * rho * (v.t + 0.5 * p.g * rho) / (2.0 * B));
    for (int a = 1; a < n; ++a) {
        double xa = v.x[static_cast<std::size_t>(a - 1)];
        m.at(0, a) = j * p.r * xa * p.g * (rho + 0.5 * p.g * v.t) / (2.0 * B);
        m.at(a, 0) = j * xa * p.g * rho / (2.0 * B);
        for (int b = 1; b < n; ++b) {
            double xb = v.x[static_cast<std::size_t>(b - 1)];
            double entry = (a == b) ? j : 0.0;
            if (rho > 0.0) entry -= j * p.g * v.t * xa * xb / (2.0 * B * rho);
            m.at(a, b) = entry;
        }
    }
    return m;
}

struct QuasiEuclideanTensor {
    SymMatrix n_lower;  // delta - (g^2/4) l l^T
    SymMatrix n_upper;  // delta + (G^2/4) l l^T, the exact inverse
};

// Rank-one perturbations of the identity built from the unit ray l = s/|s|.
// n_lower has eigenvalue h^2 along l (determinant h^2) and 1 across it.
inline QuasiEuclideanTensor quasi_euclidean(const PdParams& p, const SphereImage& s) {
    require_dim(p.dim, s.x.size(), "quasi_euclidean");
    double norm = sphere_norm(s);
    if (norm == 0.0)
        throw std::domain_error("quasi_euclidean: undefined at the zero image");
    const int n = p.dim;
    std::vector<double> l(static_cast<std::size_t>(n));
    l[0] = s.t / norm;
    for (int a = 1; a < n; ++a) l[static_cast<std::size_t>(a)] = s.x[static_cast<std::size_t>(a - 1)] / norm;
    QuasiEuclideanTensor q{SymMatrix::identity(n), SymMatrix::identity(n)};
    const double cg = 0.25 * p.g * p.g;
    const double cG = 0.25 * p.G * p.G;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double ll = l[static_cast<std::size_t>(a)] * l[static_cast<std::size_t>(b)];
            q.n_lower.at(a, b) -= cg * ll;
            q.n_upper.at(a, b) += cG * ll;
        }
    return q;
}

// Pullback of the quasi-Euclidean tensor through tau. This equals the
// Hessian of K^2/2 and is the exact metric-tensor backend.
inline SymMatrix pullback_metric(const PdParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "pullback_metric");
    if (is_zero_vector(v))
        throw std::domain_error("pullback_metric: undefined at the zero vector");
    const int n = p.dim;
    SymMatrix J = tau_jacobian(p, v);
    SymMatrix nl = quasi_euclidean(p, tau(p, v)).n_lower;
    SymMatrix out(n);
    for (int q = 0; q < n; ++q)
        for (int pq = 0; pq < n; ++pq) {
            double acc = 0.0;
            for (int rr = 0; rr < n; ++rr)
                for (int ss = 0; ss < n; ++ss)
                    acc += nl.at(rr, ss) * J.at(rr, pq) * J.at(ss, q);
            out.at(pq, q) = acc;
        }
    // enforce exact symmetry of the assembled product
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double m = 0.5 * (out.at(a, b) + out.at(b, a));
            out.at(a, b) = m;
            out.at(b, a) = m;
        }
    return out;
}

} // namespace finsleroid
