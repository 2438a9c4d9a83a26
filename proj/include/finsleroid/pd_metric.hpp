#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "finsleroid/types.hpp"

// Positive-definite Finsleroid metric function K and its building blocks.
// The family is parametrized by a single anisotropy charge g in (-2, 2);
// K is a positively 1-homogeneous Minkowski norm whose unit level set (the
// indicatrix) is an axially symmetric convex surface of revolution around
// the T axis.

namespace finsleroid {

struct PdParams {
    double g = 0.0;  // anisotropy charge, -2 < g < 2
    double h = 1.0;  // sqrt(1 - g^2/4)
    double r = 1.0;  // 1/h
    double G = 0.0;  // g/h
    int dim = 4;     // N >= 2, total dimension including the T axis
};

inline PdParams make_pd_params(double g, int dim) {
    if (!(g > -2.0 && g < 2.0))
        throw std::domain_error("make_pd_params: g must satisfy -2 < g < 2, got " +
                                std::to_string(g));
    if (dim < 2)
        throw std::domain_error("make_pd_params: dim must be >= 2, got " +
                                std::to_string(dim));
    PdParams p;
    p.g = g;
    p.h = std::sqrt(1.0 - 0.25 * g * g);
    p.r = 1.0 / p.h;
    p.G = g / p.h;
    p.dim = dim;
    return p;
}

// Characteristic quadratic form B = rho^2 + g*rho*T + T^2. Its discriminant
// in rho/T is -4h^2 < 0, so B > 0 whenever the input is nonzero.
inline double b_form(const PdParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "b_form");
    double rho2 = spatial_norm_sq(v.x);
    return rho2 + p.g * std::sqrt(rho2) * v.t + v.t * v.t;
}

// Angle factor j = exp(G/2 * phi) with phi = atan2(2hT, 2rho + gT). This
// single two-argument form covers all T signs, is continuous across T = 0
// with value 1, and stays finite where single-argument arctangent forms of
// the same angle overflow.
inline double j_factor(const PdParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "j_factor");
    if (is_zero_vector(v))
        throw std::domain_error("j_factor: undefined at the zero vector");
    double rho = rho_of(v);
    return std::exp(0.5 * p.G * std::atan2(2.0 * p.h * v.t, 2.0 * rho + p.g * v.t));
}

// Metric function K = sqrt(B) * j. Positively homogeneous of degree 1;
// K(0) = 0 by homogeneous extension. Reduces to the Euclidean norm at g = 0.
inline double metric_k(const PdParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "metric_k");
    if (is_zero_vector(v)) return 0.0;
    return std::sqrt(b_form(p, v)) * j_factor(p, v);
}

// Scalar reductions along the ray slope w = rho/T (valid as the principal,
// T > 0 representation): Q(w) = 1 + g*w + w^2, j(w), V(w) = sqrt(Q)*j.
inline double gen_q(const PdParams& p, double w) {
    return 1.0 + p.g * w + w * w;
}

inline double gen_j(const PdParams& p, double w) {
    return std::exp(0.5 * p.G * std::atan2(2.0 * p.h, 2.0 * w + p.g));
}

inline double gen_v(const PdParams& p, double w) {
    return std::sqrt(gen_q(p, w)) * gen_j(p, w);
}

struct GenDerivs {
    double value;
    double first;
    double second;
};

// Closed-form derivatives: V' = w*V/Q, V'' = V/Q^2.
inline GenDerivs gen_v_derivs(const PdParams& p, double w) {
    double q = gen_q(p, w);
    double v = gen_v(p, w);
    return {v, w * v / q, v / (q * q)};
}

// j'(w) = -g/2 * j/Q.
inline double gen_j_prime(const PdParams& p, double w) {
    return -0.5 * p.g * gen_j(p, w) / gen_q(p, w);
}

// Gradient of K^2/2. Closed form (j^2*(T + g*rho), j^2*R^a); it agrees with
// the w-parametrized expressions (1+gw)*V*K/Q and w_a*V*K/Q for T > 0 and
// carries their analytic T -> 0 limit (g*rho, R^a) without dividing by T.
inline CoVector covariant_momenta(const PdParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "covariant_momenta");
    if (is_zero_vector(v))
        throw std::domain_error("covariant_momenta: undefined at the zero vector");
    double j = j_factor(p, v);
    double j2 = j * j;
    CoVector m;
    m.t = j2 * (v.t + p.g * rho_of(v));
    m.xi.reserve(v.x.size());
    for (double c : v.x) m.xi.push_back(j2 * c);
    return m;
}

struct PdLandmarks {
    double t1;  // negative T-axis intercept of the indicatrix
    double t2;  // positive T-axis intercept
    double f;   // T coordinate of the widest point (apex), sign(f) = -sign(g)
    double k;   // spatial radius at the apex
};

// Axis intercepts and apex of the indicatrix profile. k uses the arctangent
// of G/2 directly; this form stays on the correct angle branch over the whole
// parameter interval and is even in g.
inline PdLandmarks pd_landmarks(const PdParams& p) {
    const double pi = 3.14159265358979323846264338327950288;
    double a = std::atan(0.5 * p.G);
    PdLandmarks lm;
    lm.t1 = -std::exp(0.25 * p.G * pi + 0.5 * p.G * a);
    lm.t2 = std::exp(-0.25 * p.G * pi + 0.5 * p.G * a);
    lm.k = std::exp(p.G * a);
    lm.f = -p.g * lm.k;
    return lm;
}

// Radial projection of a nonzero direction onto the indicatrix K = 1.
inline EventVector indicatrix_point(const PdParams& p, const EventVector& u) {
    require_dim(p.dim, u.x.size(), "indicatrix_point");
    if (is_zero_vector(u))
        throw std::domain_error("indicatrix_point: zero direction");
    return scaled(u, 1.0 / metric_k(p, u));
}

// Implicit derivatives of the indicatrix profile T(rho):
// dT/drho = -rho/(T + g*rho), d2T/drho2 = -B/(T + g*rho)^3.
// On the branch T + g*rho > 0 the profile is concave; the complementary
// branch is convex, which together closes the convex body. At the apex
// T + g*rho = 0 the graph T(rho) has a vertical tangent and the implicit
// form has a pole, reported as a domain error.
inline ProfileDerivs profile_derivatives(const PdParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "profile_derivatives");
    double k = metric_k(p, v);
    if (std::fabs(k - 1.0) > 1e-6)
        throw std::domain_error("profile_derivatives: point is not on the unit level set");
    double rho = rho_of(v);
    double d = v.t + p.g * rho;
    if (std::fabs(d) < 1e-12)
        throw std::domain_error(
            "profile_derivatives: apex point, the profile tangent is vertical here");
    return {-rho / d, -b_form(p, v) / (d * d * d)};
}

} // namespace finsleroid
