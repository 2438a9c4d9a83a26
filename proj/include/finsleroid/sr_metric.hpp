#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "finsleroid/types.hpp"

// Special-relativistic Finsleroid metric F and its dual H. Unlike the
// positive-definite family, F is built from two linear cone factors raised
// to conjugate exponents; it vanishes on the two cones T = -g_minus*rho and
// T = -g_plus*rho, is positive elsewhere, and its unit level set consists of
// three hyperboloid-like branches (forward, equatorial, backward). The
// anisotropy charge g is unrestricted here; g = 0 gives |T^2 - rho^2|^(1/2).

namespace finsleroid {

struct SrParams {
    double g = 0.0;           // anisotropy charge, any finite value
    double h = 1.0;           // sqrt(1 + g^2/4)
    double g_plus = 1.0;      // -g/2 + h, positive root scale
    double g_minus = -1.0;    // -g/2 - h, negative root scale
    double g_up_plus = 1.0;   // g/2 + h = 1/g_plus = -g_minus
    double g_up_minus = -1.0; // g/2 - h = 1/g_minus = -g_plus
    double G_plus = 1.0;      // g_plus/h
    double G_minus = -1.0;    // g_minus/h
    double G_up_plus = 1.0;   // g_up_plus/h
    double G_up_minus = -1.0; // g_up_minus/h
    int dim = 4;              // N >= 2, total dimension including the T axis
};

inline SrParams make_sr_params(double g, int dim) {
    if (!std::isfinite(g))
        throw std::domain_error("make_sr_params: g must be finite");
    if (dim < 2)
        throw std::domain_error("make_sr_params: dim must be >= 2, got " +
                                std::to_string(dim));
    SrParams p;
    p.g = g;
    p.h = std::sqrt(1.0 + 0.25 * g * g);
    p.g_plus = -0.5 * g + p.h;
    p.g_minus = -0.5 * g - p.h;
    p.g_up_plus = 0.5 * g + p.h;
    p.g_up_minus = 0.5 * g - p.h;
    p.G_plus = p.g_plus / p.h;
    p.G_minus = p.g_minus / p.h;
    p.G_up_plus = p.g_up_plus / p.h;
    p.G_up_minus = p.g_up_minus / p.h;
    p.dim = dim;
    return p;
}

// Cone factors: F is assembled from A = T + g_minus*rho (vanishes on the
// steep forward cone T = g_up_plus*rho) and B = T + g_plus*rho (vanishes on
// the shallow backward cone T = -g_plus*rho).
inline double sr_factor_a(const SrParams& p, const EventVector& v) {
    return v.t + p.g_minus * rho_of(v);
}

inline double sr_factor_b(const SrParams& p, const EventVector& v) {
    return v.t + p.g_plus * rho_of(v);
}

enum class SrSector {
    forward,   // both factors positive: above the forward cone
    mixed,     // factors of opposite sign: between the cones
    backward,  // both factors negative: below the backward cone
    cone       // either factor exactly zero
};

inline SrSector sr_sector(const SrParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "sr_sector");
    double a = sr_factor_a(p, v);
    double b = sr_factor_b(p, v);
    if (a == 0.0 || b == 0.0) return SrSector::cone;
    if (a > 0.0 && b > 0.0) return SrSector::forward;
    if (a < 0.0 && b < 0.0) return SrSector::backward;
    return SrSector::mixed;
}

// F = |A|^(G_plus/2) * |B|^(-G_minus/2). Both exponents are positive and sum
// to 1, so F is 1-homogeneous, positive off the cones, and vanishes on them
// (continuously, with unbounded slope for g > 0 on the forward cone).
inline double f_sr(const SrParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "f_sr");
    if (is_zero_vector(v)) return 0.0;
    double a = sr_factor_a(p, v);
    double b = sr_factor_b(p, v);
    if (a == 0.0 || b == 0.0) return 0.0;
    return std::pow(std::fabs(a), 0.5 * p.G_plus) *
           std::pow(std::fabs(b), -0.5 * p.G_minus);
}

// Dual norm on covectors: H = |T_hat - rho_hat/g_up_plus|^(G_up_plus/2) *
// |T_hat - rho_hat/g_up_minus|^(-G_up_minus/2). Pointwise it is the
// g-reflection mirror of F, and composing it with the gradient of F^2/2
// reproduces F exactly on the forward and backward sectors.
inline double h_sr(const SrParams& p, const CoVector& c) {
    require_dim(p.dim, c.xi.size(), "h_sr");
    if (is_zero_vector(c)) return 0.0;
    double rho = rho_of(c);
    double a = c.t - rho / p.g_up_plus;
    double b = c.t - rho / p.g_up_minus;
    if (a == 0.0 || b == 0.0) return 0.0;
    return std::pow(std::fabs(a), 0.5 * p.G_up_plus) *
           std::pow(std::fabs(b), -0.5 * p.G_up_minus);
}

// Gradient of F^2/2: (F^2*(T - g*rho)/B_sr, -F^2*R^a/B_sr) with
// B_sr = A*B = T^2 - g*rho*T - rho^2. The product form of B_sr keeps the
// quotient accurate near the cones, where the two closed forms differ by
// catastrophic cancellation. Undefined on the cones (F^2/B_sr is a 0/0
// there) and at the origin.
inline CoVector sr_covariant_momenta(const SrParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "sr_covariant_momenta");
    if (is_zero_vector(v))
        throw std::domain_error("sr_covariant_momenta: undefined at the zero vector");
    double a = sr_factor_a(p, v);
    double b = sr_factor_b(p, v);
    if (a == 0.0 || b == 0.0)
        throw std::domain_error("sr_covariant_momenta: undefined on the cones");
    double f = f_sr(p, v);
    double scale = f * f / (a * b);
    CoVector m;
    m.t = scale * (v.t - p.g * rho_of(v));
    m.xi.reserve(v.x.size());
    for (double c : v.x) m.xi.push_back(-scale * c);
    return m;
}

struct SrLandmarks {
    double c;  // equatorial radius: F(0, c) = 1
    double z;  // spatial reach of the equatorial branch: F(s, z) = 1
    double s;  // T coordinate of the widest point, s = g*z
};

// Landmarks of the unit level set. (1, 0) and (-1, 0) always lie on the
// forward and backward branches; (0, c) and (s, z) lie on the equatorial
// branch, which runs between the cones. The widest point (s, z) has a
// vertical profile tangent, and c*z = 1 for every g.
inline SrLandmarks sr_landmarks(const SrParams& p) {
    SrLandmarks lm;
    lm.c = std::pow(-p.g_minus, -0.5 * p.G_plus) * std::pow(p.g_plus, 0.5 * p.G_minus);
    lm.z = std::pow(p.g_plus, -0.5 * p.G_plus) * std::pow(-p.g_minus, 0.5 * p.G_minus);
    lm.s = p.g * lm.z;
    return lm;
}

// Radial projection of a direction onto the unit level set F = 1. Directions
// on either cone have no image: F is identically zero along them.
inline EventVector hyperboloid_point(const SrParams& p, const EventVector& u) {
    require_dim(p.dim, u.x.size(), "hyperboloid_point");
    if (is_zero_vector(u))
        throw std::domain_error("hyperboloid_point: zero direction");
    if (sr_factor_a(p, u) == 0.0)
        throw std::domain_error(
            "hyperboloid_point: direction lies on the cone T + g_minus*rho = 0, "
            "where F vanishes identically");
    if (sr_factor_b(p, u) == 0.0)
        throw std::domain_error(
            "hyperboloid_point: direction lies on the cone T + g_plus*rho = 0, "
            "where F vanishes identically");
    return scaled(u, 1.0 / f_sr(p, u));
}

// Implicit derivatives of the unit-level profile T(rho):
// dT/drho = rho/(T - g*rho), d2T/drho2 = B_sr/(T - g*rho)^3.
// On the forward branch both are regular and the second is positive (the
// branch is convex); the equatorial branch has a vertical tangent at (s, z),
// where the implicit form has its pole.
inline ProfileDerivs sr_profile_derivatives(const SrParams& p, const EventVector& v) {
    require_dim(p.dim, v.x.size(), "sr_profile_derivatives");
    double f = f_sr(p, v);
    if (std::fabs(f - 1.0) > 1e-6)
        throw std::domain_error("sr_profile_derivatives: point is not on the unit level set");
    double rho = rho_of(v);
    double d = v.t - p.g * rho;
    if (std::fabs(d) < 1e-12)
        throw std::domain_error(
            "sr_profile_derivatives: widest point, the profile tangent is vertical here");
    double bsr = sr_factor_a(p, v) * sr_factor_b(p, v);
    return {rho / d, bsr / (d * d * d)};
}

} // namespace finsleroid
