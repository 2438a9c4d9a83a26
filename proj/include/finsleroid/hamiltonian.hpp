#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "finsleroid/metric_tensor.hpp"
#include "finsleroid/pd_metric.hpp"
#include "finsleroid/types.hpp"

// Momentum-space side of the family: the Hamiltonian norm H on covectors,
// its generating functions, the slope correspondence w <-> p, the landmarks
// of the unit co-surface (the figuratrix), and the maps between vectors and
// momenta.
//
// H is the g-reflection mirror of K: H(g; .) = K(-g; .) pointwise. The
// gradient map v -> grad(K^2/2) carries the indicatrix onto a single level
// set of this H, but that level is 1/k(g), not 1, where k(g) is the apex
// radius of the indicatrix. The constant is exposed as dual_scale(); the
// exact composition rules are
//     H(grad(K^2/2)(v)) * dual_scale = K(v)
//     contravariant_from_momenta(grad(K^2/2)(v)) = v .

namespace finsleroid {

// Conjugated quadratic form: rho^2 - g*rho*T + T^2 (the g -> -g reflection
// of the vector-side form).
inline double b_hat(const PdParams& p, const CoVector& c) {
    require_dim(p.dim, c.xi.size(), "b_hat");
    double rho2 = spatial_norm_sq(c.xi);
    return rho2 - p.g * std::sqrt(rho2) * c.t + c.t * c.t;
}

// Dual angle factor: exp(-G/2 * atan2(2h*T, 2rho - g*T)); continuous across
// T = 0 with value 1.
inline double j_hat_factor(const PdParams& p, const CoVector& c) {
    require_dim(p.dim, c.xi.size(), "j_hat_factor");
    if (is_zero_vector(c))
        throw std::domain_error("j_hat_factor: undefined at the zero covector");
    double rho = rho_of(c);
    return std::exp(-0.5 * p.G * std::atan2(2.0 * p.h * c.t, 2.0 * rho - p.g * c.t));
}

// Hamiltonian norm H = sqrt(b_hat) * j_hat; degree-1 homogeneous, zero at
// the zero covector by homogeneous extension.
inline double hamiltonian_h(const PdParams& p, const CoVector& c) {
    require_dim(p.dim, c.xi.size(), "hamiltonian_h");
    if (is_zero_vector(c)) return 0.0;
    return std::sqrt(b_hat(p, c)) * j_hat_factor(p, c);
}

// Scalar reductions along the co-slope p = rho_hat/T_hat (principal, T > 0
// representation): Q_hat = 1 - g*p + p^2, j_hat(p), W = sqrt(Q_hat)*j_hat.
inline double gen_q_hat(const PdParams& p, double pv) {
    return 1.0 - p.g * pv + pv * pv;
}

inline double gen_j_hat(const PdParams& p, double pv) {
    return std::exp(-0.5 * p.G * std::atan2(2.0 * p.h, 2.0 * pv - p.g));
}

inline double gen_w(const PdParams& p, double pv) {
    return std::sqrt(gen_q_hat(p, pv)) * gen_j_hat(p, pv);
}

// W' = p*W/Q_hat, W'' = W/Q_hat^2.
inline GenDerivs gen_w_derivs(const PdParams& p, double pv) {
    double q = gen_q_hat(p, pv);
    double w = gen_w(p, pv);
    return {w, pv * w / q, w / (q * q)};
}

// j_hat'(p) = +g/2 * j_hat/Q_hat.
inline double gen_j_hat_prime(const PdParams& p, double pv) {
    return 0.5 * p.g * gen_j_hat(p, pv) / gen_q_hat(p, pv);
}

// Slope correspondence induced by the gradient map: p = w/(1 + g*w) and
// w = p/(1 - g*p), mutually inverse away from their poles, with
// 1 + g*w = 1/(1 - g*p).
inline double p_from_w(const PdParams& p, double w) {
    double d = 1.0 + p.g * w;
    if (d == 0.0)
        throw std::domain_error("p_from_w: pole at w = " + std::to_string(-1.0 / p.g));
    return w / d;
}

inline double w_from_p(const PdParams& p, double pv) {
    double d = 1.0 - p.g * pv;
    if (d == 0.0)
        throw std::domain_error("w_from_p: pole at p = " + std::to_string(1.0 / p.g));
    return pv / d;
}

// Constant ratio K(v) / H(grad(K^2/2)(v)), the same for every v. It equals
// the apex radius k(g) = exp(G * arctan(G/2)); in particular it is 1 only
// at g = 0, which is why the unscaled composition H(grad(K^2/2)) = K fails
// for g != 0 while all scaled identities below hold exactly.
inline double dual_scale(const PdParams& p) {
    return std::exp(p.G * std::atan(0.5 * p.G));
}

// Gradient of H^2/2 with respect to the covector, in closed form:
// (j_hat^2*(T_hat - g*rho_hat), j_hat^2*xi_a). This is the mirror image of
// covariant_momenta and is NOT yet the inverse of it; see
// contravariant_from_momenta.
inline EventVector hamiltonian_momenta(const PdParams& p, const CoVector& c) {
    require_dim(p.dim, c.xi.size(), "hamiltonian_momenta");
    if (is_zero_vector(c))
        throw std::domain_error("hamiltonian_momenta: undefined at the zero covector");
    double jh = j_hat_factor(p, c);
    double jh2 = jh * jh;
    EventVector v;
    v.t = jh2 * (c.t - p.g * rho_of(c));
    v.x.reserve(c.xi.size());
    for (double q : c.xi) v.x.push_back(jh2 * q);
    return v;
}

// Exact inverse of covariant_momenta: dual_scale^2 times the gradient of
// H^2/2. Composing covariant_momenta with this map is the identity on
// nonzero vectors (and vice versa on covectors).
inline EventVector contravariant_from_momenta(const PdParams& p, const CoVector& c) {
    require_dim(p.dim, c.xi.size(), "contravariant_from_momenta");
    if (is_zero_vector(c))
        throw std::domain_error("contravariant_from_momenta: undefined at the zero covector");
    double s2 = sq(dual_scale(p));
    return scaled(hamiltonian_momenta(p, c), s2);
}

struct CoLandmarks {
    double t1_co;  // positive axis intercept of the figuratrix, equals -t1(g)
    double t2_co;  // negative axis intercept, equals -t2(g)
    double f_hat;  // T coordinate of the widest point, equals f(-g) = g*k(g)
};

inline CoLandmarks co_landmarks(const PdParams& p) {
    PdLandmarks lm = pd_landmarks(p);
    return {-lm.t1, -lm.t2, p.g * lm.k};
}

// Mirror parameters: every pointwise question about H at charge g is a
// question about K at charge -g.
inline PdParams mirror_params(const PdParams& p) {
    PdParams m = p;
    m.g = -p.g;
    m.G = -p.G;
    return m;
}

inline EventVector as_event(const CoVector& c) {
    EventVector v;
    v.t = c.t;
    v.x = c.xi;
    return v;
}

// Implicit derivatives of the figuratrix profile T_hat(rho_hat):
// dT/drho = -rho/(T - g*rho), d2T/drho2 = -b_hat/(T - g*rho)^3.
inline ProfileDerivs co_profile_derivatives(const PdParams& p, const CoVector& c) {
    return profile_derivatives(mirror_params(p), as_event(c));
}

// Metric tensor of H (Hessian of H^2/2 in the covector argument). Because H
// is the g-reflection of K, the exact pullback backend applies verbatim.
inline SymMatrix co_metric_tensor(const PdParams& p, const CoVector& c,
                                  TensorBackend backend = TensorBackend::pullback) {
    return metric_tensor(mirror_params(p), as_event(c), backend);
}

} // namespace finsleroid
