#include "finsleroid/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <random>
#include <string_view>

#include "finsleroid/hamiltonian.hpp"
#include "finsleroid/metric_tensor.hpp"
#include "finsleroid/numerics.hpp"
#include "finsleroid/pd_metric.hpp"
#include "finsleroid/spherical_map.hpp"
#include "finsleroid/sr_metric.hpp"

namespace finsleroid {

const char* family_name(CheckFamily f) {
    switch (f) {
        case CheckFamily::PD: return "PD";
        case CheckFamily::SR: return "SR";
        case CheckFamily::MAP: return "MAP";
        case CheckFamily::DUAL: return "DUAL";
    }
    return "?";
}

std::vector<double> default_g_grid() {
    return {-1.9, -1.5, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 1.5, 1.9};
}

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sym_real(std::mt19937_64& rng) { return 2.0 * unit_real(rng) - 1.0; }

// Box-Muller normal deviate; keeps the sampler identical across platforms,
// unlike std::normal_distribution.
double gauss(std::mt19937_64& rng) {
    double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    double u2 = unit_real(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return std::string(buf);
}

std::string fmt_vec(double g, const EventVector& v) {
    std::string s = fmt("g=%.17g; v=(%.17g;", g, v.t);
    for (std::size_t i = 0; i < v.x.size(); ++i)
        s += fmt("%s %.17g", i ? "," : "", v.x[i]);
    return s + ")";
}

std::string fmt_covec(double g, const CoVector& c) {
    std::string s = fmt("g=%.17g; p=(%.17g;", g, c.t);
    for (std::size_t i = 0; i < c.xi.size(); ++i)
        s += fmt("%s %.17g", i ? "," : "", c.xi[i]);
    return s + ")";
}

double relerr(double got, double want) {
    return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

struct Residual {
    double worst = 0.0;
    long samples = 0;
    std::string where;

    void add(double r, std::string w) {
        ++samples;
        if (samples == 1 || r > worst) {
            worst = r;
            where = std::move(w);
        }
    }
};

struct Battery {
    std::vector<double> g_grid;
    std::uint64_t seed;
    int dim;
    Tolerances tol;
};

EventVector random_direction(int dim, std::mt19937_64& rng) {
    for (;;) {
        EventVector v;
        v.t = gauss(rng);
        v.x.resize(dim - 1);
        for (double& c : v.x) c = gauss(rng);
        double n = std::sqrt(sq(v.t) + spatial_norm_sq(v.x));
        if (n < 1e-6) continue;
        v.t /= n;
        for (double& c : v.x) c /= n;
        return v;
    }
}

// A point away from the origin: unit direction scaled into [0.2, 2.2].
EventVector random_point(int dim, std::mt19937_64& rng) {
    return scaled(random_direction(dim, rng), 0.2 + 2.0 * unit_real(rng));
}

CoVector as_covec(const EventVector& v) {
    CoVector c;
    c.t = v.t;
    c.xi = v.x;
    return c;
}

CoVector random_copoint(int dim, std::mt19937_64& rng) {
    return as_covec(random_point(dim, rng));
}

// Largest slope w kept strictly inside the principal sector (w >= 0 and
// 1 + g*w > 0), where the scaled product identities hold.
double principal_w_cap(double g) {
    return g < 0.0 ? 0.9 * (-1.0 / g) : 4.0;
}

// ---------------------------------------------------------------------------
// PD checks

void chk_pd_euclidean(const Battery& b, std::mt19937_64& rng, Residual& res) {
    PdParams p = make_pd_params(0.0, b.dim);
    for (int i = 0; i < 400; ++i) {
        EventVector v = random_point(b.dim, rng);
        double want = std::sqrt(sq(v.t) + spatial_norm_sq(v.x));
        res.add(relerr(metric_k(p, v), want), fmt_vec(0.0, v));
    }
}

void chk_pd_homogeneity(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            double lam = 0.3 + 3.0 * unit_real(rng);
            res.add(relerr(metric_k(p, scaled(v, lam)), lam * metric_k(p, v)),
                    fmt_vec(g, v));
        }
    }
}

void chk_pd_gt_parity(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        PdParams pm = make_pd_params(-g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            EventVector vf = v;
            vf.t = -vf.t;
            res.add(relerr(metric_k(pm, vf), metric_k(p, v)), fmt_vec(g, v));
        }
    }
}

void chk_pd_spatial_symmetry(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            double k = metric_k(p, v);
            EventVector vr = v;
            for (double& c : vr.x) c = -c;
            res.add(relerr(metric_k(p, vr), k), fmt_vec(g, v));
            EventVector vs = v;
            std::swap(vs.x.front(), vs.x.back());
            res.add(relerr(metric_k(p, vs), k), fmt_vec(g, v));
        }
    }
}

void chk_pd_time_asymmetry(const Battery& b, std::mt19937_64&, Residual& res) {
    for (double g : b.g_grid) {
        if (std::fabs(g) < 0.05) continue;  // symmetric limit
        PdParams p = make_pd_params(g, b.dim);
        EventVector up, down;
        up.t = 1.0;
        down.t = -1.0;
        up.x.assign(b.dim - 1, 0.0);
        down.x.assign(b.dim - 1, 0.0);
        up.x[0] = 1.0;
        down.x[0] = 1.0;
        double gap = std::fabs(metric_k(p, up) - metric_k(p, down));
        // time reflection must change the value; residual is the margin miss
        res.add(std::max(0.0, 1e-6 - gap), fmt("g=%.17g; gap=%.17g", g, gap));
    }
}

void chk_pd_b_form_positive(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        double h2 = p.h * p.h;
        for (int i = 0; i < 80; ++i) {
            EventVector v = random_point(b.dim, rng);
            double n2 = sq(v.t) + spatial_norm_sq(v.x);
            // B >= h^2 * (T^2 + rho^2)/2 everywhere
            double slack = 0.5 * h2 * n2 - b_form(p, v);
            res.add(std::max(0.0, slack / n2), fmt_vec(g, v));
        }
    }
}

void chk_pd_branch_continuity(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // the unified two-argument angle form against the one-sided closed forms
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, 2);
        auto piecewise = [&](double t, double rho) {
            double w = rho / t;
            if (t > 0)
                return std::exp(0.5 * p.G * (kPi / 2 - std::atan((2 * w + p.g) / (2 * p.h))));
            if (t < 0)
                return std::exp(0.5 * p.G * (-kPi / 2 - std::atan((2 * w + p.g) / (2 * p.h))));
            return 1.0;
        };
        for (int i = 0; i < 60; ++i) {
            double t = sym_real(rng) * 2.0;
            double rho = 0.05 + 2.0 * unit_real(rng);
            EventVector v;
            v.t = t;
            v.x = {rho};
            res.add(relerr(j_factor(p, v), piecewise(t, rho)), fmt_vec(g, v));
        }
        EventVector eq;
        eq.t = 0.0;
        eq.x = {1.0};
        res.add(std::fabs(j_factor(p, eq) - 1.0), fmt_vec(g, eq));
    }
    (void)b.dim;
}

void chk_pd_t_factorization(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // K(T, R) = T * V(rho/T) on the T > 0 half-space
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            v.t = 0.05 + std::fabs(v.t);
            double w = rho_of(v) / v.t;
            res.add(relerr(metric_k(p, v), v.t * gen_v(p, w)), fmt_vec(g, v));
        }
    }
}

void chk_pd_gen_derivative_odes(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, 2);
        for (int i = 0; i < 24; ++i) {
            double w = -4.0 + 8.0 * unit_real(rng);
            GenDerivs d = gen_v_derivs(p, w);
            auto fv = [&](double x) { return gen_v(p, x); };
            auto fj = [&](double x) { return gen_j(p, x); };
            res.add(relerr(d.first, diff_scalar(fv, w)), fmt("g=%.17g; w=%.17g", g, w));
            res.add(relerr(d.second, diff2_scalar(fv, w)) * 1e-2,
                    fmt("g=%.17g; w=%.17g (2nd)", g, w));
            res.add(relerr(gen_j_prime(p, w), diff_scalar(fj, w)),
                    fmt("g=%.17g; w=%.17g (j')", g, w));
        }
    }
    (void)b.dim;
}

void chk_pd_momenta_gradient(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        auto half_k2 = [&](const EventVector& q) { return 0.5 * sq(metric_k(p, q)); };
        for (int i = 0; i < 12; ++i) {
            EventVector v = random_point(b.dim, rng);
            if (rho_of(v) < 0.05) continue;  // gradient stencil needs axis clearance
            CoVector m = covariant_momenta(p, v);
            CoVector fd = grad_fd(half_k2, v);
            res.add(relerr(m.t, fd.t), fmt_vec(g, v));
            for (std::size_t a = 0; a < m.xi.size(); ++a)
                res.add(relerr(m.xi[a], fd.xi[a]), fmt_vec(g, v));
        }
    }
}

void chk_pd_momenta_euler(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            CoVector m = covariant_momenta(p, v);
            double dot = m.t * v.t;
            for (std::size_t a = 0; a < m.xi.size(); ++a) dot += m.xi[a] * v.x[a];
            res.add(relerr(dot, sq(metric_k(p, v))), fmt_vec(g, v));
        }
    }
}

void chk_pd_landmark_units(const Battery& b, std::mt19937_64&, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        PdLandmarks lm = pd_landmarks(p);
        auto axis = [&](double t, double rho) {
            EventVector v;
            v.t = t;
            v.x.assign(b.dim - 1, 0.0);
            v.x[0] = rho;
            return v;
        };
        res.add(std::fabs(metric_k(p, axis(0.0, 1.0)) - 1.0), fmt("g=%.17g; equator", g));
        res.add(std::fabs(metric_k(p, axis(lm.t1, 0.0)) - 1.0), fmt("g=%.17g; t1", g));
        res.add(std::fabs(metric_k(p, axis(lm.t2, 0.0)) - 1.0), fmt("g=%.17g; t2", g));
        res.add(std::fabs(metric_k(p, axis(lm.f, lm.k)) - 1.0), fmt("g=%.17g; apex", g));
    }
}

void chk_pd_landmark_identities(const Battery& b, std::mt19937_64&, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        PdLandmarks lm = pd_landmarks(p);
        PdLandmarks lr = pd_landmarks(make_pd_params(-g, b.dim));
        res.add(relerr(lm.f, -p.g * lm.k), fmt("g=%.17g; apex height", g));
        res.add(relerr(std::fabs(lm.t1) * lm.t2, lm.k), fmt("g=%.17g; intercept product", g));
        res.add(relerr(lr.k, lm.k), fmt("g=%.17g; apex radius even", g));
        res.add(relerr(lr.t1, -lm.t2), fmt("g=%.17g; intercept reflection", g));
    }
}

void chk_pd_profile_slope(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, 2);
        PdLandmarks lm = pd_landmarks(p);
        // top of the profile: horizontal tangent
        EventVector top;
        top.t = lm.t2;
        top.x = {0.0};
        res.add(std::fabs(profile_derivatives(p, top).first), fmt("g=%.17g; top", g));
        for (int i = 0; i < 6; ++i) {
            double th = (0.05 + 0.55 * unit_real(rng)) * kPi / 2;
            EventVector v;
            v.t = std::cos(th);
            v.x = {std::sin(th)};
            v = indicatrix_point(p, v);
            // keep the differentiation stencil away from the vertical tangent
            if (std::fabs(v.t + p.g * rho_of(v)) < 0.3) continue;
            ProfileDerivs d = profile_derivatives(p, v);
            auto t_of_rho = [&](double rho) {
                auto fk = [&](double t) {
                    EventVector q;
                    q.t = t;
                    q.x = {rho};
                    return metric_k(p, q) - 1.0;
                };
                RootConfig rc;
                rc.tol = 1e-14;
                return newton_scalar(fk, v.t, rc);
            };
            res.add(relerr(d.first, diff_scalar(t_of_rho, rho_of(v))), fmt_vec(g, v));
        }
    }
    (void)b.dim;
}

void chk_pd_profile_concavity(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // on the branch T + g*rho > 0 the profile curves downward strictly
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, 2);
        for (int i = 0; i < 40; ++i) {
            double th = (0.02 + 0.96 * unit_real(rng)) * kPi;
            EventVector v;
            v.t = std::cos(th);
            v.x = {std::sin(th)};
            v = indicatrix_point(p, v);
            if (v.t + p.g * rho_of(v) < 0.05) continue;
            res.add(std::max(0.0, profile_derivatives(p, v).second), fmt_vec(g, v));
        }
    }
    (void)b.dim;
}

void chk_pd_tensor_eigen(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // minimum eigenvalue of the metric tensor at unit-level points must stay
    // above a positive floor; the exact pullback form keeps the measurement
    // honest even at g = 1.9, where the floor is a few 1e-8
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 25; ++i) {
            EventVector v = indicatrix_point(p, random_direction(b.dim, rng));
            double eig = min_eigen_sym(metric_tensor(p, v));
            res.add(std::max(0.0, 1e-8 - eig), fmt("%s; min_eig=%.17g",
                                                   fmt_vec(g, v).c_str(), eig));
        }
    }
}

void chk_pd_indicatrix_projection(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            res.add(std::fabs(metric_k(p, indicatrix_point(p, v)) - 1.0), fmt_vec(g, v));
        }
    }
}

// ---------------------------------------------------------------------------
// MAP checks

void chk_map_sphere_norm(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            res.add(relerr(sphere_norm(tau(p, v)), p.r * metric_k(p, v)), fmt_vec(g, v));
        }
    }
}

void chk_map_indicatrix_to_sphere(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = indicatrix_point(p, random_direction(b.dim, rng));
            res.add(relerr(sphere_norm(tau(p, v)), p.r), fmt_vec(g, v));
        }
    }
}

void chk_map_homogeneity(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 40; ++i) {
            EventVector v = random_point(b.dim, rng);
            double lam = 0.3 + 3.0 * unit_real(rng);
            SphereImage a = tau(p, scaled(v, lam));
            SphereImage c = scaled(tau(p, v), lam);
            res.add(relerr(a.t, c.t), fmt_vec(g, v));
            for (std::size_t q = 0; q < a.x.size(); ++q)
                res.add(relerr(a.x[q], c.x[q]), fmt_vec(g, v));
        }
    }
}

void chk_map_roundtrip(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 40; ++i) {
            EventVector v = random_point(b.dim, rng);
            EventVector back = lambda_inv(p, tau(p, v));
            res.add(relerr(back.t, v.t), fmt_vec(g, v));
            for (std::size_t q = 0; q < back.x.size(); ++q)
                res.add(relerr(back.x[q], v.x[q]), fmt_vec(g, v));

            // and the other composition, on a random image point
            EventVector y = random_point(b.dim, rng);
            SphereImage sy;
            sy.t = y.t;
            sy.x = y.x;
            SphereImage fwd = tau(p, lambda_inv(p, sy));
            res.add(relerr(fwd.t, sy.t), fmt_vec(g, y));
            for (std::size_t q = 0; q < fwd.x.size(); ++q)
                res.add(relerr(fwd.x[q], sy.x[q]), fmt_vec(g, y));
        }
    }
}

void chk_map_slope_recovery(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // the image of a T > 0 ray encodes the slope: |x~|/I~ = rho/T
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 40; ++i) {
            EventVector v = random_point(b.dim, rng);
            v.t = 0.1 + std::fabs(v.t);
            if (rho_of(v) < 0.05) continue;
            SphereImage s = tau(p, v);
            double axial = lambda_axial(p, s);
            res.add(relerr(rho_of(s) / axial, rho_of(v) / v.t), fmt_vec(g, v));
        }
    }
}

void chk_map_jacobian_fd(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 6; ++i) {
            EventVector v = random_point(b.dim, rng);
            // spatial central differences would straddle the axis kink
            if (rho_of(v) < 0.2) continue;
            SymMatrix J = tau_jacobian(p, v);
            for (int comp = 0; comp < b.dim; ++comp) {
                ScalarField tc = [&p, comp](const EventVector& u) {
                    SphereImage si = tau(p, u);
                    return comp == 0 ? si.t : si.x[comp - 1];
                };
                CoVector row = grad_fd(tc, v);
                res.add(relerr(J.at(comp, 0), row.t), fmt_vec(g, v));
                for (int q = 1; q < b.dim; ++q)
                    res.add(relerr(J.at(comp, q), row.xi[q - 1]), fmt_vec(g, v));
            }
        }
    }
}

void chk_map_jacobian_euler(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // degree-1 homogeneity: J(v) v = tau(v)
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 30; ++i) {
            EventVector v = random_point(b.dim, rng);
            SymMatrix J = tau_jacobian(p, v);
            SphereImage s = tau(p, v);
            for (int a = 0; a < b.dim; ++a) {
                double acc = J.at(a, 0) * v.t;
                for (int q = 1; q < b.dim; ++q) acc += J.at(a, q) * v.x[q - 1];
                res.add(relerr(acc, a == 0 ? s.t : s.x[a - 1]), fmt_vec(g, v));
            }
        }
    }
}

void chk_map_jacobian_det(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 30; ++i) {
            EventVector v = random_point(b.dim, rng);
            double j = j_factor(p, v);
            double want = p.r * std::pow(j, b.dim);
            res.add(relerr(det(tau_jacobian(p, v)), want), fmt_vec(g, v));
        }
    }
}

void chk_map_jacobian_contractions(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 25; ++i) {
            EventVector v = random_point(b.dim, rng);
            v.t = 0.25 + std::fabs(v.t);
            double w = rho_of(v) / v.t;
            if (w < 0.05) continue;
            SymMatrix J = tau_jacobian(p, v);
            double j = j_factor(p, v);
            double q = gen_q(p, w);
            std::vector<double> wa(v.x.size());
            for (std::size_t a = 0; a < wa.size(); ++a) wa[a] = v.x[a] / v.t;
            // spatial block against the slope vector
            for (int a = 1; a < b.dim; ++a) {
                double acc = 0.0;
                for (int c = 1; c < b.dim; ++c) acc += J.at(a, c) * wa[c - 1];
                res.add(relerr(acc, j * wa[a - 1] * (q - 0.5 * p.g * w) / q), fmt_vec(g, v));
            }
            // spatial block squared
            for (int a = 1; a < b.dim; ++a)
                for (int c = 1; c < b.dim; ++c) {
                    double acc = 0.0;
                    for (int e = 1; e < b.dim; ++e) acc += J.at(a, e) * J.at(c, e);
                    double expect = (a == c ? 1.0 : 0.0) -
                                    p.g * wa[a - 1] * wa[c - 1] / (w * q) +
                                    0.25 * p.g * p.g * wa[a - 1] * wa[c - 1] / (q * q);
                    res.add(relerr(acc, j * j * expect), fmt_vec(g, v));
                }
        }
    }
}

void chk_map_axis_limit(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // on the axis the Jacobian degenerates to a diagonal spatial block and
    // is the continuous limit of nearby off-axis Jacobians
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (double t : {1.0, -1.0, 0.4}) {
            EventVector v;
            v.t = t;
            v.x.assign(b.dim - 1, 0.0);
            SymMatrix J = tau_jacobian(p, v);
            double jax = j_factor(p, v);
            for (int a = 1; a < b.dim; ++a) {
                res.add(std::fabs(J.at(a, a) - jax) / jax, fmt_vec(g, v));
                res.add(std::fabs(J.at(0, a)), fmt_vec(g, v));
                res.add(std::fabs(J.at(a, 0)), fmt_vec(g, v));
            }
            EventVector v2 = v;
            v2.x[0] = 1e-8 * (unit_real(rng) + 0.5);
            SymMatrix J2 = tau_jacobian(p, v2);
            for (int a = 0; a < b.dim; ++a)
                for (int c = 0; c < b.dim; ++c)
                    res.add(std::fabs(J2.at(a, c) - J.at(a, c)) / jax, fmt_vec(g, v2));
        }
    }
}

void chk_map_quasi_rules(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        double h2 = p.h * p.h;
        for (int i = 0; i < 20; ++i) {
            EventVector y = random_point(b.dim, rng);
            SphereImage s;
            s.t = y.t;
            s.x = y.x;
            QuasiEuclideanTensor qe = quasi_euclidean(p, s);
            res.add(relerr(det(qe.n_lower), h2), fmt_vec(g, y));
            res.add(relerr(det(qe.n_upper), 1.0 / h2), fmt_vec(g, y));
            res.add(relerr(min_eigen_sym(qe.n_lower), h2), fmt_vec(g, y));
            double norm = sphere_norm(s);
            std::vector<double> l(b.dim);
            l[0] = s.t / norm;
            for (int a = 1; a < b.dim; ++a) l[a] = s.x[a - 1] / norm;
            double quad = 0.0;
            for (int a = 0; a < b.dim; ++a) {
                double low = 0.0, up = 0.0;
                for (int c = 0; c < b.dim; ++c) {
                    low += qe.n_lower.at(a, c) * l[c];
                    up += qe.n_upper.at(a, c) * l[c];
                }
                quad += low * l[a];
                res.add(std::fabs(low - h2 * l[a]), fmt_vec(g, y));
                res.add(std::fabs(up - l[a] / h2), fmt_vec(g, y));
            }
            res.add(std::fabs(quad - h2), fmt_vec(g, y));
            // the two tensors are mutually inverse
            for (int a = 0; a < b.dim; ++a)
                for (int c = 0; c < b.dim; ++c) {
                    double acc = 0.0;
                    for (int e = 0; e < b.dim; ++e)
                        acc += qe.n_lower.at(a, e) * qe.n_upper.at(e, c);
                    res.add(std::fabs(acc - (a == c ? 1.0 : 0.0)), fmt_vec(g, y));
                }
        }
    }
}

void chk_map_pullback_contraction(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // contracting the pulled-back tensor with the vector itself must land on
    // the closed-form momenta; this pins the tensor against an independently
    // validated gradient without finite-difference noise
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 30; ++i) {
            EventVector v = random_point(b.dim, rng);
            SymMatrix gp = pullback_metric(p, v);
            CoVector m = covariant_momenta(p, v);
            for (int a = 0; a < b.dim; ++a) {
                double acc = gp.at(a, 0) * v.t;
                for (int c = 1; c < b.dim; ++c) acc += gp.at(a, c) * v.x[c - 1];
                res.add(relerr(acc, a == 0 ? m.t : m.xi[a - 1]), fmt_vec(g, v));
            }
        }
    }
}

void chk_map_pullback_det(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 25; ++i) {
            EventVector v = random_point(b.dim, rng);
            double dj = p.r * std::pow(j_factor(p, v), b.dim);
            res.add(relerr(det(pullback_metric(p, v)), p.h * p.h * dj * dj), fmt_vec(g, v));
        }
    }
}

// ---------------------------------------------------------------------------
// DUAL checks

void chk_dual_reflected_form(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        PdParams pm = make_pd_params(-g, b.dim);
        for (int i = 0; i < 40; ++i) {
            CoVector c = random_copoint(b.dim, rng);
            res.add(relerr(b_hat(p, c), b_form(pm, as_event(c))), fmt_covec(g, c));
        }
    }
}

void chk_dual_mirror(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        PdParams pm = make_pd_params(-g, b.dim);
        for (int i = 0; i < 60; ++i) {
            CoVector c = random_copoint(b.dim, rng);
            res.add(relerr(hamiltonian_h(p, c), metric_k(pm, as_event(c))), fmt_covec(g, c));
        }
    }
}

void chk_dual_euclidean(const Battery& b, std::mt19937_64& rng, Residual& res) {
    PdParams p = make_pd_params(0.0, b.dim);
    for (int i = 0; i < 400; ++i) {
        CoVector c = random_copoint(b.dim, rng);
        double want = std::sqrt(sq(c.t) + spatial_norm_sq(c.xi));
        res.add(relerr(hamiltonian_h(p, c), want), fmt_covec(0.0, c));
    }
}

void chk_dual_parities(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        PdParams pm = make_pd_params(-g, b.dim);
        for (int i = 0; i < 40; ++i) {
            CoVector c = random_copoint(b.dim, rng);
            double hv = hamiltonian_h(p, c);
            CoVector cf = c;
            cf.t = -cf.t;
            res.add(relerr(hamiltonian_h(pm, cf), hv), fmt_covec(g, c));
            CoVector cr = c;
            for (double& q : cr.xi) q = -q;
            res.add(relerr(hamiltonian_h(p, cr), hv), fmt_covec(g, c));
        }
    }
}

void chk_dual_gen_odes(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, 2);
        for (int i = 0; i < 24; ++i) {
            double pv = -4.0 + 8.0 * unit_real(rng);
            GenDerivs d = gen_w_derivs(p, pv);
            auto fw = [&](double x) { return gen_w(p, x); };
            auto fj = [&](double x) { return gen_j_hat(p, x); };
            res.add(relerr(d.first, diff_scalar(fw, pv)), fmt("g=%.17g; p=%.17g", g, pv));
            res.add(relerr(d.second, diff2_scalar(fw, pv)) * 1e-2,
                    fmt("g=%.17g; p=%.17g (2nd)", g, pv));
            res.add(relerr(gen_j_hat_prime(p, pv), diff_scalar(fj, pv)),
                    fmt("g=%.17g; p=%.17g (j')", g, pv));
        }
    }
    (void)b.dim;
}

void chk_dual_t_factorization(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 40; ++i) {
            CoVector c = random_copoint(b.dim, rng);
            c.t = 0.05 + std::fabs(c.t);
            double pv = rho_of(c) / c.t;
            res.add(relerr(hamiltonian_h(p, c), c.t * gen_w(p, pv)), fmt_covec(g, c));
        }
    }
}

void chk_dual_gradient_scaled(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // the gradient map carries the whole space onto the 1/kappa level of H,
    // uniformly: H(grad(K^2/2)(v)) * kappa = K(v)
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        double kap = dual_scale(p);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            double got = hamiltonian_h(p, covariant_momenta(p, v)) * kap;
            res.add(relerr(got, metric_k(p, v)), fmt_vec(g, v));
        }
    }
}

void chk_dual_scale_constant(const Battery& b, std::mt19937_64&, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        res.add(relerr(dual_scale(p), pd_landmarks(p).k), fmt("g=%.17g", g));
        res.add(relerr(dual_scale(make_pd_params(-g, b.dim)), dual_scale(p)),
                fmt("g=%.17g (parity)", g));
    }
    res.add(std::fabs(dual_scale(make_pd_params(0.0, b.dim)) - 1.0), "g=0");
}

void chk_dual_j_product(const Battery& b, std::mt19937_64&, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, 2);
        double kap = dual_scale(p);
        double cap = principal_w_cap(g);
        for (int i = 0; i <= 24; ++i) {
            double w = cap * i / 24.0;
            double pv = p_from_w(p, w);
            res.add(relerr(gen_j(p, w) * gen_j_hat(p, pv) * kap, 1.0),
                    fmt("g=%.17g; w=%.17g", g, w));
        }
    }
    (void)b.dim;
}

void chk_dual_vw_product(const Battery& b, std::mt19937_64&, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, 2);
        double kap = dual_scale(p);
        double cap = principal_w_cap(g);
        for (int i = 0; i <= 24; ++i) {
            double w = cap * i / 24.0;
            double pv = p_from_w(p, w);
            res.add(relerr(sq(gen_v(p, w)) * sq(gen_w(p, pv)) * sq(kap),
                           gen_q(p, w) * gen_q_hat(p, pv)),
                    fmt("g=%.17g; w=%.17g", g, w));
        }
    }
    (void)b.dim;
}

void chk_dual_q_ratio(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, 2);
        for (int i = 0; i < 40; ++i) {
            double w = -6.0 + 12.0 * unit_real(rng);
            if (std::fabs(1.0 + g * w) < b.tol.exclusion_radius) continue;
            double pv = p_from_w(p, w);
            res.add(relerr(gen_q(p, w), gen_q_hat(p, pv) / sq(1.0 - g * pv)),
                    fmt("g=%.17g; w=%.17g", g, w));
        }
    }
    (void)b.dim;
}

void chk_dual_slope_inverse(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, 2);
        for (int i = 0; i < 40; ++i) {
            double w = -6.0 + 12.0 * unit_real(rng);
            if (std::fabs(1.0 + g * w) < b.tol.exclusion_radius) continue;
            double pv = p_from_w(p, w);
            res.add(relerr(w_from_p(p, pv), w), fmt("g=%.17g; w=%.17g", g, w));
            res.add(relerr((1.0 + g * w) * (1.0 - g * pv), 1.0), fmt("g=%.17g; w=%.17g", g, w));
        }
    }
    (void)b.dim;
}

void chk_dual_momenta_slope(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // the momenta image of a principal-sector ray has slope p(w) and its T
    // component is (1+gw) K^2/(Q T)
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 40; ++i) {
            EventVector v = random_point(b.dim, rng);
            v.t = 0.1 + std::fabs(v.t);
            double w = rho_of(v) / v.t;
            if (1.0 + g * w < 0.05 || w < 0.05) continue;
            CoVector m = covariant_momenta(p, v);
            double kk = metric_k(p, v);
            res.add(relerr(m.t, (1.0 + g * w) * kk * kk / (gen_q(p, w) * v.t)), fmt_vec(g, v));
            res.add(relerr(rho_of(m) / m.t, p_from_w(p, w)), fmt_vec(g, v));
        }
    }
}

void chk_dual_roundtrip(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 40; ++i) {
            EventVector v = random_point(b.dim, rng);
            EventVector back = contravariant_from_momenta(p, covariant_momenta(p, v));
            res.add(relerr(back.t, v.t), fmt_vec(g, v));
            for (std::size_t a = 0; a < back.x.size(); ++a)
                res.add(relerr(back.x[a], v.x[a]), fmt_vec(g, v));

            CoVector c = random_copoint(b.dim, rng);
            CoVector cb = covariant_momenta(p, contravariant_from_momenta(p, c));
            res.add(relerr(cb.t, c.t), fmt_covec(g, c));
            for (std::size_t a = 0; a < cb.xi.size(); ++a)
                res.add(relerr(cb.xi[a], c.xi[a]), fmt_covec(g, c));
        }
    }
}

void chk_dual_co_landmarks(const Battery& b, std::mt19937_64&, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        PdLandmarks lm = pd_landmarks(p);
        CoLandmarks co = co_landmarks(p);
        auto axis = [&](double t, double rho) {
            CoVector c;
            c.t = t;
            c.xi.assign(b.dim - 1, 0.0);
            c.xi[0] = rho;
            return c;
        };
        res.add(std::fabs(hamiltonian_h(p, axis(co.t1_co, 0.0)) - 1.0),
                fmt("g=%.17g; t1_co", g));
        res.add(std::fabs(hamiltonian_h(p, axis(co.t2_co, 0.0)) - 1.0),
                fmt("g=%.17g; t2_co", g));
        res.add(std::fabs(hamiltonian_h(p, axis(co.f_hat, lm.k)) - 1.0),
                fmt("g=%.17g; co-apex", g));
        res.add(relerr(co.f_hat, p.g * lm.k), fmt("g=%.17g; co-apex height", g));
        res.add(relerr(co.t1_co * (-co.t2_co), lm.k), fmt("g=%.17g; intercepts", g));
    }
}

void chk_dual_co_concavity(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // figuratrix profile on the branch T_hat - g*rho_hat > 0 curves downward
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, 2);
        for (int i = 0; i < 40; ++i) {
            double th = (0.02 + 0.96 * unit_real(rng)) * kPi;
            CoVector c;
            c.t = std::cos(th);
            c.xi = {std::sin(th)};
            double hv = hamiltonian_h(p, c);
            c = scaled(c, 1.0 / hv);
            if (c.t - p.g * rho_of(c) < 0.05) continue;
            res.add(std::max(0.0, co_profile_derivatives(p, c).second), fmt_covec(g, c));
        }
    }
    (void)b.dim;
}

void chk_dual_tensor_eigen(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        PdParams p = make_pd_params(g, b.dim);
        for (int i = 0; i < 25; ++i) {
            CoVector c = as_covec(random_direction(b.dim, rng));
            c = scaled(c, 1.0 / hamiltonian_h(p, c));
            double eig = min_eigen_sym(co_metric_tensor(p, c));
            res.add(std::max(0.0, 1e-8 - eig),
                    fmt("%s; min_eig=%.17g", fmt_covec(g, c).c_str(), eig));
        }
    }
}

// ---------------------------------------------------------------------------
// SR checks

void chk_sr_parameters(const Battery& b, std::mt19937_64&, Residual& res) {
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        double scale = 1.0 + 0.25 * g * g;  // cancellation scale of the root products
        res.add(std::fabs(p.g_plus * p.g_minus + 1.0) / scale, fmt("g=%.17g", g));
        res.add(std::fabs(p.g_up_plus * p.g_up_minus + 1.0) / scale, fmt("g=%.17g", g));
        res.add(std::fabs(p.g_up_plus * p.g_plus - 1.0) / scale, fmt("g=%.17g", g));
        res.add(std::fabs(p.g_up_plus + p.g_minus), fmt("g=%.17g", g));
        res.add(std::fabs(p.g_plus + p.g_minus + g), fmt("g=%.17g", g));
        res.add(std::fabs(p.G_plus - p.G_minus - 2.0), fmt("g=%.17g", g));
        res.add(std::fabs(p.G_up_plus - p.G_up_minus - 2.0), fmt("g=%.17g", g));
        res.add(std::fabs(p.h * p.h - 0.25 * g * g - 1.0) / scale, fmt("g=%.17g", g));
    }
}

// near-cone samples amplify the rounding of the vanishing factor; the
// documented exclusion radius fences them out of the relative comparisons
bool sr_near_cone(const Battery& b, const SrParams& p, const EventVector& v) {
    double scale = std::fabs(v.t) + rho_of(v);
    return std::fabs(sr_factor_a(p, v)) < b.tol.exclusion_radius * scale ||
           std::fabs(sr_factor_b(p, v)) < b.tol.exclusion_radius * scale;
}

void chk_sr_minkowski(const Battery& b, std::mt19937_64& rng, Residual& res) {
    SrParams p = make_sr_params(0.0, b.dim);
    for (int i = 0; i < 400; ++i) {
        EventVector v = random_point(b.dim, rng);
        if (sr_near_cone(b, p, v)) continue;
        double q = sq(v.t) - spatial_norm_sq(v.x);
        res.add(relerr(f_sr(p, v), std::sqrt(std::fabs(q))), fmt_vec(0.0, v));
        res.add(relerr(h_sr(p, as_covec(v)), std::sqrt(std::fabs(q))), fmt_vec(0.0, v));
    }
}

void chk_sr_homogeneity(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            if (sr_near_cone(b, p, v)) continue;
            double lam = 0.3 + 3.0 * unit_real(rng);
            res.add(relerr(f_sr(p, scaled(v, lam)), lam * f_sr(p, v)), fmt_vec(g, v));
        }
    }
}

void chk_sr_gt_parity(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        SrParams pm = make_sr_params(-g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            if (sr_near_cone(b, p, v)) continue;
            EventVector vf = v;
            vf.t = -vf.t;
            res.add(relerr(f_sr(pm, vf), f_sr(p, v)), fmt_vec(g, v));
        }
    }
}

void chk_sr_cone_vanishing(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        for (int i = 0; i < 20; ++i) {
            double rho = 0.2 + 2.0 * unit_real(rng);
            EventVector v;
            v.x.assign(b.dim - 1, 0.0);
            v.x[0] = rho;
            v.t = p.g_up_plus * rho;  // forward cone, factor A = 0 exactly
            res.add(std::fabs(f_sr(p, v)), fmt_vec(g, v));
            v.t = -p.g_plus * rho;  // backward cone, factor B = 0 exactly
            res.add(std::fabs(f_sr(p, v)), fmt_vec(g, v));
        }
    }
}

void chk_sr_landmark_units(const Battery& b, std::mt19937_64&, Residual& res) {
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        SrLandmarks lm = sr_landmarks(p);
        auto axis = [&](double t, double rho) {
            EventVector v;
            v.t = t;
            v.x.assign(b.dim - 1, 0.0);
            v.x[0] = rho;
            return v;
        };
        res.add(std::fabs(f_sr(p, axis(1.0, 0.0)) - 1.0), fmt("g=%.17g; (1,0)", g));
        res.add(std::fabs(f_sr(p, axis(-1.0, 0.0)) - 1.0), fmt("g=%.17g; (-1,0)", g));
        res.add(std::fabs(f_sr(p, axis(0.0, lm.c)) - 1.0), fmt("g=%.17g; (0,c)", g));
        res.add(std::fabs(f_sr(p, axis(lm.s, lm.z)) - 1.0), fmt("g=%.17g; (s,z)", g));
    }
}

void chk_sr_landmark_identities(const Battery& b, std::mt19937_64&, Residual& res) {
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        SrLandmarks lm = sr_landmarks(p);
        res.add(relerr(lm.c * lm.z, 1.0), fmt("g=%.17g; c*z", g));
        res.add(relerr(lm.s, p.g * lm.z), fmt("g=%.17g; s=g*z", g));
    }
}

void chk_sr_mirror(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        SrParams pm = make_sr_params(-g, b.dim);
        for (int i = 0; i < 60; ++i) {
            CoVector c = random_copoint(b.dim, rng);
            EventVector e = as_event(c);
            if (sr_near_cone(b, pm, e)) continue;
            res.add(relerr(h_sr(p, c), f_sr(pm, e)), fmt_covec(g, c));
        }
    }
}

void chk_sr_gradient_duality(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // H(grad(F^2/2)) = F on the forward and backward sectors (the equatorial
    // sector between the cones does not satisfy the composition)
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        int done = 0;
        for (int i = 0; done < 60 && i < 6000; ++i) {
            EventVector v = random_point(b.dim, rng);
            if (i % 2) v.t = -v.t;
            SrSector sect = sr_sector(p, v);
            if (sect != SrSector::forward && sect != SrSector::backward) continue;
            if (sr_near_cone(b, p, v)) continue;
            res.add(relerr(h_sr(p, sr_covariant_momenta(p, v)), f_sr(p, v)), fmt_vec(g, v));
            ++done;
        }
    }
}

void chk_sr_momenta_euler(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_point(b.dim, rng);
            if (sr_near_cone(b, p, v)) continue;
            CoVector m = sr_covariant_momenta(p, v);
            double dot = m.t * v.t;
            for (std::size_t a = 0; a < m.xi.size(); ++a) dot += m.xi[a] * v.x[a];
            res.add(relerr(dot, sq(f_sr(p, v))), fmt_vec(g, v));
        }
    }
}

void chk_sr_momenta_fd(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        auto half_f2 = [&](const EventVector& q) { return 0.5 * sq(f_sr(p, q)); };
        int done = 0;
        for (int i = 0; done < 10 && i < 2000; ++i) {
            EventVector v = random_point(b.dim, rng);
            // wide cone and axis margins: the FD stencil needs smooth territory
            if (std::fabs(sr_factor_a(p, v)) < 0.15 || std::fabs(sr_factor_b(p, v)) < 0.15 ||
                rho_of(v) < 0.05)
                continue;
            CoVector m = sr_covariant_momenta(p, v);
            CoVector fd = grad_fd(half_f2, v);
            res.add(relerr(m.t, fd.t), fmt_vec(g, v));
            for (std::size_t a = 0; a < m.xi.size(); ++a)
                res.add(relerr(m.xi[a], fd.xi[a]), fmt_vec(g, v));
            ++done;
        }
    }
}

void chk_sr_profile_slope(const Battery& b, std::mt19937_64& rng, Residual& res) {
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, 2);
        EventVector apex;
        apex.t = 1.0;
        apex.x = {0.0};
        res.add(std::fabs(sr_profile_derivatives(p, apex).first), fmt("g=%.17g; (1,0)", g));
        for (int i = 0; i < 6; ++i) {
            double rho0 = (0.1 + 0.8 * unit_real(rng)) / p.g_up_plus;
            EventVector dir;
            dir.t = 1.0;
            dir.x = {rho0};
            EventVector v = hyperboloid_point(p, dir);
            ProfileDerivs d = sr_profile_derivatives(p, v);
            auto t_of_rho = [&](double rho) {
                auto ff = [&](double t) {
                    EventVector q;
                    q.t = t;
                    q.x = {rho};
                    return f_sr(p, q) - 1.0;
                };
                RootConfig rc;
                rc.tol = 1e-14;
                return newton_scalar(ff, v.t, rc);
            };
            res.add(relerr(d.first, diff_scalar(t_of_rho, rho_of(v))), fmt_vec(g, v));
        }
    }
    (void)b.dim;
}

void chk_sr_profile_convexity(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // forward branch curves upward strictly
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, 2);
        for (int i = 0; i < 40; ++i) {
            double rho0 = (0.95 * unit_real(rng)) / p.g_up_plus;
            EventVector dir;
            dir.t = 1.0;
            dir.x = {rho0};
            EventVector v = hyperboloid_point(p, dir);
            res.add(std::max(0.0, -sr_profile_derivatives(p, v).second), fmt_vec(g, v));
        }
    }
    (void)b.dim;
}

void chk_sr_lorentz_signature(const Battery& b, std::mt19937_64& rng, Residual& res) {
    // Hessian of F^2/2 keeps one positive and dim-1 negative eigenvalues
    // throughout the forward sector
    for (double g : b.g_grid) {
        SrParams p = make_sr_params(g, b.dim);
        auto field = [&](const EventVector& q) { return 0.5 * sq(f_sr(p, q)); };
        int done = 0;
        for (int i = 0; done < 6 && i < 2000; ++i) {
            EventVector v = random_point(b.dim, rng);
            v.t = std::fabs(v.t) + 0.3;
            if (sr_sector(p, v) != SrSector::forward || sr_factor_a(p, v) < 0.2 * p.h ||
                rho_of(v) < 0.05)
                continue;
            std::vector<double> eig = sym_eigenvalues(hessian_fd(field, v));
            int neg = 0, pos = 0;
            for (double e : eig) {
                if (e < -1e-6) ++neg;
                if (e > 1e-6) ++pos;
            }
            res.add(neg == b.dim - 1 && pos == 1 ? 0.0 : 1.0, fmt_vec(g, v));
            ++done;
        }
    }
}

// ---------------------------------------------------------------------------

using CheckFn = void (*)(const Battery&, std::mt19937_64&, Residual&);

struct Check {
    const char* name;
    CheckFamily family;
    double tolerance;
    CheckFn fn;
};

// Tolerance classes: 1e-12 closed-form algebra, 1e-10 composed maps
// (roundtrips), 1e-6 finite-difference comparisons.
const Check kChecks[] = {
    {"pd.b_form_positive", CheckFamily::PD, 1e-12, chk_pd_b_form_positive},
    {"pd.branch_continuity", CheckFamily::PD, 1e-12, chk_pd_branch_continuity},
    {"pd.euclidean_reduction", CheckFamily::PD, 1e-12, chk_pd_euclidean},
    {"pd.gen_derivative_odes", CheckFamily::PD, 1e-6, chk_pd_gen_derivative_odes},
    {"pd.gt_parity", CheckFamily::PD, 1e-12, chk_pd_gt_parity},
    {"pd.homogeneity", CheckFamily::PD, 1e-12, chk_pd_homogeneity},
    {"pd.indicatrix_projection", CheckFamily::PD, 1e-12, chk_pd_indicatrix_projection},
    {"pd.landmark_identities", CheckFamily::PD, 1e-12, chk_pd_landmark_identities},
    {"pd.landmark_unit_values", CheckFamily::PD, 1e-12, chk_pd_landmark_units},
    {"pd.momenta_euler", CheckFamily::PD, 1e-12, chk_pd_momenta_euler},
    {"pd.momenta_gradient_fd", CheckFamily::PD, 1e-6, chk_pd_momenta_gradient},
    {"pd.profile_concavity", CheckFamily::PD, 1e-12, chk_pd_profile_concavity},
    {"pd.profile_slope_fd", CheckFamily::PD, 1e-6, chk_pd_profile_slope},
    {"pd.spatial_symmetry", CheckFamily::PD, 1e-12, chk_pd_spatial_symmetry},
    {"pd.t_factorization", CheckFamily::PD, 1e-12, chk_pd_t_factorization},
    {"pd.tensor_min_eigenvalue", CheckFamily::PD, 1e-12, chk_pd_tensor_eigen},
    {"pd.time_asymmetry_witness", CheckFamily::PD, 1e-12, chk_pd_time_asymmetry},
    {"map.axis_limit", CheckFamily::MAP, 1e-6, chk_map_axis_limit},
    {"map.homogeneity", CheckFamily::MAP, 1e-12, chk_map_homogeneity},
    {"map.indicatrix_to_sphere", CheckFamily::MAP, 1e-10, chk_map_indicatrix_to_sphere},
    {"map.jacobian_contractions", CheckFamily::MAP, 1e-10, chk_map_jacobian_contractions},
    {"map.jacobian_determinant", CheckFamily::MAP, 1e-10, chk_map_jacobian_det},
    {"map.jacobian_euler", CheckFamily::MAP, 1e-10, chk_map_jacobian_euler},
    {"map.jacobian_gradient_fd", CheckFamily::MAP, 1e-6, chk_map_jacobian_fd},
    {"map.pullback_contracts_momenta", CheckFamily::MAP, 1e-12, chk_map_pullback_contraction},
    {"map.pullback_determinant", CheckFamily::MAP, 1e-10, chk_map_pullback_det},
    {"map.quasi_euclidean_rules", CheckFamily::MAP, 1e-12, chk_map_quasi_rules},
    {"map.roundtrip", CheckFamily::MAP, 1e-10, chk_map_roundtrip},
    {"map.slope_recovery", CheckFamily::MAP, 1e-12, chk_map_slope_recovery},
    {"map.sphere_image_norm", CheckFamily::MAP, 1e-12, chk_map_sphere_norm},
    {"dual.co_landmark_unit_values", CheckFamily::DUAL, 1e-12, chk_dual_co_landmarks},
    {"dual.co_profile_concavity", CheckFamily::DUAL, 1e-12, chk_dual_co_concavity},
    {"dual.euclidean_reduction", CheckFamily::DUAL, 1e-12, chk_dual_euclidean},
    {"dual.gen_derivative_odes", CheckFamily::DUAL, 1e-6, chk_dual_gen_odes},
    {"dual.gradient_map_scaled", CheckFamily::DUAL, 1e-12, chk_dual_gradient_scaled},
    {"dual.h_parities", CheckFamily::DUAL, 1e-12, chk_dual_parities},
    {"dual.j_product_scaled", CheckFamily::DUAL, 1e-12, chk_dual_j_product},
    {"dual.mirror_pointwise", CheckFamily::DUAL, 1e-12, chk_dual_mirror},
    {"dual.momenta_slope", CheckFamily::DUAL, 1e-12, chk_dual_momenta_slope},
    {"dual.q_ratio", CheckFamily::DUAL, 1e-12, chk_dual_q_ratio},
    {"dual.reflected_form", CheckFamily::DUAL, 1e-12, chk_dual_reflected_form},
    {"dual.roundtrip_inverse", CheckFamily::DUAL, 1e-10, chk_dual_roundtrip},
    {"dual.scale_equals_apex_radius", CheckFamily::DUAL, 1e-12, chk_dual_scale_constant},
    {"dual.slope_map_inverse", CheckFamily::DUAL, 1e-12, chk_dual_slope_inverse},
    {"dual.t_factorization", CheckFamily::DUAL, 1e-12, chk_dual_t_factorization},
    {"dual.tensor_min_eigenvalue", CheckFamily::DUAL, 1e-12, chk_dual_tensor_eigen},
    {"dual.vw_product_scaled", CheckFamily::DUAL, 1e-12, chk_dual_vw_product},
    {"sr.cone_vanishing", CheckFamily::SR, 1e-12, chk_sr_cone_vanishing},
    {"sr.gradient_duality", CheckFamily::SR, 1e-12, chk_sr_gradient_duality},
    {"sr.gt_parity", CheckFamily::SR, 1e-12, chk_sr_gt_parity},
    {"sr.homogeneity", CheckFamily::SR, 1e-12, chk_sr_homogeneity},
    {"sr.landmark_identities", CheckFamily::SR, 1e-12, chk_sr_landmark_identities},
    {"sr.landmark_unit_values", CheckFamily::SR, 1e-12, chk_sr_landmark_units},
    {"sr.lorentz_signature", CheckFamily::SR, 1e-12, chk_sr_lorentz_signature},
    {"sr.minkowski_reduction", CheckFamily::SR, 1e-12, chk_sr_minkowski},
    {"sr.mirror_pointwise", CheckFamily::SR, 1e-12, chk_sr_mirror},
    {"sr.momenta_euler", CheckFamily::SR, 1e-12, chk_sr_momenta_euler},
    {"sr.momenta_gradient_fd", CheckFamily::SR, 1e-6, chk_sr_momenta_fd},
    {"sr.parameter_identities", CheckFamily::SR, 1e-12, chk_sr_parameters},
    {"sr.profile_convexity", CheckFamily::SR, 1e-12, chk_sr_profile_convexity},
    {"sr.profile_slope_fd", CheckFamily::SR, 1e-6, chk_sr_profile_slope},
};

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20)
                    out += fmt("\\u%04x", c);
                else
                    out += c;
        }
    }
    return out;
}

// JSON numbers cannot carry infinities; clamp the sentinel used by
// exception reports to a finite value that still dwarfs every tolerance.
double json_number(double v) {
    if (std::isfinite(v)) return v;
    return 9.9e307;
}

} // namespace

std::vector<std::string> registered_check_names() {
    std::vector<std::string> names;
    for (const Check& c : kChecks) names.emplace_back(c.name);
    std::sort(names.begin(), names.end());
    return names;
}

std::vector<EventVector> sample_directions(int dim, int count, std::uint64_t seed) {
    if (dim < 2) throw std::domain_error("sample_directions: dim must be >= 2");
    if (count < 0) throw std::domain_error("sample_directions: count must be >= 0");
    std::vector<EventVector> out;
    out.reserve(2 * dim + count);
    for (int a = 0; a < dim; ++a)
        for (double s : {1.0, -1.0}) {
            EventVector v;
            v.x.assign(dim - 1, 0.0);
            if (a == 0)
                v.t = s;
            else
                v.x[a - 1] = s;
            out.push_back(std::move(v));
        }
    std::mt19937_64 rng(seed);
    for (int i = 0; i < count; ++i) {
        EventVector v = random_direction(dim, rng);
        if (i % 4 == 3) {
            // project onto the equator ring T = 0
            double n = spatial_norm(v.x);
            if (n < 1e-6) {
                --i;
                continue;
            }
            v.t = 0.0;
            for (double& c : v.x) c /= n;
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<VerificationReport> run_all(const std::vector<double>& g_grid,
                                        std::uint64_t seed, int dim) {
    Battery b;
    b.g_grid = g_grid;
    b.seed = seed;
    b.dim = dim;
    std::vector<VerificationReport> reports;
    reports.reserve(std::size(kChecks));
    for (const Check& c : kChecks) {
        VerificationReport r;
        r.name = c.name;
        r.family = c.family;
        r.tolerance = c.tolerance;
        Residual res;
        std::mt19937_64 rng(seed ^ fnv1a(c.name));
        try {
            c.fn(b, rng, res);
            r.samples = res.samples;
            r.max_residual = res.worst;
            r.worst_case_input = res.where;
            r.pass = res.worst <= c.tolerance;
        } catch (const std::exception& e) {
            r.samples = res.samples;
            r.max_residual = std::numeric_limits<double>::infinity();
            r.worst_case_input = fmt("check aborted: %s", e.what());
            r.pass = false;
        }
        reports.push_back(std::move(r));
    }
    std::sort(reports.begin(), reports.end(),
              [](const VerificationReport& x, const VerificationReport& y) {
                  return x.name < y.name;
              });
    return reports;
}

std::string report_json(const std::vector<VerificationReport>& reports) {
    std::string out = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const VerificationReport& r = reports[i];
        out += fmt("  {\"name\": \"%s\", \"family\": \"%s\", \"samples\": %ld, "
                   "\"max_residual\": %.17g, \"tolerance\": %.17g, \"pass\": %s, "
                   "\"worst_case_input\": \"%s\"}%s\n",
                   json_escape(r.name).c_str(), family_name(r.family), r.samples,
                   json_number(r.max_residual), r.tolerance, r.pass ? "true" : "false",
                   json_escape(r.worst_case_input).c_str(),
                   i + 1 < reports.size() ? "," : "");
    }
    out += "]\n";
    return out;
}

std::string report_text(const std::vector<VerificationReport>& reports,
                        const std::vector<double>& g_grid, std::uint64_t seed, int dim) {
    Tolerances tol;
    std::string out = "verification battery\ngrid:";
    for (double g : g_grid) out += fmt(" %.17g", g);
    out += fmt("\nseed: %llu\ndim: %d\n", static_cast<unsigned long long>(seed), dim);
    out += fmt("singular-region exclusion radius: %.17g (w-poles and cone factors)\n\n",
               tol.exclusion_radius);
    long passed = 0;
    for (const VerificationReport& r : reports) {
        if (r.pass) ++passed;
        out += fmt("%s  %-30s %-4s samples=%-6ld max_residual=%-12.3g tol=%-8.0e\n",
                   r.pass ? "PASS" : "FAIL", r.name.c_str(), family_name(r.family),
                   r.samples, r.max_residual, r.tolerance);
        if (!r.pass) out += fmt("      worst: %s\n", r.worst_case_input.c_str());
    }
    out += fmt("\n%ld/%zu checks passed\n", passed, reports.size());
    return out;
}

} // namespace finsleroid
