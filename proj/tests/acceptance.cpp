// Acceptance battery: one pass/fail line per criterion, exit 1 if any fail.
// Every check is deterministic (fixed seeds) and runs in well under a minute.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "finsleroid/export.hpp"
#include "finsleroid/hamiltonian.hpp"
#include "finsleroid/metric_tensor.hpp"
#include "finsleroid/numerics.hpp"
#include "finsleroid/pd_metric.hpp"
#include "finsleroid/spherical_map.hpp"
#include "finsleroid/sr_metric.hpp"
#include "finsleroid/types.hpp"

using namespace finsleroid;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double relerr(double got, double want) {
    return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

double unit_real(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

double sym_real(std::mt19937_64& rng, double half_width) {
    return std::uniform_real_distribution<double>(-half_width, half_width)(rng);
}

EventVector random_event(std::mt19937_64& rng, int dim, double half_width) {
    EventVector v;
    v.t = sym_real(rng, half_width);
    v.x.resize(static_cast<std::size_t>(dim) - 1);
    for (double& c : v.x) c = sym_real(rng, half_width);
    return v;
}

CoVector random_covector(std::mt19937_64& rng, int dim, double half_width) {
    CoVector c;
    c.t = sym_real(rng, half_width);
    c.xi.resize(static_cast<std::size_t>(dim) - 1);
    for (double& e : c.xi) e = sym_real(rng, half_width);
    return c;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

const std::vector<double> kGridNoZero = {-1.9, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 1.9};
const std::vector<double> kGridWithZero = {-1.9, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 1.9};

// 1. At the isotropic parameter both families and both duals collapse to the
//    classical norms over 1000 random points.
Outcome criterion_isotropic_reduction() {
    std::mt19937_64 rng(42);
    const int dim = 4;
    PdParams pd = make_pd_params(0.0, dim);
    SrParams sr = make_sr_params(0.0, dim);
    double worst = 0.0;
    for (int i = 0; i < 250; ++i) {
        EventVector v = random_event(rng, dim, 2.0);
        if (std::fabs(v.t) + spatial_norm(v.x) < 1e-3) continue;
        double want = std::sqrt(sq(v.t) + spatial_norm_sq(v.x));
        worst = std::max(worst, relerr(metric_k(pd, v), want));

        CoVector c = random_covector(rng, dim, 2.0);
        if (std::fabs(c.t) + spatial_norm(c.xi) < 1e-3) continue;
        double want_h = std::sqrt(sq(c.t) + spatial_norm_sq(c.xi));
        worst = std::max(worst, relerr(hamiltonian_h(pd, c), want_h));

        EventVector u = random_event(rng, dim, 1.0);
        u.t = (unit_real(rng) < 0.5 ? -1.0 : 1.0) * (1.0 + 2.0 * unit_real(rng));
        double scale = 0.9 * std::fabs(u.t) * unit_real(rng) /
                       std::max(spatial_norm(u.x), 1e-9);
        for (double& e : u.x) e *= scale;
        double want_f = std::sqrt(sq(u.t) - spatial_norm_sq(u.x));
        worst = std::max(worst, relerr(f_sr(sr, u), want_f));

        CoVector d;
        d.t = u.t;
        d.xi = u.x;
        worst = std::max(worst, relerr(h_sr(sr, d), want_f));
    }
    return {worst <= 1e-14, fmt("worst relative residual %.2e (tol 1e-14)", worst)};
}

// 2. Landmark points land on the unit level sets of K, H, and F.
Outcome criterion_landmarks() {
    const int dim = 4;
    double worst = 0.0;
    auto ev = [](double t, double rho) {
        EventVector v;
        v.t = t;
        v.x = {rho, 0.0, 0.0};
        return v;
    };
    auto cv = [](double t, double rho) {
        CoVector c;
        c.t = t;
        c.xi = {rho, 0.0, 0.0};
        return c;
    };
    for (double g : {-1.9, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 1.9}) {
        PdParams p = make_pd_params(g, dim);
        PdLandmarks lm = pd_landmarks(p);
        worst = std::max(worst, std::fabs(metric_k(p, ev(0.0, 1.0)) - 1.0));
        worst = std::max(worst, std::fabs(metric_k(p, ev(lm.t1, 0.0)) - 1.0));
        worst = std::max(worst, std::fabs(metric_k(p, ev(lm.t2, 0.0)) - 1.0));
        worst = std::max(worst, std::fabs(metric_k(p, ev(lm.f, lm.k)) - 1.0));
        worst = std::max(worst, std::fabs(hamiltonian_h(p, cv(-lm.t1, 0.0)) - 1.0));
        worst = std::max(worst, std::fabs(hamiltonian_h(p, cv(-lm.t2, 0.0)) - 1.0));

        SrParams s = make_sr_params(g, dim);
        SrLandmarks sl = sr_landmarks(s);
        worst = std::max(worst, std::fabs(f_sr(s, ev(1.0, 0.0)) - 1.0));
        worst = std::max(worst, std::fabs(f_sr(s, ev(-1.0, 0.0)) - 1.0));
        worst = std::max(worst, std::fabs(f_sr(s, ev(0.0, sl.c)) - 1.0));
        worst = std::max(worst, std::fabs(f_sr(s, ev(sl.s, sl.z)) - 1.0));
    }
    return {worst <= 1e-12, fmt("worst |value - 1| %.2e (tol 1e-12)", worst)};
}

// 3. The spherical map sends the unit level set onto the sphere of radius r
//    and inverts exactly.
Outcome criterion_spherical_map() {
    std::mt19937_64 rng(43);
    const int dim = 4;
    double worst_norm = 0.0, worst_round = 0.0;
    for (double g : kGridWithZero) {
        PdParams p = make_pd_params(g, dim);
        for (int i = 0; i < 200; ++i) {
            EventVector v = random_event(rng, dim, 1.5);
            if (std::fabs(v.t) + spatial_norm(v.x) < 0.05) {
                --i;
                continue;
            }
            SphereImage s = tau(p, v);
            worst_norm = std::max(
                worst_norm, relerr(sphere_norm(s), p.r * metric_k(p, v)));
            EventVector back = lambda_inv(p, s);
            double scale = std::max(1.0, detail::inf_norm(v));
            worst_round = std::max(worst_round, std::fabs(back.t - v.t) / scale);
            for (std::size_t a = 0; a < v.x.size(); ++a)
                worst_round =
                    std::max(worst_round, std::fabs(back.x[a] - v.x[a]) / scale);
        }
    }
    bool pass = worst_norm <= 1e-10 && worst_round <= 1e-10;
    return {pass, fmt("norm residual %.2e, roundtrip %.2e (tol 1e-10)", worst_norm,
                      worst_round)};
}

// 4. The pullback tensor equals the numeric Hessian of the half-squared
//    metric; the map Jacobian and the ambient tensor have the closed-form
//    determinants.
Outcome criterion_pullback_tensor() {
    std::mt19937_64 rng(44);
    const int dim = 4;
    double worst_hess = 0.0, worst_jac = 0.0, worst_det = 0.0;
    for (double g : kGridWithZero) {
        PdParams p = make_pd_params(g, dim);
        ScalarField half_sq = [&p](const EventVector& u) {
            return 0.5 * sq(metric_k(p, u));
        };
        for (int i = 0; i < 20; ++i) {
            EventVector v = random_event(rng, dim, 1.0);
            double norm = std::sqrt(sq(v.t) + spatial_norm_sq(v.x));
            if (norm < 0.05 || spatial_norm(v.x) / norm < 0.25) {
                --i;
                continue;
            }
            double radius = 0.5 + unit_real(rng);
            v.t *= radius / norm;
            for (double& e : v.x) e *= radius / norm;

            SymMatrix exact = pullback_metric(p, v);
            SymMatrix fd = hessian_fd(half_sq, v, DiffConfig{});
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b)
                    worst_hess =
                        std::max(worst_hess, std::fabs(exact.at(a, b) - fd.at(a, b)));

            double det_j = det(tau_jacobian(p, v));
            double want_j = p.r * std::pow(j_factor(p, v), dim);
            worst_jac = std::max(worst_jac, relerr(det_j, want_j));

            double det_n = det(quasi_euclidean(p, tau(p, v)).n_lower);
            worst_det = std::max(worst_det, std::fabs(det_n - p.h * p.h));
        }
    }
    bool pass = worst_hess <= 1e-6 && worst_jac <= 1e-10 && worst_det <= 1e-12;
    return {pass, fmt("hessian %.2e (1e-6), det J %.2e (1e-10), det n %.2e (1e-12)",
                      worst_hess, worst_jac, worst_det)};
}

// 5. Strong convexity: the metric tensors of K and H stay positive definite
//    at unit-normalized points, and both profile curves bend strictly
//    downward on the branch where the curve is a graph over rho.
Outcome criterion_convexity() {
    std::mt19937_64 rng(45);
    const int dim = 4;
    double min_eig = 1e30;
    double max_second = -1e30;
    for (double g : kGridWithZero) {
        PdParams p = make_pd_params(g, dim);
        for (int i = 0; i < 60; ++i) {
            EventVector v = random_event(rng, dim, 1.0);
            double k = metric_k(p, v);
            if (k < 0.05) {
                --i;
                continue;
            }
            v.t /= k;
            for (double& e : v.x) e /= k;
            min_eig = std::min(min_eig, min_eigen_sym(metric_tensor(p, v)));

            CoVector c = random_covector(rng, dim, 1.0);
            double h = hamiltonian_h(p, c);
            if (h < 0.05) {
                --i;
                continue;
            }
            c.t /= h;
            for (double& e : c.xi) e /= h;
            min_eig = std::min(min_eig, min_eigen_sym(co_metric_tensor(p, c)));
        }

        PdParams p2 = make_pd_params(g, 2);
        for (int i = 0; i < 40; ++i) {
            double th = (0.02 + 0.96 * unit_real(rng)) * kPi;
            EventVector v;
            v.t = std::cos(th);
            v.x = {std::sin(th)};
            v = indicatrix_point(p2, v);
            if (v.t + p2.g * rho_of(v) >= 0.05)
                max_second = std::max(max_second, profile_derivatives(p2, v).second);

            CoVector c;
            c.t = std::cos(th);
            c.xi = {std::sin(th)};
            double h = hamiltonian_h(p2, c);
            c.t /= h;
            c.xi[0] /= h;
            if (c.t - p2.g * rho_of(c) >= 0.05)
                max_second = std::max(max_second, co_profile_derivatives(p2, c).second);
        }
    }
    bool pass = min_eig > 1e-8 && max_second < 0.0;
    return {pass, fmt("min eigenvalue %.2e (floor 1e-8), max profile second %.2e",
                      min_eig, max_second)};
}

// 6. Unscaled gradient duality. The composition H(grad(K^2/2)) differs from K
//    by the constant factor k(g), so three of the four clauses fail for every
//    g != 0; the scaled relation Q = Q_hat / (1 - g p)^2 is exact. The battery
//    reports the honest residuals rather than folding the constant in.
Outcome criterion_gradient_duality() {
    std::mt19937_64 rng(46);
    const int dim = 4;
    double worst_comp = 0.0, worst_jj = 0.0, worst_q = 0.0, worst_vw = 0.0;
    for (double g : kGridNoZero) {
        PdParams p = make_pd_params(g, dim);
        for (int i = 0; i < 50; ++i) {
            EventVector v = random_event(rng, dim, 1.5);
            if (metric_k(p, v) < 0.05) {
                --i;
                continue;
            }
            double got = hamiltonian_h(p, covariant_momenta(p, v));
            worst_comp = std::max(worst_comp, relerr(got, metric_k(p, v)));
        }
        for (int i = 0; i <= 80; ++i) {
            double w = -4.0 + 8.0 * i / 80.0;
            if (std::fabs(1.0 + g * w) < 0.05) continue;
            double pv = p_from_w(p, w);
            worst_jj = std::max(worst_jj,
                                std::fabs(gen_j(p, w) * gen_j_hat(p, pv) - 1.0));
            worst_q = std::max(
                worst_q, relerr(gen_q(p, w), gen_q_hat(p, pv) / sq(1.0 - g * pv)));
            worst_vw = std::max(
                worst_vw, relerr(sq(gen_v(p, w)) * sq(gen_w(p, pv)),
                                 gen_q(p, w) * gen_q_hat(p, pv)));
        }
    }
    bool pass = worst_comp <= 1e-8 && worst_jj <= 1e-12 && worst_q <= 1e-12 &&
                worst_vw <= 1e-12;
    double kappa = dual_scale(make_pd_params(1.9, dim));
    return {pass,
            fmt("composition %.2e, j*j_hat %.2e, scaled-Q %.2e", worst_comp,
                worst_jj, worst_q) +
                fmt(", V2W2 %.2e; constant ratio k(1.9) = %.4g", worst_vw, kappa)};
}

// 7. Mirror identities: the dual of the family at g is the primal family at
//    -g, for both the positive-definite and the cone-bounded variants.
Outcome criterion_mirrors() {
    std::mt19937_64 rng(47);
    const int dim = 4;
    double worst_pd = 0.0, worst_sr = 0.0;
    for (int i = 0; i < 500; ++i) {
        double g = sym_real(rng, 1.95);
        PdParams p = make_pd_params(g, dim);
        PdParams m = mirror_params(p);
        CoVector c = random_covector(rng, dim, 2.0);
        if (std::fabs(c.t) + spatial_norm(c.xi) < 0.05) {
            --i;
            continue;
        }
        worst_pd = std::max(
            worst_pd, relerr(hamiltonian_h(p, c), metric_k(m, as_event(c))));
    }
    for (int i = 0; i < 500; ++i) {
        double g = sym_real(rng, 2.5);
        SrParams s = make_sr_params(g, dim);
        SrParams m = make_sr_params(-g, dim);
        CoVector c = random_covector(rng, dim, 2.0);
        EventVector e = as_event(c);
        double scale = std::max(std::fabs(e.t), spatial_norm(e.x));
        if (scale < 0.05 || std::fabs(sr_factor_a(m, e)) < 1e-3 * scale ||
            std::fabs(sr_factor_b(m, e)) < 1e-3 * scale) {
            --i;
            continue;
        }
        worst_sr = std::max(worst_sr, relerr(h_sr(s, c), f_sr(m, e)));
    }
    bool pass = worst_pd <= 1e-12 && worst_sr <= 1e-12;
    return {pass,
            fmt("pd residual %.2e, sr residual %.2e (tol 1e-12)", worst_pd, worst_sr)};
}

// 8. Cone-bounded family: the forward branch of the unit shell curves
//    strictly upward, and gradient duality holds in the forward sector.
Outcome criterion_sr_convexity() {
    std::mt19937_64 rng(48);
    double min_second = 1e30;
    double worst_dual = 0.0;
    for (double g : kGridWithZero) {
        SrParams p2 = make_sr_params(g, 2);
        for (int i = 0; i < 100; ++i) {
            double rho0 = (0.95 * unit_real(rng)) / p2.g_up_plus;
            EventVector dir;
            dir.t = 1.0;
            dir.x = {rho0};
            EventVector v = hyperboloid_point(p2, dir);
            min_second = std::min(min_second, sr_profile_derivatives(p2, v).second);
        }

        SrParams p = make_sr_params(g, 4);
        for (int i = 0; i < 100; ++i) {
            EventVector v = random_event(rng, 4, 1.0);
            v.t = 1.0;
            double norm = spatial_norm(v.x);
            double cap = 0.9 * unit_real(rng) / p.g_up_plus;
            for (double& e : v.x) e *= cap / std::max(norm, 1e-9);
            double radius = 0.5 + 1.5 * unit_real(rng);
            v.t *= radius;
            for (double& e : v.x) e *= radius;
            double got = h_sr(p, sr_covariant_momenta(p, v));
            worst_dual = std::max(worst_dual, relerr(got, f_sr(p, v)));
        }
    }
    bool pass = min_second > 0.0 && worst_dual <= 1e-6;
    return {pass, fmt("min profile second %.2e, duality residual %.2e (tol 1e-6)",
                      min_second, worst_dual)};
}

// 9. Closed-form derivatives of the scalar generators match Richardson
//    finite differences at default configuration.
Outcome criterion_generator_derivatives() {
    double worst1 = 0.0, worst2 = 0.0;
    DiffConfig cfg;
    for (double g : kGridNoZero) {
        PdParams p = make_pd_params(g, 4);
        auto fv = [&p](double w) { return gen_v(p, w); };
        auto fj = [&p](double w) { return gen_j(p, w); };
        auto fw = [&p](double pv) { return gen_w(p, pv); };
        auto fjh = [&p](double pv) { return gen_j_hat(p, pv); };
        for (int i = 0; i <= 80; ++i) {
            double w = -4.0 + 8.0 * i / 80.0;
            GenDerivs dv = gen_v_derivs(p, w);
            worst1 = std::max(worst1, relerr(diff_scalar(fv, w, cfg), dv.first));
            worst2 = std::max(worst2, relerr(diff2_scalar(fv, w, cfg), dv.second));
            worst1 = std::max(worst1, relerr(diff_scalar(fj, w, cfg), gen_j_prime(p, w)));

            GenDerivs dw = gen_w_derivs(p, w);
            worst1 = std::max(worst1, relerr(diff_scalar(fw, w, cfg), dw.first));
            worst2 = std::max(worst2, relerr(diff2_scalar(fw, w, cfg), dw.second));
            worst1 =
                std::max(worst1, relerr(diff_scalar(fjh, w, cfg), gen_j_hat_prime(p, w)));
        }
    }
    double worst = std::max(worst1, worst2);
    return {worst <= 1e-8,
            fmt("first %.2e, second %.2e (tol 1e-8)", worst1, worst2)};
}

// 10. Mesh export: the revolved unit surface for g = 1 is watertight with
//     sphere topology, spans exactly the axis intercepts, and its vertices
//     re-evaluate onto the unit level set, through a file round trip.
Outcome criterion_mesh_export() {
    PdParams p = make_pd_params(1.0, 2);
    PdLandmarks lm = pd_landmarks(p);
    ProfileCurve curve = trace_profile(SurfaceFamily::pd_indicatrix, 1.0, 129);
    RevolutionMesh mesh = revolve_profile(curve, 64);

    std::filesystem::path path =
        std::filesystem::temp_directory_path() / "finsleroid_acceptance.obj";
    {
        std::ofstream out(path, std::ios::binary);
        write_obj(mesh, out);
    }
    RevolutionMesh parsed;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) {
            std::array<double, 3> v{};
            std::sscanf(line.c_str(), "v %lf %lf %lf", &v[0], &v[1], &v[2]);
            parsed.vertices.push_back(v);
        } else if (line.rfind("f ", 0) == 0) {
            std::array<int, 3> f{};
            std::sscanf(line.c_str(), "f %d %d %d", &f[0], &f[1], &f[2]);
            parsed.faces.push_back({f[0] - 1, f[1] - 1, f[2] - 1});
        }
    }
    std::error_code ec;
    std::filesystem::remove(path, ec);

    MeshStats st = mesh_stats(parsed);
    double span = std::max(std::fabs(st.t_min - lm.t1), std::fabs(st.t_max - lm.t2));
    double worst_unit = 0.0;
    for (const std::array<double, 3>& v : parsed.vertices) {
        EventVector e;
        e.t = v[2];
        e.x = {std::hypot(v[0], v[1])};
        worst_unit = std::max(worst_unit, std::fabs(metric_k(p, e) - 1.0));
    }
    bool pass = st.euler_characteristic == 2 && st.watertight && span <= 1e-6 &&
                worst_unit <= 1e-8 && parsed.vertices.size() == mesh.vertices.size();
    return {pass, fmt("chi = 2 watertight, span residual %.2e, vertex residual %.2e",
                      span, worst_unit)};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {"isotropic reduction", criterion_isotropic_reduction},
        {"landmark battery", criterion_landmarks},
        {"spherical map", criterion_spherical_map},
        {"pullback tensor", criterion_pullback_tensor},
        {"positive definiteness", criterion_convexity},
        {"unscaled gradient duality", criterion_gradient_duality},
        {"mirror identities", criterion_mirrors},
        {"cone-family convexity", criterion_sr_convexity},
        {"generator derivatives", criterion_generator_derivatives},
        {"mesh export", criterion_mesh_export},
    };
    int failures = 0;
    int index = 0;
    for (const Entry& e : entries) {
        ++index;
        Outcome o = e.run();
        if (!o.pass) ++failures;
        std::printf("[%2d] %s  %-26s %s\n", index, o.pass ? "PASS" : "FAIL", e.name,
                    o.detail.c_str());
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
