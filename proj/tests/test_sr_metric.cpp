#include "finsleroid/sr_metric.hpp"

#include <cmath>
#include <random>

#include "finsleroid/numerics.hpp"
#include "test_util.hpp"

using namespace finsleroid;

static EventVector ev(double t, std::initializer_list<double> xs) {
    EventVector v;
    v.t = t;
    v.x = xs;
    return v;
}

static CoVector cv(double t, std::initializer_list<double> xs) {
    CoVector c;
    c.t = t;
    c.xi = xs;
    return c;
}

static EventVector as_event_sr(const CoVector& c) {
    EventVector v;
    v.t = c.t;
    v.x = c.xi;
    return v;
}

static void test_params() {
    SrParams p = make_sr_params(1.0, 4);
    require_close("h(1)", p.h, 1.1180339887498949, 1e-15);
    require_close("g_plus(1)", p.g_plus, 0.61803398874989485, 1e-15);
    require_close("g_minus(1)", p.g_minus, -1.6180339887498949, 1e-15);
    require_close("g_up_plus(1)", p.g_up_plus, 1.6180339887498949, 1e-15);
    require_close("g_up_minus(1)", p.g_up_minus, -0.61803398874989485, 1e-15);

    for (double g : {-2.5, -1.2, 0.0, 0.5, 1.0, 1.9, 33.0}) {
        SrParams q = make_sr_params(g, 4);
        // products of the two roots cancel terms of size g^2/4, so the
        // achievable accuracy degrades quadratically in g
        double tol = 1e-15 * (1.0 + 0.25 * g * g);
        require_close_rel("root product", q.g_plus * q.g_minus, -1.0, tol);
        require_close_rel("up root product", q.g_up_plus * q.g_up_minus, -1.0, tol);
        require_close_rel("reciprocal pair", q.g_up_plus * q.g_plus, 1.0, tol);
        require_close("reflection pair", q.g_up_plus, -q.g_minus, 0.0);
        require_close("reflection pair 2", q.g_up_minus, -q.g_plus, 0.0);
        require_close_rel("root sum", q.g_plus + q.g_minus, -g, 1e-15);
        require_close_rel("up root sum", q.g_up_plus + q.g_up_minus, g, 1e-15);
        require_close_rel("exponent gap", q.G_plus - q.G_minus, 2.0, 1e-15);
        require_close_rel("up exponent gap", q.G_up_plus - q.G_up_minus, 2.0, 1e-15);
        require_close_rel("h identity", q.h * q.h - 0.25 * g * g, 1.0, tol);
        REQUIRE(q.G_plus > 0.0 && -q.G_minus > 0.0, "both exponents of F positive");
    }

    EXPECT_THROW(make_sr_params(0.5, 1), std::domain_error, "dim >= 2");
    EXPECT_THROW(make_sr_params(std::nan(""), 4), std::domain_error, "g must be finite");
    EXPECT_THROW(make_sr_params(1.0 / 0.0, 4), std::domain_error, "g must be finite");
}

static void test_sectors() {
    SrParams p = make_sr_params(1.0, 4);
    REQUIRE(sr_sector(p, ev(3, {1, 0, 0})) == SrSector::forward, "steep timelike direction");
    REQUIRE(sr_sector(p, ev(0.5, {1, 0, 0})) == SrSector::mixed, "between the cones");
    REQUIRE(sr_sector(p, ev(0, {1, 0, 0})) == SrSector::mixed, "equator is between the cones");
    REQUIRE(sr_sector(p, ev(-3, {1, 0, 0})) == SrSector::backward, "down direction");
    // constructed exactly on each cone
    REQUIRE(sr_sector(p, ev(p.g_up_plus, {1, 0, 0})) == SrSector::cone, "forward cone");
    REQUIRE(sr_sector(p, ev(-p.g_plus, {1, 0, 0})) == SrSector::cone, "backward cone");
    require_close("F on forward cone", f_sr(p, ev(p.g_up_plus, {1, 0, 0})), 0.0, 0.0);
    require_close("F on backward cone", f_sr(p, ev(-p.g_plus, {1, 0, 0})), 0.0, 0.0);
}

static void test_f_sr() {
    SrParams p1 = make_sr_params(1.0, 4);
    // frozen values from an extended-precision evaluation
    require_close_rel("F(1; 3,1)", f_sr(p1, ev(3, {1, 0, 0})), 2.7729824194171152, 1e-14);
    require_close_rel("F(1; 0.5,1)", f_sr(p1, ev(0.5, {1, 0, 0})), 1.1180339887498948, 1e-14);
    require_close("F zero vector", f_sr(p1, ev(0, {0, 0, 0})), 0.0, 0.0);
    require_close("F at (1,0)", f_sr(p1, ev(1, {0, 0, 0})), 1.0, 0.0);
    require_close("F at (-1,0)", f_sr(p1, ev(-1, {0, 0, 0})), 1.0, 0.0);

    // g = 0 reduces to sqrt|T^2 - rho^2|
    std::mt19937_64 rng(37);
    auto u = [&] { return 2.0 * (double)(rng() >> 11) * 0x1.0p-53 - 1.0; };
    SrParams p0 = make_sr_params(0.0, 4);
    for (int i = 0; i < 200; ++i) {
        EventVector v = ev(u(), {u(), u(), u()});
        double q = v.t * v.t - spatial_norm_sq(v.x);
        if (std::fabs(q) < 1e-6) continue;
        require_close_rel("Minkowski reduction", f_sr(p0, v), std::sqrt(std::fabs(q)), 1e-14);
    }

    for (double g : {-1.2, 0.5, 1.9, 2.5}) {
        SrParams p = make_sr_params(g, 4);
        SrParams pm = make_sr_params(-g, 4);
        for (int i = 0; i < 200; ++i) {
            EventVector v = ev(u(), {u(), u(), u()});
            if (sr_sector(p, v) == SrSector::cone || is_zero_vector(v)) continue;
            double f = f_sr(p, v);
            REQUIRE(f > 0.0, "F positive off the cones");
            require_close_rel("F homogeneity", f_sr(p, scaled(v, 2.75)), 2.75 * f, 1e-13);
            // flip g and T together
            EventVector vf = v;
            vf.t = -vf.t;
            require_close_rel("F gT-parity", f_sr(pm, vf), f, 1e-14);
            // spatial reflection
            EventVector vr = v;
            for (double& c : vr.x) c = -c;
            require_close("F P-parity", f_sr(p, vr), f, 0.0);
        }
    }

    // spatial rotation invariance (swap two spatial axes)
    EventVector a = ev(2.4, {0.3, -1.2, 0.8});
    EventVector b = ev(2.4, {0.8, 0.3, -1.2});
    require_close("F rotation invariance", f_sr(p1, a), f_sr(p1, b), 1e-15);
}

static void test_h_sr() {
    SrParams p1 = make_sr_params(1.0, 4);
    // frozen value from an extended-precision evaluation
    require_close_rel("H(1; 2,1)", h_sr(p1, cv(2, {1, 0, 0})), 1.8031127658757414, 1e-14);
    require_close("H zero covector", h_sr(p1, cv(0, {0, 0, 0})), 0.0, 0.0);
    // dual cone passes through T_hat = rho_hat/g_up_plus (= g_plus*rho_hat)
    require_close("H on dual cone", h_sr(p1, cv(1.0 / p1.g_up_plus, {1, 0, 0})), 0.0, 0.0);
    require_close("H near dual cone", h_sr(p1, cv(p1.g_plus, {1, 0, 0})), 0.0, 1e-11);

    // H at charge g is F at charge -g, pointwise
    std::mt19937_64 rng(41);
    auto u = [&] { return 2.0 * (double)(rng() >> 11) * 0x1.0p-53 - 1.0; };
    for (double g : {-1.9, -0.4, 0.0, 0.8, 2.5}) {
        SrParams p = make_sr_params(g, 4);
        SrParams pm = make_sr_params(-g, 4);
        for (int i = 0; i < 200; ++i) {
            CoVector c = cv(u(), {u(), u(), u()});
            if (is_zero_vector(c)) continue;
            // the two sides build the cone factors by division and by
            // multiplication; near a cone that ulp gap dominates the factor
            EventVector e = as_event_sr(c);
            double a = sr_factor_a(pm, e), b = sr_factor_b(pm, e);
            double scale = std::fabs(c.t) + rho_of(c);
            if (std::fabs(a) < 0.01 * scale || std::fabs(b) < 0.01 * scale) continue;
            require_close_rel("H mirror pointwise", h_sr(p, c), f_sr(pm, e), 1e-14);
        }
    }
}

static void test_momenta() {
    SrParams p1 = make_sr_params(1.0, 4);
    CoVector m = sr_covariant_momenta(p1, ev(3, {1, 0, 0}));
    // frozen components from an extended-precision evaluation
    require_close_rel("momenta T", m.t, 3.0757725993585592, 1e-14);
    require_close_rel("momenta R", m.xi[0], -1.5378862996792796, 1e-14);
    // at this particular mixed-sector point the map is the identity
    CoVector mm = sr_covariant_momenta(p1, ev(0.5, {1, 0, 0}));
    require_close_rel("mixed momenta T", mm.t, 0.5, 1e-14);
    require_close_rel("mixed momenta R", mm.xi[0], 1.0, 1e-14);

    EXPECT_THROW(sr_covariant_momenta(p1, ev(0, {0, 0, 0})), std::domain_error, "zero vector");
    EXPECT_THROW(sr_covariant_momenta(p1, ev(p1.g_up_plus, {1, 0, 0})), std::domain_error,
                 "momenta undefined on the cone");

    std::mt19937_64 rng(43);
    auto u = [&] { return 2.0 * (double)(rng() >> 11) * 0x1.0p-53 - 1.0; };
    for (double g : {-1.2, 0.0, 0.9, 1.9}) {
        SrParams p = make_sr_params(g, 4);
        auto half_f2 = [&](const EventVector& q) { return 0.5 * sq(f_sr(p, q)); };
        for (int i = 0; i < 150; ++i) {
            EventVector v = ev(u(), {u(), u(), u()});
            SrSector sect = sr_sector(p, v);
            if (sect == SrSector::cone || is_zero_vector(v)) continue;
            // keep a margin from the cones so the FD stencil stays one-sided
            if (std::fabs(sr_factor_a(p, v)) < 0.05 || std::fabs(sr_factor_b(p, v)) < 0.05)
                continue;
            CoVector mv = sr_covariant_momenta(p, v);
            // Euler relation: grad(F^2/2) . v = F^2
            double dot = mv.t * v.t;
            for (std::size_t a = 0; a < mv.xi.size(); ++a) dot += mv.xi[a] * v.x[a];
            require_close_rel("F Euler", dot, sq(f_sr(p, v)), 1e-12);
            // degree-1 homogeneity of the gradient
            CoVector ms = sr_covariant_momenta(p, scaled(v, 3.5));
            require_close_rel("momenta homogeneity T", ms.t, 3.5 * mv.t, 1e-12);
            // numeric gradient, in every sector
            CoVector fd = grad_fd(half_f2, v);
            require_close_rel("momenta vs fd T", mv.t, fd.t, 1e-5);
            for (std::size_t a = 0; a < mv.xi.size(); ++a)
                require_close_rel("momenta vs fd R", mv.xi[a], fd.xi[a], 1e-5);
        }
    }
}

static void test_duality() {
    // H(grad(F^2/2)(v)) = F(v) with no scale correction, in the forward and
    // backward sectors; the equatorial (mixed) sector does not satisfy it
    std::mt19937_64 rng(47);
    auto u = [&] { return (double)(rng() >> 11) * 0x1.0p-53; };
    for (double g : {-1.9, -0.6, 0.0, 1.0, 2.5}) {
        SrParams p = make_sr_params(g, 4);
        // note: central inversion swaps the sector roles only together with
        // g -> -g, so the backward sector is sampled on its own
        int fwd = 0, bwd = 0;
        for (int i = 0; (fwd < 120 || bwd < 120) && i < 8000; ++i) {
            double sign = (i % 2 == 0) ? 1.0 : -1.0;
            EventVector v = ev(sign * (0.05 + 3.0 * u()), {u(), u(), u()});
            SrSector sect = sr_sector(p, v);
            if (sect == SrSector::forward && fwd < 120)
                ++fwd;
            else if (sect == SrSector::backward && bwd < 120)
                ++bwd;
            else
                continue;
            CoVector m = sr_covariant_momenta(p, v);
            require_close_rel("gradient duality", h_sr(p, m), f_sr(p, v), 1e-12);
        }
        REQUIRE(fwd == 120 && bwd == 120, "sampled both timelike sectors");
    }

    // witness: at a mixed-sector point the composition misses F by a wide margin
    SrParams p1 = make_sr_params(1.0, 4);
    EventVector v = ev(1.0, {0.9, 0, 0});
    REQUIRE(sr_sector(p1, v) == SrSector::mixed, "witness point is mixed");
    double gap = std::fabs(h_sr(p1, sr_covariant_momenta(p1, v)) - f_sr(p1, v));
    require_close("mixed-sector duality gap", gap, 0.27976212219818045, 1e-12);
}

static void test_landmarks() {
    // frozen rows from an extended-precision evaluation
    struct Row {
        double g, c, z, s;
    };
    const Row rows[] = {
        {0.5, 1.0618571813378398, 0.94174623252073726, 0.47087311626036863},
        {1.0, 1.2401154380457005, 0.80637654311916420, 0.80637654311916420},
        {1.9, 1.7903081217515706, 0.55856306959141612, 1.0612698322236906},
        {-1.2, 1.3399844319924293, 0.74627732690378737, -0.89553279228454484},
        {2.5, 2.2660374934610924, 0.44129896477247757, 1.1032474119311939},
    };
    for (const Row& r : rows) {
        SrParams p = make_sr_params(r.g, 4);
        SrLandmarks lm = sr_landmarks(p);
        require_close_rel("landmark c", lm.c, r.c, 1e-14);
        require_close_rel("landmark z", lm.z, r.z, 1e-14);
        require_close_rel("landmark s", lm.s, r.s, 1e-14);
        require_close("s = g*z", lm.s, p.g * lm.z, 0.0);
        require_close_rel("c*z = 1", lm.c * lm.z, 1.0, 1e-14);
        // all four landmark points sit on the unit level set
        require_close_rel("F(0,c)", f_sr(p, ev(0, {lm.c, 0, 0})), 1.0, 1e-13);
        require_close_rel("F(s,z)", f_sr(p, ev(lm.s, {lm.z, 0, 0})), 1.0, 1e-13);
        require_close("F(1,0)", f_sr(p, ev(1, {0, 0, 0})), 1.0, 0.0);
        require_close("F(-1,0)", f_sr(p, ev(-1, {0, 0, 0})), 1.0, 0.0);
        // the equatorial branch lies strictly between the cones
        REQUIRE(sr_sector(p, ev(0, {lm.c, 0, 0})) == SrSector::mixed, "(0,c) between cones");
        REQUIRE(sr_sector(p, ev(lm.s, {lm.z, 0, 0})) == SrSector::mixed, "(s,z) between cones");
    }
}

static void test_profile() {
    // apex of the forward branch: horizontal tangent, unit curvature for all g
    for (double g : {-1.9, 0.0, 0.7, 2.5}) {
        SrParams p = make_sr_params(g, 4);
        ProfileDerivs d = sr_profile_derivatives(p, ev(1, {0, 0, 0}));
        require_close("forward apex slope", d.first, 0.0, 0.0);
        require_close_rel("forward apex curvature", d.second, 1.0, 1e-15);
    }

    SrParams p1 = make_sr_params(1.0, 4);
    SrLandmarks lm1 = sr_landmarks(p1);
    // equatorial crossing (0, c): slope -1/g, curvature 1/(g^3 c)
    ProfileDerivs de = sr_profile_derivatives(p1, ev(0, {lm1.c, 0, 0}));
    require_close_rel("equator slope", de.first, -1.0, 1e-14);
    require_close_rel("equator curvature", de.second, 1.0 / lm1.c, 1e-13);
    // widest point (s, z): vertical tangent
    EXPECT_THROW(sr_profile_derivatives(p1, ev(lm1.s, {lm1.z, 0, 0})), std::domain_error,
                 "vertical tangent at the widest point");
    EXPECT_THROW(sr_profile_derivatives(p1, ev(5, {1, 0, 0})), std::domain_error,
                 "point off the unit level set");

    // forward branch: slope against numeric differentiation, convexity
    for (double g : {-1.2, 0.8}) {
        SrParams p = make_sr_params(g, 2);
        for (double wdir : {0.0, 0.3, 0.8}) {
            // stay below the forward cone slope 1/g_up_plus
            double rho0 = wdir * 0.9 / p.g_up_plus;
            EventVector v = hyperboloid_point(p, ev(1, {rho0}));
            ProfileDerivs d = sr_profile_derivatives(p, v);
            REQUIRE(d.second > 0.0, "forward branch must be convex");
            auto t_of_rho = [&](double rho) {
                auto ff = [&](double t) { return f_sr(p, ev(t, {rho})) - 1.0; };
                RootConfig rc;
                rc.tol = 1e-14;
                return newton_scalar(ff, v.t, rc);
            };
            require_close("sr profile slope vs fd", d.first,
                          diff_scalar(t_of_rho, rho_of(v)), 1e-6);
        }
    }
}

static void test_hyperboloid_point() {
    SrParams p = make_sr_params(1.9, 4);
    EventVector u = ev(2, {0.3, -0.1, 0.2});
    EventVector q = hyperboloid_point(p, u);
    require_close_rel("projected onto F=1", f_sr(p, q), 1.0, 1e-14);
    // direction is preserved
    require_close_rel("projection keeps direction", q.t * u.x[0], q.x[0] * u.t, 1e-15);
    // equatorial directions project too
    EventVector e = hyperboloid_point(p, ev(0, {1, 1, 1}));
    require_close_rel("equatorial projection", f_sr(p, e), 1.0, 1e-13);

    EXPECT_THROW(hyperboloid_point(p, ev(0, {0, 0, 0})), std::domain_error, "zero direction");
    EXPECT_THROW(hyperboloid_point(p, ev(p.g_up_plus, {1, 0, 0})), std::domain_error,
                 "no unit point on the forward cone");
    EXPECT_THROW(hyperboloid_point(p, ev(-p.g_plus, {1, 0, 0})), std::domain_error,
                 "no unit point on the backward cone");
}

static void test_signature() {
    // the Hessian of F^2/2 keeps the Lorentz signature (+,-,-,-) inside the
    // forward sector; at g = 0 it is exactly diag(1,-1,-1,-1)
    SrParams p0 = make_sr_params(0.0, 4);
    auto field0 = [&](const EventVector& q) { return 0.5 * sq(f_sr(p0, q)); };
    SymMatrix m0 = hessian_fd(field0, ev(2, {0.5, 0.3, -0.2}));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double want = i == j ? (i == 0 ? 1.0 : -1.0) : 0.0;
            require_close("Minkowski Hessian", m0.at(i, j), want, 1e-6);
        }

    std::mt19937_64 rng(53);
    auto u = [&] { return (double)(rng() >> 11) * 0x1.0p-53; };
    for (double g : {-1.9, 0.9, 2.5}) {
        SrParams p = make_sr_params(g, 4);
        auto field = [&](const EventVector& q) { return 0.5 * sq(f_sr(p, q)); };
        int done = 0;
        for (int i = 0; done < 12 && i < 2000; ++i) {
            EventVector v = ev(0.5 + 2.0 * u(), {u(), u(), u()});
            // stay clear of the forward cone so the FD stencil is one-sided
            if (sr_factor_a(p, v) < 0.2 * p.h || sr_sector(p, v) != SrSector::forward)
                continue;
            std::vector<double> eig = sym_eigenvalues(hessian_fd(field, v));
            int neg = 0, pos = 0;
            for (double e : eig) {
                if (e < -1e-6) ++neg;
                if (e > 1e-6) ++pos;
            }
            REQUIRE(neg == 3 && pos == 1, "Lorentz signature in the forward sector");
            ++done;
        }
        REQUIRE(done == 12, "sampled enough forward points");
    }
}

int main() {
    test_params();
    test_sectors();
    test_f_sr();
    test_h_sr();
    test_momenta();
    test_duality();
    test_landmarks();
    test_profile();
    test_hyperboloid_point();
    test_signature();
    return test_done("sr_metric");
}
