#include "finsleroid/export.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "finsleroid/hamiltonian.hpp"
#include "finsleroid/pd_metric.hpp"
#include "finsleroid/sr_metric.hpp"

namespace finsleroid {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Radius beyond which cone-bounded profiles are not traced; keeps the CSV
// range plot-friendly even when the parameter is small and the branches
// stay well conditioned far out.
constexpr double kSrRadiusCap = 25.0;

// A traced row is kept only if re-evaluating the unit equation at it cannot
// lose more than this much precision to cancellation in the cone factors.
constexpr double kSrEvalBudget = 1e-11;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Negative zero prints as "-0"; fold it to plain zero in table output.
double csv_canon(double v) { return v == 0.0 ? 0.0 : v; }

struct PolarRow {
    double theta;  // angle from the +T axis, in [0, pi]
    double rho;
    double t;
    bool forced;   // landmark rows win over grid rows on collision
};

// Sorts by angle and drops grid rows that collide with a landmark row.
std::vector<ProfileSample> order_rows(std::vector<PolarRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const PolarRow& a, const PolarRow& b) { return a.theta < b.theta; });
    std::vector<PolarRow> kept;
    kept.reserve(rows.size());
    for (const PolarRow& row : rows) {
        if (!kept.empty() && std::fabs(row.theta - kept.back().theta) < 1e-9) {
            if (row.forced && !kept.back().forced) kept.back() = row;
            continue;
        }
        kept.push_back(row);
    }
    std::vector<ProfileSample> out;
    out.reserve(kept.size());
    for (const PolarRow& row : kept) out.push_back({row.rho, row.t});
    return out;
}

ProfileCurve trace_pd(SurfaceFamily family, double g_user, int n) {
    // The dual family's unit set is the primal one at the reflected
    // parameter, so both traces share this routine.
    double g_eff = (family == SurfaceFamily::pd_figuratrix) ? -g_user : g_user;
    PdParams p = make_pd_params(g_eff, 2);
    PdLandmarks lm = pd_landmarks(p);

    ProfileCurve curve;
    curve.family = family;
    curve.g = g_user;
    curve.samples.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            curve.samples.push_back({0.0, lm.t2});
        } else if (i == n - 1) {
            curve.samples.push_back({0.0, lm.t1});
        } else if (2 * i == n - 1) {
            // The equator radius is exactly 1 for every parameter value.
            curve.samples.push_back({1.0, 0.0});
        } else {
            double theta = kPi * i / (n - 1);
            EventVector u{std::cos(theta), {std::sin(theta)}};
            double s = 1.0 / metric_k(p, u);
            curve.samples.push_back({s * u.x[0], s * u.t});
        }
    }

    curve.comments.push_back(std::string("family: ") + surface_label(family));
    curve.comments.push_back("g: " + fmt17(g_user));
    curve.comments.push_back("unit level set profile in the (rho, t) half-plane, rho = |spatial part|");
    curve.comments.push_back("t-intercepts: " + fmt17(lm.t1) + " and " + fmt17(lm.t2) +
                             "; widest point (rho, t) = (" + fmt17(lm.k) + ", " + fmt17(lm.f) + ")");
    return curve;
}

// Exact branch parametrizations of the cone-bounded unit level set. With
// a = t + g_minus*rho and b = t + g_plus*rho, points with |a| = e^(G_minus*u)
// and |b| = e^(G_plus*u) satisfy the unit equation identically, and the
// sums below reconstruct (rho, t) without cancellation.
struct SrBranchPoint {
    double rho;
    double t;
};

SrBranchPoint sr_forward_point(const SrParams& p, double u) {
    double ea = std::exp(p.G_minus * u);   // factor a, both positive
    double eb = std::exp(p.G_plus * u);    // factor b
    double inv2h = 0.5 / p.h;
    return {(eb - ea) * inv2h, (p.g_plus * ea + p.g_up_plus * eb) * inv2h};
}

SrBranchPoint sr_mixed_point(const SrParams& p, double u) {
    double ea = std::exp(p.G_minus * u);   // -factor a, the factor is negative here
    double eb = std::exp(p.G_plus * u);    // factor b
    double inv2h = 0.5 / p.h;
    return {(eb + ea) * inv2h, (p.g_up_plus * eb - p.g_plus * ea) * inv2h};
}

SrBranchPoint sr_backward_point(const SrParams& p, double u) {
    double ea = std::exp(p.G_minus * u);   // -factor a
    double eb = std::exp(p.G_plus * u);    // -factor b
    double inv2h = 0.5 / p.h;
    return {(ea - eb) * inv2h, -(p.g_plus * ea + p.g_up_plus * eb) * inv2h};
}

// Conditioning guard: the relative precision lost when the unit equation is
// re-evaluated at (rho, t) through the cone factors.
bool sr_row_ok(const SrParams& p, const SrBranchPoint& pt) {
    if (!std::isfinite(pt.rho) || !std::isfinite(pt.t)) return false;
    if (std::max(std::fabs(pt.t), pt.rho) > kSrRadiusCap) return false;
    double a = pt.t + p.g_minus * pt.rho;
    double b = pt.t + p.g_plus * pt.rho;
    if (a == 0.0 || b == 0.0) return false;
    double cond = 0.5 * p.G_plus * (std::fabs(pt.t) + p.g_up_plus * pt.rho) / std::fabs(a) -
                  0.5 * p.G_minus * (std::fabs(pt.t) + p.g_plus * pt.rho) / std::fabs(b);
    return cond * DBL_EPSILON <= kSrEvalBudget;
}

// Largest |u| in the given direction whose branch point is still tractable.
template <typename Gen>
double sr_branch_reach(const SrParams& p, const Gen& gen, double direction) {
    double lo = 0.0;
    double hi = direction * 1e-3;
    int doublings = 0;
    while (sr_row_ok(p, gen(hi)) && doublings < 60) {
        lo = hi;
        hi *= 2.0;
        ++doublings;
    }
    if (doublings >= 60) return lo;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if (sr_row_ok(p, gen(mid)))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

ProfileCurve trace_sr(SurfaceFamily family, double g_user, int n) {
    double g_eff = (family == SurfaceFamily::sr_co_hyperboloid) ? -g_user : g_user;
    SrParams p = make_sr_params(g_eff, 2);
    SrLandmarks lm = sr_landmarks(p);

    std::vector<PolarRow> rows;
    rows.reserve(static_cast<std::size_t>(n) + 4);
    auto push = [&rows](const SrBranchPoint& pt, bool forced) {
        rows.push_back({std::atan2(pt.rho, pt.t), pt.rho, pt.t, forced});
    };

    // Landmark rows carry the exact closed-form coordinates.
    push({0.0, 1.0}, true);
    if (n > 3) push({lm.z, lm.s}, true);
    push({lm.c, 0.0}, true);
    push({0.0, -1.0}, true);
    int forced_count = n > 3 ? 4 : 3;

    int extra = n - forced_count;
    int n_fwd = extra / 4;
    int n_back = extra / 4;
    int n_mid = extra - n_fwd - n_back;

    auto fwd = [&p](double u) { return sr_forward_point(p, u); };
    auto mid = [&p](double u) { return sr_mixed_point(p, u); };
    auto back = [&p](double u) { return sr_backward_point(p, u); };

    if (n_fwd > 0) {
        double reach = sr_branch_reach(p, fwd, +1.0);
        for (int i = 1; i <= n_fwd; ++i) push(fwd(reach * i / n_fwd), false);
    }
    if (n_mid > 0) {
        double hi = sr_branch_reach(p, mid, +1.0);
        double lo = sr_branch_reach(p, mid, -1.0);
        if (n_mid == 1) {
            push(mid(lo), false);
        } else {
            for (int i = 0; i < n_mid; ++i) push(mid(lo + (hi - lo) * i / (n_mid - 1)), false);
        }
    }
    if (n_back > 0) {
        double reach = sr_branch_reach(p, back, -1.0);
        for (int i = 1; i <= n_back; ++i) push(back(reach * i / n_back), false);
    }

    ProfileCurve curve;
    curve.family = family;
    curve.g = g_user;
    curve.samples = order_rows(rows);

    curve.comments.push_back(std::string("family: ") + surface_label(family));
    curve.comments.push_back("g: " + fmt17(g_user));
    curve.comments.push_back(
        "branches: forward through (0, 1), equatorial between the cones, backward through (0, -1)");
    curve.comments.push_back("cone slopes t/rho: " + fmt17(p.g_up_plus) + " and " + fmt17(-p.g_plus) +
                             "; rows too close to a cone or beyond radius " + fmt17(kSrRadiusCap) +
                             " are omitted");
    curve.comments.push_back("equator radius: " + fmt17(lm.c) + "; widest point (rho, t) = (" +
                             fmt17(lm.z) + ", " + fmt17(lm.s) + ")");
    return curve;
}

}  // namespace

const char* surface_label(SurfaceFamily family) {
    switch (family) {
        case SurfaceFamily::pd_indicatrix: return "pd-indicatrix";
        case SurfaceFamily::pd_figuratrix: return "pd-figuratrix";
        case SurfaceFamily::sr_hyperboloid: return "sr-hyperboloid";
        case SurfaceFamily::sr_co_hyperboloid: return "sr-co-hyperboloid";
    }
    return "unknown";
}

ProfileCurve trace_profile(SurfaceFamily family, double g, int samples) {
    if (samples < 3)
        throw std::domain_error("trace_profile: at least 3 samples are required");
    switch (family) {
        case SurfaceFamily::pd_indicatrix:
        case SurfaceFamily::pd_figuratrix:
            return trace_pd(family, g, samples);
        case SurfaceFamily::sr_hyperboloid:
        case SurfaceFamily::sr_co_hyperboloid:
            return trace_sr(family, g, samples);
    }
    throw std::domain_error("trace_profile: unknown family");
}

double profile_unit_value(SurfaceFamily family, double g, double rho, double t) {
    switch (family) {
        case SurfaceFamily::pd_indicatrix:
            return metric_k(make_pd_params(g, 2), EventVector{t, {rho}});
        case SurfaceFamily::pd_figuratrix:
            return hamiltonian_h(make_pd_params(g, 2), CoVector{t, {rho}});
        case SurfaceFamily::sr_hyperboloid:
            return f_sr(make_sr_params(g, 2), EventVector{t, {rho}});
        case SurfaceFamily::sr_co_hyperboloid:
            return h_sr(make_sr_params(g, 2), CoVector{t, {rho}});
    }
    throw std::domain_error("profile_unit_value: unknown family");
}

void write_profile_csv(const ProfileCurve& curve, std::ostream& os) {
    for (const std::string& line : curve.comments) os << "# " << line << "\n";
    os << "rho,t\n";
    for (const ProfileSample& s : curve.samples)
        os << fmt17(csv_canon(s.rho)) << "," << fmt17(csv_canon(s.t)) << "\n";
}

RevolutionMesh revolve_profile(const ProfileCurve& curve, int resolution) {
    if (resolution < 3)
        throw std::domain_error("revolve_profile: at least 3 steps around the axis are required");
    const std::vector<ProfileSample>& s = curve.samples;
    int n = static_cast<int>(s.size());
    if (n < 3 || s.front().rho != 0.0 || s.back().rho != 0.0)
        throw std::domain_error(
            "revolve_profile: profile must start and end on the axis; "
            "only the closed positive-definite families revolve into a watertight surface");
    for (int i = 1; i + 1 < n; ++i)
        if (!(s[i].rho > 0.0))
            throw std::domain_error("revolve_profile: interior profile row lies on the axis");

    int m = resolution;
    RevolutionMesh mesh;
    mesh.vertices.reserve(2 + static_cast<std::size_t>(n - 2) * m);
    mesh.faces.reserve(2 * static_cast<std::size_t>(m) * (n - 2));

    mesh.vertices.push_back({0.0, 0.0, s.front().t});
    for (int i = 1; i + 1 < n; ++i) {
        for (int k = 0; k < m; ++k) {
            double phi = 2.0 * kPi * k / m;
            mesh.vertices.push_back({s[i].rho * std::cos(phi), s[i].rho * std::sin(phi), s[i].t});
        }
    }
    mesh.vertices.push_back({0.0, 0.0, s.back().t});

    int bottom = static_cast<int>(mesh.vertices.size()) - 1;
    auto ring = [m](int i, int k) { return 1 + (i - 1) * m + (k % m); };

    // Outward winding: rings run counterclockwise seen from +t, rows descend.
    for (int k = 0; k < m; ++k)
        mesh.faces.push_back({0, ring(1, k), ring(1, k + 1)});
    for (int i = 1; i + 2 < n; ++i) {
        for (int k = 0; k < m; ++k) {
            mesh.faces.push_back({ring(i, k), ring(i + 1, k), ring(i + 1, k + 1)});
            mesh.faces.push_back({ring(i, k), ring(i + 1, k + 1), ring(i, k + 1)});
        }
    }
    for (int k = 0; k < m; ++k)
        mesh.faces.push_back({bottom, ring(n - 2, k + 1), ring(n - 2, k)});

    return mesh;
}

void write_obj(const RevolutionMesh& mesh, std::ostream& os) {
    for (const std::array<double, 3>& v : mesh.vertices)
        os << "v " << fmt17(csv_canon(v[0])) << " " << fmt17(csv_canon(v[1])) << " "
           << fmt17(csv_canon(v[2])) << "\n";
    for (const std::array<int, 3>& f : mesh.faces)
        os << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
}

MeshStats mesh_stats(const RevolutionMesh& mesh) {
    MeshStats st;
    st.vertex_count = static_cast<long>(mesh.vertices.size());
    st.face_count = static_cast<long>(mesh.faces.size());

    std::map<std::pair<int, int>, int> edge_uses;
    for (const std::array<int, 3>& f : mesh.faces) {
        for (int e = 0; e < 3; ++e) {
            int a = f[e], b = f[(e + 1) % 3];
            edge_uses[{std::min(a, b), std::max(a, b)}] += 1;
        }
    }
    st.edge_count = static_cast<long>(edge_uses.size());
    st.watertight = !edge_uses.empty();
    for (const auto& [edge, uses] : edge_uses)
        if (uses != 2) st.watertight = false;
    st.euler_characteristic = st.vertex_count - st.edge_count + st.face_count;

    if (!mesh.vertices.empty()) {
        st.t_min = st.t_max = mesh.vertices.front()[2];
        for (const std::array<double, 3>& v : mesh.vertices) {
            st.t_min = std::min(st.t_min, v[2]);
            st.t_max = std::max(st.t_max, v[2]);
        }
    }
    return st;
}

namespace {

std::vector<double> sweep_grid(double g_min, double g_max, int steps, const char* where) {
    if (steps < 2) throw std::domain_error(std::string(where) + ": at least 2 steps are required");
    if (!(g_min <= g_max))
        throw std::domain_error(std::string(where) + ": empty parameter range");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) grid.push_back(g_min + (g_max - g_min) * i / (steps - 1));
    return grid;
}

}  // namespace

std::vector<PdSweepRow> pd_sweep(double g_min, double g_max, int steps) {
    const double bound = 2.0 - 1e-3;
    double lo = std::max(g_min, -bound);
    double hi = std::min(g_max, bound);
    if (!(lo <= hi))
        throw std::domain_error("pd_sweep: range lies outside the parameter interval (-2, 2)");
    std::vector<PdSweepRow> rows;
    for (double g : sweep_grid(lo, hi, steps, "pd_sweep")) {
        PdLandmarks lm = pd_landmarks(make_pd_params(g, 2));
        rows.push_back({g, lm.t1, lm.t2, lm.f, lm.k});
    }
    return rows;
}

std::vector<SrSweepRow> sr_sweep(double g_min, double g_max, int steps) {
    std::vector<SrSweepRow> rows;
    for (double g : sweep_grid(g_min, g_max, steps, "sr_sweep")) {
        SrLandmarks lm = sr_landmarks(make_sr_params(g, 2));
        rows.push_back({g, lm.c, lm.z, lm.s});
    }
    return rows;
}

void write_pd_sweep_csv(const std::vector<PdSweepRow>& rows, std::ostream& os) {
    os << "# positive-definite landmark sweep: t-intercepts t1, t2; widest point (k, f)\n";
    os << "g,t1,t2,f,k\n";
    for (const PdSweepRow& r : rows)
        os << fmt17(csv_canon(r.g)) << "," << fmt17(csv_canon(r.t1)) << "," << fmt17(csv_canon(r.t2))
           << "," << fmt17(csv_canon(r.f)) << "," << fmt17(csv_canon(r.k)) << "\n";
}

void write_sr_sweep_csv(const std::vector<SrSweepRow>& rows, std::ostream& os) {
    os << "# special-relativistic landmark sweep: equator radius c, widest point (z, s)\n";
    os << "g,c,z,s\n";
    for (const SrSweepRow& r : rows)
        os << fmt17(csv_canon(r.g)) << "," << fmt17(csv_canon(r.c)) << "," << fmt17(csv_canon(r.z))
           << "," << fmt17(csv_canon(r.s)) << "\n";
}

}  // namespace finsleroid
