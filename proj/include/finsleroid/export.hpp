#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "finsleroid/types.hpp"

// Geometry export: planar profiles of the unit level sets, surfaces of
// revolution built from them, and landmark tables swept over the parameter.
// All text output uses 17 significant digits so files round-trip exactly.

namespace finsleroid {

// Which unit level set a profile or mesh describes. The two dual families
// are the unit sets of the Hamiltonian functions; they coincide with the
// primal families at the reflected parameter.
enum class SurfaceFamily {
    pd_indicatrix,
    pd_figuratrix,
    sr_hyperboloid,
    sr_co_hyperboloid,
};

const char* surface_label(SurfaceFamily family);

struct ProfileSample {
    double rho;  // spatial radius, always >= 0
    double t;    // T coordinate
};

// Planar trace of a unit level set in the (rho, t) half-plane, ordered by
// polar angle from the +T axis. `comments` carry the run configuration and
// are written as '#'-prefixed lines ahead of the CSV header.
struct ProfileCurve {
    SurfaceFamily family = SurfaceFamily::pd_indicatrix;
    double g = 0.0;
    std::vector<ProfileSample> samples;
    std::vector<std::string> comments;
};

// Traces the unit level set of the chosen family. Every emitted sample
// satisfies the defining unit equation to 1e-10 when re-evaluated.
//
// Closed families (pd_*) produce exactly `samples` rows on a uniform polar
// grid; the axis endpoints and, for an odd count, the equator row carry the
// exact landmark coordinates. Cone-bounded families (sr_*) distribute rows
// over the three branches, always include the landmark rows, and omit rows
// so close to a cone that re-evaluating the unit equation would lose the
// guaranteed precision; their row count may differ slightly from the
// request. Throws std::domain_error for samples < 3 or a parameter outside
// the family's domain.
ProfileCurve trace_profile(SurfaceFamily family, double g, int samples);

// Re-evaluates the family's defining metric function at a profile point;
// rows of a traced curve give 1 to the advertised tolerance.
double profile_unit_value(SurfaceFamily family, double g, double rho, double t);

void write_profile_csv(const ProfileCurve& curve, std::ostream& os);

// Triangle mesh of the surface of revolution of a closed profile about the
// T axis. Vertices are (x, y, t) with the revolution axis third; faces are
// zero-based index triples wound with outward normals.
struct RevolutionMesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> faces;
};

// Revolves a closed axis-to-axis profile (first and last samples on the
// axis, all interior samples off it) with `resolution` steps around the
// axis. Pole fans close the two axis points, so the result is watertight
// with Euler characteristic 2. Throws std::domain_error for resolution < 3
// or a profile that does not close on the axis (the cone-bounded families).
RevolutionMesh revolve_profile(const ProfileCurve& curve, int resolution);

void write_obj(const RevolutionMesh& mesh, std::ostream& os);

struct MeshStats {
    long vertex_count = 0;
    long edge_count = 0;
    long face_count = 0;
    long euler_characteristic = 0;
    bool watertight = false;  // every edge borders exactly two faces
    double t_min = 0.0;       // extent along the revolution axis
    double t_max = 0.0;
};

MeshStats mesh_stats(const RevolutionMesh& mesh);

// Landmark tables over a parameter range, uniform in g, endpoints included.
struct PdSweepRow {
    double g, t1, t2, f, k;
};
struct SrSweepRow {
    double g, c, z, s;
};

// The positive-definite sweep clips the requested range to |g| <= 2 - 1e-3;
// a range entirely outside the parameter interval is a domain error, as is
// steps < 2. The special-relativistic sweep accepts any finite range.
std::vector<PdSweepRow> pd_sweep(double g_min, double g_max, int steps);
std::vector<SrSweepRow> sr_sweep(double g_min, double g_max, int steps);

void write_pd_sweep_csv(const std::vector<PdSweepRow>& rows, std::ostream& os);
void write_sr_sweep_csv(const std::vector<SrSweepRow>& rows, std::ostream& os);

}  // namespace finsleroid
