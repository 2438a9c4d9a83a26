#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finsleroid/types.hpp"

// Verification battery: every structural identity of the metric family is
// registered as a named check that samples a g-grid and a deterministic
// direction cloud, measures the worst residual, and reports it against a
// tolerance. The battery is the machine-checkable form of the library's
// claims; the CLI `verify` command and the acceptance harness both drive it.

namespace finsleroid {

enum class CheckFamily { PD, SR, MAP, DUAL };

const char* family_name(CheckFamily f);

struct VerificationReport {
    std::string name;
    CheckFamily family = CheckFamily::PD;
    long samples = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;  // pass == (max_residual <= tolerance)
    std::string worst_case_input;
};

// The grid used by the default battery and the CLI when none is given.
std::vector<double> default_g_grid();

// Names of every registered check, sorted; the set is fixed at compile time.
std::vector<std::string> registered_check_names();

// Deterministic direction sample: the 2*dim axis directions first, then
// `count` pseudo-random unit vectors, every fourth of which is projected
// onto the equator plane T = 0 so the equatorial ring is always exercised.
// All results have Euclidean norm 1 to within rounding.
std::vector<EventVector> sample_directions(int dim, int count, std::uint64_t seed);

// Runs every registered check over the grid. Deterministic for fixed
// (g_grid, seed, dim); a check that throws is converted into a failed
// report carrying the diagnostic, never aborting the battery. Reports are
// sorted by check name.
std::vector<VerificationReport> run_all(const std::vector<double>& g_grid,
                                        std::uint64_t seed, int dim);

// JSON document: a top-level array of objects with keys name, family,
// samples, max_residual, tolerance, pass, worst_case_input.
std::string report_json(const std::vector<VerificationReport>& reports);

// Plain-text summary table, one row per check, with the run configuration
// and the singular-region exclusion radius in the header.
std::string report_text(const std::vector<VerificationReport>& reports,
                        const std::vector<double>& g_grid, std::uint64_t seed, int dim);

inline bool all_passed(const std::vector<VerificationReport>& reports) {
    for (const VerificationReport& r : reports)
        if (!r.pass) return false;
    return !reports.empty();
}

} // namespace finsleroid
