// Command-line surface of the finsleroid library: point evaluation of the
// metric family, geometry export of the unit level sets, landmark sweeps,
// and the verification battery. Exit codes: 0 success, 1 verification
// failure, 2 usage or domain error.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "finsleroid/export.hpp"
#include "finsleroid/hamiltonian.hpp"
#include "finsleroid/metric_tensor.hpp"
#include "finsleroid/numerics.hpp"
#include "finsleroid/pd_metric.hpp"
#include "finsleroid/sr_metric.hpp"
#include "finsleroid/verify.hpp"

namespace {

using namespace finsleroid;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_reals(const std::string& text, const char* what) {
    std::vector<double> vals;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        bool ok = !token.empty();
        if (ok) {
            try {
                v = std::stod(token, &pos);
            } catch (const std::exception&) {
                ok = false;
            }
        }
        while (ok && pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos])))
            ++pos;
        if (!ok || pos != token.size())
            throw std::invalid_argument(std::string(what) + ": cannot parse '" + token +
                                        "' as a real number");
        vals.push_back(v);
    }
    if (vals.empty())
        throw std::invalid_argument(std::string(what) + ": empty value list");
    return vals;
}

EventVector event_from(const std::vector<double>& vals) {
    EventVector v;
    v.t = vals.front();
    v.x.assign(vals.begin() + 1, vals.end());
    return v;
}

CoVector covector_from(const std::vector<double>& vals) {
    CoVector c;
    c.t = vals.front();
    c.xi.assign(vals.begin() + 1, vals.end());
    return c;
}

void print_components(const char* label, double t, const std::vector<double>& rest) {
    std::cout << label << ": " << fmt17(t);
    for (double c : rest) std::cout << " " << fmt17(c);
    std::cout << "\n";
}

void print_values(const char* label, const std::vector<double>& vals) {
    std::cout << label << ":";
    for (double c : vals) std::cout << " " << fmt17(c);
    std::cout << "\n";
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream ofs(path);
    if (!ofs) throw std::runtime_error("cannot open for writing: " + path);
    fn(ofs);
    ofs.flush();
    if (!ofs) throw std::runtime_error("write failed: " + path);
}

struct EvalArgs {
    std::string family = "pd";
    double g = 0.0;
    int dim = 4;
    std::string point;
    bool dual = false;
    bool momenta = false;
    bool eigen = false;
};

void cmd_eval(const EvalArgs& a) {
    std::vector<double> vals = parse_reals(a.point, "--point");
    if (a.family == "pd") {
        PdParams p = make_pd_params(a.g, a.dim);
        if (a.dual) {
            CoVector c = covector_from(vals);
            std::cout << fmt17(hamiltonian_h(p, c)) << "\n";
            if (a.momenta) {
                EventVector m = hamiltonian_momenta(p, c);
                print_components("momenta", m.t, m.x);
            }
            if (a.eigen) print_values("eigenvalues", sym_eigenvalues(co_metric_tensor(p, c)));
        } else {
            EventVector v = event_from(vals);
            std::cout << fmt17(metric_k(p, v)) << "\n";
            if (a.momenta) {
                CoVector m = covariant_momenta(p, v);
                print_components("momenta", m.t, m.xi);
            }
            if (a.eigen) print_values("eigenvalues", sym_eigenvalues(metric_tensor(p, v)));
        }
        return;
    }
    SrParams p = make_sr_params(a.g, a.dim);
    DiffConfig cfg;
    if (a.dual) {
        CoVector c = covector_from(vals);
        std::cout << fmt17(h_sr(p, c)) << "\n";
        // No closed form is exposed for the dual-side gradient; fall back to
        // finite differences of half the squared metric.
        ScalarField half_sq = [&p](const EventVector& e) {
            CoVector cc{e.t, e.x};
            double hv = h_sr(p, cc);
            return 0.5 * hv * hv;
        };
        if (a.momenta) {
            CoVector grad = grad_fd(half_sq, as_event(c), cfg);
            print_components("momenta", grad.t, grad.xi);
        }
        if (a.eigen)
            print_values("eigenvalues", sym_eigenvalues(hessian_fd(half_sq, as_event(c), cfg)));
    } else {
        EventVector v = event_from(vals);
        std::cout << fmt17(f_sr(p, v)) << "\n";
        if (a.momenta) {
            CoVector m = sr_covariant_momenta(p, v);
            print_components("momenta", m.t, m.xi);
        }
        if (a.eigen) {
            ScalarField half_sq = [&p](const EventVector& e) {
                double fv = f_sr(p, e);
                return 0.5 * fv * fv;
            };
            print_values("eigenvalues", sym_eigenvalues(hessian_fd(half_sq, v, cfg)));
        }
    }
}

SurfaceFamily pick_surface(const std::string& family, bool dual) {
    if (family == "pd")
        return dual ? SurfaceFamily::pd_figuratrix : SurfaceFamily::pd_indicatrix;
    return dual ? SurfaceFamily::sr_co_hyperboloid : SurfaceFamily::sr_hyperboloid;
}

int cmd_verify(std::vector<double> grid, std::uint64_t seed, int dim,
               const std::string& family_filter, const std::string& out_path) {
    if (grid.empty()) grid = default_g_grid();
    if (family_filter != "sr") {
        // Every non-sr scope runs checks that build positive-definite
        // parameters, so the grid must respect their domain up front.
        for (double g : grid)
            if (!(std::fabs(g) < 2.0))
                throw std::domain_error(
                    "verify: grid value " + fmt17(g) +
                    " lies outside the positive-definite parameter interval (-2, 2); "
                    "use --family sr to sweep beyond it");
    }

    std::vector<VerificationReport> reports = run_all(grid, seed, dim);
    if (!family_filter.empty()) {
        CheckFamily want = CheckFamily::PD;
        if (family_filter == "sr") want = CheckFamily::SR;
        else if (family_filter == "map") want = CheckFamily::MAP;
        else if (family_filter == "dual") want = CheckFamily::DUAL;
        std::erase_if(reports, [want](const VerificationReport& r) { return r.family != want; });
    }

    std::string json = report_json(reports);
    with_output(out_path, [&json](std::ostream& os) { os << json; });
    std::cerr << report_text(reports, grid, seed, dim);
    return all_passed(reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "finsleroid: evaluate the anisotropic metric family, export unit-surface "
        "geometry, and run the verification battery"};
    app.require_subcommand(1);

    EvalArgs ev;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate the metric at one point");
    eval_cmd->add_option("--family", ev.family, "metric family")
        ->check(CLI::IsMember({"pd", "sr"}));
    eval_cmd->add_option("--g", ev.g, "anisotropy parameter");
    eval_cmd->add_option("--dim", ev.dim, "total dimension, T axis included")
        ->check(CLI::Range(2, 8));
    eval_cmd->add_option("--point", ev.point, "comma-separated components, T first")->required();
    eval_cmd->add_flag("--dual", ev.dual, "treat the point as a covector and evaluate the dual metric");
    eval_cmd->add_flag("--momenta", ev.momenta, "also print the gradient of half the squared metric");
    eval_cmd->add_flag("--eigen", ev.eigen, "also print the metric tensor eigenvalues");

    std::string pr_family = "pd", pr_out;
    double pr_g = 0.0;
    int pr_samples = 65;
    bool pr_dual = false;
    CLI::App* profile_cmd = app.add_subcommand("profile", "trace a unit level set into CSV");
    profile_cmd->add_option("--family", pr_family, "metric family")
        ->check(CLI::IsMember({"pd", "sr"}));
    profile_cmd->add_option("--g", pr_g, "anisotropy parameter");
    profile_cmd->add_option("--samples", pr_samples, "profile rows")->check(CLI::Range(3, 1000000));
    profile_cmd->add_flag("--dual", pr_dual, "trace the dual surface");
    profile_cmd->add_option("--out", pr_out, "output path (stdout when omitted)");

    std::string me_family = "pd", me_out;
    double me_g = 0.0;
    int me_samples = 65, me_resolution = 32;
    bool me_dual = false;
    CLI::App* mesh_cmd = app.add_subcommand("mesh", "export a surface-of-revolution OBJ mesh");
    mesh_cmd->add_option("--family", me_family, "metric family (only pd surfaces are closed)")
        ->check(CLI::IsMember({"pd", "sr"}));
    mesh_cmd->add_option("--g", me_g, "anisotropy parameter");
    mesh_cmd->add_option("--samples", me_samples, "profile rows")->check(CLI::Range(3, 100000));
    mesh_cmd->add_option("--resolution", me_resolution, "steps around the axis")
        ->check(CLI::Range(8, 100000));
    mesh_cmd->add_flag("--dual", me_dual, "mesh the dual surface");
    mesh_cmd->add_option("--out", me_out, "output path (stdout when omitted)");

    std::string sw_family = "pd", sw_out;
    double sw_min = 0.0, sw_max = 0.0;
    int sw_steps = 41;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "tabulate landmark quantities over g");
    sweep_cmd->add_option("--family", sw_family, "metric family")
        ->check(CLI::IsMember({"pd", "sr"}));
    sweep_cmd->add_option("--g-min", sw_min, "range start")->required();
    sweep_cmd->add_option("--g-max", sw_max, "range end")->required();
    sweep_cmd->add_option("--steps", sw_steps, "rows, endpoints included")
        ->check(CLI::Range(2, 1000000));
    sweep_cmd->add_option("--out", sw_out, "output path (stdout when omitted)");

    std::vector<double> vf_grid;
    std::uint64_t vf_seed = 42;
    int vf_dim = 4;
    std::string vf_family, vf_out;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the verification battery and emit the JSON report");
    verify_cmd->add_option("--grid", vf_grid, "comma-separated g values (default: built-in grid)")
        ->delimiter(',');
    verify_cmd->add_option("--seed", vf_seed, "sample seed");
    verify_cmd->add_option("--dim", vf_dim, "total dimension")->check(CLI::Range(2, 8));
    verify_cmd->add_option("--family", vf_family, "restrict to one check family")
        ->check(CLI::IsMember({"pd", "sr", "map", "dual"}));
    verify_cmd->add_option("--out", vf_out, "JSON report path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (eval_cmd->parsed()) {
            cmd_eval(ev);
        } else if (profile_cmd->parsed()) {
            ProfileCurve curve = trace_profile(pick_surface(pr_family, pr_dual), pr_g, pr_samples);
            with_output(pr_out, [&curve](std::ostream& os) { write_profile_csv(curve, os); });
        } else if (mesh_cmd->parsed()) {
            if (me_family != "pd")
                throw std::domain_error(
                    "mesh: only the closed positive-definite surfaces revolve into a "
                    "watertight mesh; the cone-bounded family is unbounded");
            ProfileCurve curve = trace_profile(pick_surface(me_family, me_dual), me_g, me_samples);
            RevolutionMesh mesh = revolve_profile(curve, me_resolution);
            with_output(me_out, [&mesh](std::ostream& os) { write_obj(mesh, os); });
        } else if (sweep_cmd->parsed()) {
            if (sw_family == "pd") {
                std::vector<PdSweepRow> rows = pd_sweep(sw_min, sw_max, sw_steps);
                with_output(sw_out, [&rows](std::ostream& os) { write_pd_sweep_csv(rows, os); });
            } else {
                std::vector<SrSweepRow> rows = sr_sweep(sw_min, sw_max, sw_steps);
                with_output(sw_out, [&rows](std::ostream& os) { write_sr_sweep_csv(rows, os); });
            }
        } else if (verify_cmd->parsed()) {
            return cmd_verify(vf_grid, vf_seed, vf_dim, vf_family, vf_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
