// Command-line front end.  Everything goes through the shared-library C API.

#include "tfd/capi.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace {

int fail(tfd_status st) {
    std::fprintf(stderr, "error: %s\n", tfd_last_error());
    return static_cast<int>(st);
}

std::vector<int> parse_steps(const std::string& csv) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stoi(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

std::string outpath(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

struct ProblemHandle {
    tfd_problem* p = nullptr;
    ~ProblemHandle() { tfd_problem_free(p); }
};

tfd_status load_problem(const std::string& config, const std::string& preset, int steps, int modes,
                        double alpha, const std::string& method, ProblemHandle& h) {
    tfd_status st;
    if (!config.empty()) st = tfd_problem_parse_file(config.c_str(), &h.p);
    else st = tfd_problem_preset(preset.c_str(), &h.p);
    if (st != TFD_OK) return st;
    if ((st = tfd_problem_set_steps(h.p, steps)) != TFD_OK) return st;
    if ((st = tfd_problem_set_modes(h.p, modes)) != TFD_OK) return st;
    if ((st = tfd_problem_set_alpha(h.p, alpha)) != TFD_OK) return st;
    if (!method.empty() && (st = tfd_problem_set_method(h.p, method.c_str())) != TFD_OK) return st;
    return TFD_OK;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-fractional diffusion toolkit"};
    app.require_subcommand(1);

    // ---- solve -------------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "solve a problem config, emit solution CSV and trace");
    std::string s_config, s_out = ".", s_method, s_preset = "heat";
    int s_steps = 0, s_modes = 0;
    double s_alpha = 0.0;
    solve->add_option("--config", s_config, "problem config file");
    solve->add_option("--preset", s_preset, "built-in problem when no config is given");
    solve->add_option("--out", s_out, "output directory");
    solve->add_option("--steps", s_steps, "override time steps");
    solve->add_option("--modes", s_modes, "override mode count");
    solve->add_option("--alpha", s_alpha, "override fractional order");
    solve->add_option("--method", s_method, "auto|picard|l1|both");

    // ---- convergence-study ---------------------------------------------------
    auto* study = app.add_subcommand("convergence-study",
                                     "manufactured-solution error table across step counts");
    std::string c_config, c_exact = "1 + t^2", c_steps = "128,256,512,1024", c_out = ".";
    int c_mode = 1;
    double c_alpha = 0.0;
    study->add_option("--config", c_config, "problem config file (defaults to the heat preset)");
    study->add_option("--exact", c_exact, "g(t) of the exact solution g(t)*phi_k");
    study->add_option("--mode", c_mode, "spatial mode k of the exact solution");
    study->add_option("--N", c_steps, "comma-separated step counts");
    study->add_option("--alpha", c_alpha, "override fractional order");
    study->add_option("--out", c_out, "output directory");

    // ---- verify-identities -----------------------------------------------------
    auto* verify = app.add_subcommand("verify-identities",
                                      "identity residual refinement over named profiles");
    double v_alpha = 0.5;
    std::string v_profiles = "all", v_steps = "256,512", v_out = ".";
    verify->add_option("--alpha", v_alpha, "fractional order");
    verify->add_option("--profiles", v_profiles, "all or comma list: smooth,linear,ml,power");
    verify->add_option("--N", v_steps, "comma-separated step counts");
    verify->add_option("--out", v_out, "output directory");

    // ---- ml-eval -------------------------------------------------------------
    auto* ml = app.add_subcommand("ml-eval", "print E_{alpha,beta}(z)");
    double m_alpha = 1.0, m_beta = 1.0, m_z = 0.0;
    ml->add_option("--alpha", m_alpha)->required();
    ml->add_option("--beta", m_beta)->required();
    ml->add_option("--z", m_z)->required();

    // ---- counterexample ---------------------------------------------------------
    auto* ce = app.add_subcommand("counterexample", "forcing-regularity counterexample report");
    double ce_alpha = 0.3, ce_beta = -0.4;
    std::string ce_out;
    ce->add_option("--alpha", ce_alpha)->required();
    ce->add_option("--beta", ce_beta)->required();
    ce->add_option("--out", ce_out, "output directory (report also printed)");

    // ---- energy-check -------------------------------------------------------------
    auto* energy = app.add_subcommand("energy-check", "first energy estimate on a solved problem");
    std::string e_config, e_preset = "heat", e_out = ".";
    int e_steps = 0, e_modes = 0;
    double e_alpha = 0.0;
    energy->add_option("--config", e_config, "problem config file");
    energy->add_option("--preset", e_preset, "built-in problem when no config is given");
    energy->add_option("--steps", e_steps, "override time steps");
    energy->add_option("--modes", e_modes, "override mode count");
    energy->add_option("--alpha", e_alpha, "override fractional order");
    energy->add_option("--out", e_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (solve->parsed()) {
        ProblemHandle h;
        tfd_status st = load_problem(s_config, s_preset, s_steps, s_modes, s_alpha, s_method, h);
        if (st != TFD_OK) return fail(st);
        tfd_solution* sol = nullptr;
        if ((st = tfd_solve(h.p, &sol)) != TFD_OK) return fail(st);
        const std::string csv = outpath(s_out, "solution.csv");
        const std::string trace = outpath(s_out, "trace.txt");
        if ((st = tfd_solution_write_csv(sol, csv.c_str())) != TFD_OK ||
            (st = tfd_solution_write_trace(sol, trace.c_str())) != TFD_OK) {
            tfd_solution_free(sol);
            return fail(st);
        }
        std::printf("solution: %s\ntrace:    %s\nresidual (relative): %.3e\n", csv.c_str(),
                    trace.c_str(), tfd_solution_residual(sol));
        const double gap = tfd_solution_cross_discrepancy(sol);
        if (gap >= 0.0) std::printf("cross-solver discrepancy: %.3e\n", gap);
        tfd_solution_free(sol);
        return 0;
    }

    if (study->parsed()) {
        ProblemHandle h;
        tfd_status st = load_problem(c_config, "heat", 0, 0, c_alpha, "", h);
        if (st != TFD_OK) return fail(st);
        const std::vector<int> Ns = parse_steps(c_steps);
        const std::string csv = outpath(c_out, "error_table.csv");
        double order_final = 0.0, order_l2 = 0.0;
        st = tfd_convergence_study(h.p, c_exact.c_str(), c_mode, Ns.data(), Ns.size(), csv.c_str(),
                                   &order_final, &order_l2);
        if (st != TFD_OK) return fail(st);
        std::printf("error table: %s\nobserved order: %.3f (final), %.3f (space-time)\n",
                    csv.c_str(), order_final, order_l2);
        return 0;
    }

    if (verify->parsed()) {
        const std::vector<int> Ns = parse_steps(v_steps);
        const std::string report = outpath(v_out, "identity_report.txt");
        int pass = 0;
        tfd_status st = tfd_verify_identities(v_alpha, v_profiles.c_str(), Ns.data(), Ns.size(),
                                              report.c_str(), &pass);
        if (st == TFD_ERR_BAD_INPUT) return fail(st);
        std::printf("report: %s\nresult: %s\n", report.c_str(), pass ? "PASS" : "FAIL");
        return st == TFD_OK ? 0 : static_cast<int>(st);
    }

    if (ml->parsed()) {
        double value = 0.0;
        tfd_status st = tfd_ml_eval(m_alpha, m_beta, m_z, &value);
        if (st != TFD_OK) return fail(st);
        std::printf("%.15g\n", value);
        return 0;
    }

    if (ce->parsed()) {
        int continuous = 0;
        const std::string report = ce_out.empty() ? "" : outpath(ce_out, "counterexample.txt");
        tfd_status st = tfd_counterexample(ce_alpha, ce_beta,
                                           report.empty() ? nullptr : report.c_str(), &continuous);
        if (st != TFD_OK) return fail(st);
        if (!report.empty()) std::printf("report: %s\n", report.c_str());
        std::printf("continuous at t=0: %s\n", continuous ? "yes" : "no");
        return 0;
    }

    if (energy->parsed()) {
        ProblemHandle h;
        tfd_status st = load_problem(e_config, e_preset, e_steps, e_modes, e_alpha, "", h);
        if (st != TFD_OK) return fail(st);
        const std::string csv = outpath(e_out, "energy_report.csv");
        int holds = 0;
        double lhs = 0.0, rhs = 0.0;
        st = tfd_energy_check(h.p, csv.c_str(), &holds, &lhs, &rhs);
        if (st == TFD_ERR_BAD_INPUT || st == TFD_ERR_NO_CONVERGENCE) return fail(st);
        std::printf("report: %s\nLHS = %.6e  RHS = %.6e  ->  %s\n", csv.c_str(), lhs, rhs,
                    holds ? "estimate holds" : "estimate VIOLATED");
        return st == TFD_OK ? 0 : static_cast<int>(st);
    }

    return 2;
}
