#include "tfd/capi.h"

#include "tfd/energy.hpp"
#include "tfd/mittag.hpp"
#include "tfd/solver.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
tfd_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const tfd::NonConvergenceError& e) {
        set_error(e.what());
        return TFD_ERR_NO_CONVERGENCE;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return TFD_ERR_BAD_INPUT;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return TFD_ERR_BAD_INPUT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return TFD_ERR_BAD_INPUT;
    }
}

} // namespace

struct tfd_problem_s {
    tfd::ProblemConfig config;
};

struct tfd_solution_s {
    tfd::Solution solution;
};

extern "C" {

const char* tfd_last_error(void) { return g_last_error.c_str(); }

tfd_status tfd_ml_eval(double alpha, double beta, double z, double* out) {
    if (!out) {
        set_error("tfd_ml_eval: out must not be NULL");
        return TFD_ERR_BAD_INPUT;
    }
    return guarded([&]() -> tfd_status {
        *out = tfd::mittag_leffler(alpha, beta, z);
        return TFD_OK;
    });
}

tfd_status tfd_problem_parse_file(const char* path, tfd_problem** out) {
    if (!path || !out) {
        set_error("tfd_problem_parse_file: NULL argument");
        return TFD_ERR_BAD_INPUT;
    }
    return guarded([&]() -> tfd_status {
        auto* p = new tfd_problem_s{tfd::ProblemConfig::parse_file(path)};
        *out = p;
        return TFD_OK;
    });
}

tfd_status tfd_problem_parse_string(const char* text, tfd_problem** out) {
    if (!text || !out) {
        set_error("tfd_problem_parse_string: NULL argument");
        return TFD_ERR_BAD_INPUT;
    }
    return guarded([&]() -> tfd_status {
        auto* p = new tfd_problem_s{tfd::ProblemConfig::parse_string(text)};
        *out = p;
        return TFD_OK;
    });
}

tfd_status tfd_problem_preset(const char* name, tfd_problem** out) {
    if (!name || !out) {
        set_error("tfd_problem_preset: NULL argument");
        return TFD_ERR_BAD_INPUT;
    }
    return guarded([&]() -> tfd_status {
        auto* p = new tfd_problem_s{tfd::problem_preset(name)};
        *out = p;
        return TFD_OK;
    });
}

void tfd_problem_free(tfd_problem* p) { delete p; }

uint64_t tfd_problem_hash(const tfd_problem* p) { return p ? p->config.hash() : 0; }

tfd_status tfd_problem_set_steps(tfd_problem* p, int steps) {
    if (!p) return TFD_ERR_BAD_INPUT;
    if (steps > 0) p->config.steps = steps;
    return guarded([&]() -> tfd_status {
        p->config.validate();
        return TFD_OK;
    });
}

tfd_status tfd_problem_set_modes(tfd_problem* p, int modes) {
    if (!p) return TFD_ERR_BAD_INPUT;
    if (modes > 0) p->config.modes = modes;
    return guarded([&]() -> tfd_status {
        p->config.validate();
        return TFD_OK;
    });
}

tfd_status tfd_problem_set_alpha(tfd_problem* p, double alpha) {
    if (!p) return TFD_ERR_BAD_INPUT;
    if (alpha > 0.0) p->config.alpha = alpha;
    return guarded([&]() -> tfd_status {
        p->config.validate();
        return TFD_OK;
    });
}

tfd_status tfd_problem_set_method(tfd_problem* p, const char* method) {
    if (!p || !method) return TFD_ERR_BAD_INPUT;
    const std::string m = method;
    if (m == "auto") p->config.method = tfd::SolverMethod::automatic;
    else if (m == "picard") p->config.method = tfd::SolverMethod::picard;
    else if (m == "l1") p->config.method = tfd::SolverMethod::l1;
    else if (m == "both") p->config.method = tfd::SolverMethod::both;
    else {
        set_error("tfd_problem_set_method: unknown method '" + m + "'");
        return TFD_ERR_BAD_INPUT;
    }
    return TFD_OK;
}

tfd_status tfd_solve(const tfd_problem* p, tfd_solution** out) {
    if (!p || !out) {
        set_error("tfd_solve: NULL argument");
        return TFD_ERR_BAD_INPUT;
    }
    return guarded([&]() -> tfd_status {
        auto* s = new tfd_solution_s{tfd::solve(p->config)};
        *out = s;
        return TFD_OK;
    });
}

void tfd_solution_free(tfd_solution* s) { delete s; }

tfd_status tfd_solution_write_csv(const tfd_solution* s, const char* path) {
    if (!s || !path) return TFD_ERR_BAD_INPUT;
    return guarded([&]() -> tfd_status {
        s->solution.write_solution_csv(path);
        return TFD_OK;
    });
}

tfd_status tfd_solution_write_trace(const tfd_solution* s, const char* path) {
    if (!s || !path) return TFD_ERR_BAD_INPUT;
    return guarded([&]() -> tfd_status {
        s->solution.write_trace(path);
        return TFD_OK;
    });
}

double tfd_solution_residual(const tfd_solution* s) {
    return s ? s->solution.residual_relative : -1.0;
}

double tfd_solution_cross_discrepancy(const tfd_solution* s) {
    return s ? s->solution.trace.cross_discrepancy : -1.0;
}

tfd_status tfd_convergence_study(const tfd_problem* base, const char* g_text, int mode,
                                 const int* step_counts, size_t count, const char* out_csv,
                                 double* observed_order_final, double* observed_order_l2l2) {
    if (!base || !g_text || !step_counts || count == 0) {
        set_error("tfd_convergence_study: NULL or empty argument");
        return TFD_ERR_BAD_INPUT;
    }
    return guarded([&]() -> tfd_status {
        auto desc = tfd::ManufacturedDescriptor::parse(g_text, mode);
        std::vector<int> Ns(step_counts, step_counts + count);
        tfd::ErrorStudy study = tfd::manufactured_error(base->config, desc, Ns);
        if (out_csv) study.write_csv(out_csv);
        if (observed_order_final) *observed_order_final = study.observed_order_final;
        if (observed_order_l2l2) *observed_order_l2l2 = study.observed_order_l2l2;
        return TFD_OK;
    });
}

tfd_status tfd_verify_identities(double alpha, const char* profiles, const int* step_counts,
                                 size_t count, const char* out_report, int* all_pass) {
    if (!profiles || !step_counts || count < 2) {
        set_error("tfd_verify_identities: need profiles and at least two step counts");
        return TFD_ERR_BAD_INPUT;
    }
    return guarded([&]() -> tfd_status {
        const tfd::FracOrder order(alpha);
        std::vector<std::pair<std::string, std::function<double(double)>>> suite;
        const std::string want = profiles;
        auto selected = [&](const std::string& name) {
            return want == "all" || want.find(name) != std::string::npos;
        };
        if (selected("smooth"))
            suite.emplace_back("smooth", [](double t) { return t + std::sin(t); });
        if (selected("linear")) suite.emplace_back("linear", [](double t) { return t; });
        if (selected("ml")) suite.emplace_back("ml", [alpha](double t) {
            return tfd::mittag_leffler(alpha, 1.0, -std::pow(t, alpha));
        });
        if (selected("power")) suite.emplace_back("power", [alpha](double t) {
            return std::pow(t, alpha);
        });
        if (suite.empty()) {
            set_error("tfd_verify_identities: no known profile in '" + want + "'");
            return TFD_ERR_BAD_INPUT;
        }

        std::ostringstream report;
        report << "identity residual refinement (alpha = " << alpha << ")\n";
        bool pass = true;
        for (const auto& [name, fn] : suite) {
            const bool weakly_singular = (name == "ml" || name == "power");
            const double factor = weakly_singular ? 1.2 : 1.5;
            report << "profile " << name << " (required shrink factor " << factor << ")\n";
            double prev_d = -1.0, prev_q = -1.0;
            for (size_t i = 0; i < count; ++i) {
                const int N = step_counts[i];
                tfd::TimeGrid grid(1.0, N);
                tfd::TimeSeries w = tfd::TimeSeries::sample(grid, fn);
                const auto rd = tfd::caputo_energy_identity_residual(w, order);
                const auto rq = tfd::rl_quadratic_identity_residual(w, order);
                report << "  N = " << N << "  coercivity defect L1 = " << rd.residual_l1
                       << "  quadratic defect = " << rq.defect_sup << "\n";
                if (prev_d >= 0.0) {
                    if (rd.residual_l1 * factor > prev_d) pass = false;
                    if (rq.defect_sup * factor > prev_q && prev_q > 1e-14) pass = false;
                }
                prev_d = rd.residual_l1;
                prev_q = rq.defect_sup;
                for (double frac : {0.25, 0.5, 1.0}) {
                    const double gap = tfd::rl_lower_bound_gap(w, order, frac);
                    if (gap < -1e-10) {
                        pass = false;
                        report << "    lower bound violated at t* = " << frac << " (gap " << gap
                               << ")\n";
                    }
                }
            }
        }
        report << (pass ? "all profiles: PASS\n" : "FAILURES detected\n");
        if (out_report) {
            std::ofstream out(out_report);
            if (!out) throw std::runtime_error(std::string("cannot write report: ") + out_report);
            out << report.str();
        }
        if (all_pass) *all_pass = pass ? 1 : 0;
        if (!pass) {
            set_error("verify-identities: at least one profile failed the refinement check");
            return TFD_ERR_CHECK_FAILED;
        }
        return TFD_OK;
    });
}

tfd_status tfd_counterexample(double alpha, double beta, const char* out_report, int* continuous) {
    return guarded([&]() -> tfd_status {
        tfd::CounterexampleReport rep = tfd::counterexample_demo(tfd::FracOrder(alpha), beta);
        if (out_report) {
            std::ofstream out(out_report);
            if (!out) throw std::runtime_error(std::string("cannot write report: ") + out_report);
            out << rep.to_text();
        }
        if (continuous) *continuous = rep.continuous ? 1 : 0;
        return TFD_OK;
    });
}

tfd_status tfd_energy_check(const tfd_problem* p, const char* out_csv, int* holds, double* lhs,
                            double* rhs) {
    if (!p) {
        set_error("tfd_energy_check: NULL problem");
        return TFD_ERR_BAD_INPUT;
    }
    return guarded([&]() -> tfd_status {
        const tfd::ProblemConfig& cfg = p->config;
        auto basis = std::make_shared<tfd::EigenBasis>(cfg.domain, cfg.modes);
        const tfd::TimeGrid grid(cfg.horizon, cfg.steps);
        const tfd::FracOrder order(cfg.alpha);
        tfd::GalerkinSystem system = tfd::assemble(cfg.coefficients, cfg.forcing, cfg.initial_fn(),
                                                   basis, grid, cfg.effective_epsilon());
        tfd::SpectralField field = [&] {
            if (cfg.effective_method() == tfd::SolverMethod::picard ||
                cfg.effective_method() == tfd::SolverMethod::both)
                return tfd::picard_solve(system, order, cfg.picard).first;
            return tfd::l1_step_solve(system, order);
        }();
        tfd::EnergyReport rep = tfd::first_energy_check(field, system, order);
        if (out_csv) rep.write_csv(out_csv);
        if (holds) *holds = rep.inequality_holds ? 1 : 0;
        if (lhs) *lhs = rep.term("lhs_total");
        if (rhs) *rhs = rep.term("rhs_total");
        if (!rep.inequality_holds) {
            set_error("energy check: the first energy estimate failed\n" + rep.to_text());
            return TFD_ERR_CHECK_FAILED;
        }
        return TFD_OK;
    });
}

} // extern "C"
