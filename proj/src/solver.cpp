#include "tfd/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace tfd {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

using Sections = std::map<std::string, std::map<std::string, std::string>>;

Sections parse_ini(const std::string& text) {
    Sections out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        if (section.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside any [section]");
        out[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

double want_double(const std::map<std::string, std::string>& kv, const std::string& key,
                   double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
}

int want_int(const std::map<std::string, std::string>& kv, const std::string& key, int fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoi(it->second);
}

std::string want_str(const std::map<std::string, std::string>& kv, const std::string& key,
                     const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, std::string>& kv,
                    const std::vector<std::string>& known, const std::string& section) {
    for (const auto& [k, v] : kv)
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw std::invalid_argument("config: unknown key '" + k + "' in [" + section + "]");
}

} // namespace

ProblemConfig ProblemConfig::parse_string(const std::string& text) {
    const Sections sec = parse_ini(text);
    for (const auto& [name, kv] : sec) {
        (void)kv;
        static const std::vector<std::string> known = {"domain",   "time",    "coefficients",
                                                       "forcing",  "initial", "solver"};
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw std::invalid_argument("config: unknown section [" + name + "]");
    }
    ProblemConfig cfg;

    if (auto it = sec.find("domain"); it != sec.end()) {
        const auto& kv = it->second;
        reject_unknown(kv, {"kind", "length", "lx", "ly", "quadrature"}, "domain");
        const std::string kind = want_str(kv, "kind", "interval");
        const int panels = want_int(kv, "quadrature", kind == "interval" ? 128 : 32);
        if (kind == "interval")
            cfg.domain = Domain::interval(want_double(kv, "length", kPi), panels);
        else if (kind == "rectangle")
            cfg.domain = Domain::rectangle(want_double(kv, "lx", kPi), want_double(kv, "ly", kPi),
                                           panels);
        else
            throw std::invalid_argument("config: domain kind must be interval or rectangle");
    }
    if (auto it = sec.find("time"); it != sec.end()) {
        const auto& kv = it->second;
        reject_unknown(kv, {"horizon", "steps", "alpha"}, "time");
        cfg.horizon = want_double(kv, "horizon", 1.0);
        cfg.steps = want_int(kv, "steps", 256);
        cfg.alpha = want_double(kv, "alpha", 0.5);
    }
    if (auto it = sec.find("coefficients"); it != sec.end()) {
        const auto& kv = it->second;
        reject_unknown(kv, {"a", "b", "c", "lambda", "mu"}, "coefficients");
        cfg.coefficients.a = MatrixField::parse(want_str(kv, "a", "1"));
        cfg.coefficients.b = VectorField::parse(want_str(kv, "b", "0"), cfg.domain.dim());
        cfg.coefficients.c = ScalarField::parse(want_str(kv, "c", "0"));
        cfg.coefficients.lambda = want_double(kv, "lambda", 1.0);
        cfg.coefficients.mu = want_double(kv, "mu", 1.0);
    } else {
        cfg.coefficients.a = MatrixField::parse("1");
        cfg.coefficients.b = VectorField::parse("0", cfg.domain.dim());
        cfg.coefficients.c = ScalarField::parse("0");
    }
    if (auto it = sec.find("forcing"); it != sec.end()) {
        const auto& kv = it->second;
        reject_unknown(kv, {"expr", "modal_mode", "modal_g"}, "forcing");
        const bool has_expr = kv.count("expr") > 0;
        const bool has_modal = kv.count("modal_g") > 0;
        if (has_expr && has_modal)
            throw std::invalid_argument("config: forcing takes either expr or modal_g, not both");
        if (has_expr && want_str(kv, "expr", "0") != "0")
            cfg.forcing = ForcingSpec::expression(ScalarField::parse(kv.at("expr")));
        else if (has_modal)
            cfg.forcing = ForcingSpec::modal(want_int(kv, "modal_mode", 1),
                                             Expr::parse(kv.at("modal_g")));
    }
    if (auto it = sec.find("initial"); it != sec.end()) {
        const auto& kv = it->second;
        reject_unknown(kv, {"preset", "expr", "csv"}, "initial");
        if (kv.count("preset") + kv.count("expr") + kv.count("csv") > 1)
            throw std::invalid_argument("config: initial takes one of preset, expr, csv");
        if (kv.count("preset")) {
            cfg.initial_kind = "preset";
            cfg.initial_arg = kv.at("preset");
        } else if (kv.count("expr")) {
            cfg.initial_kind = "expr";
            cfg.initial_arg = kv.at("expr");
        } else if (kv.count("csv")) {
            cfg.initial_kind = "csv";
            cfg.initial_arg = kv.at("csv");
        }
    }
    if (auto it = sec.find("solver"); it != sec.end()) {
        const auto& kv = it->second;
        reject_unknown(kv,
                       {"modes", "method", "epsilon", "picard_rho", "picard_tol",
                        "picard_max_iterations", "picard_shrink", "picard_initial"},
                       "solver");
        cfg.modes = want_int(kv, "modes", 8);
        const std::string m = want_str(kv, "method", "auto");
        if (m == "auto") cfg.method = SolverMethod::automatic;
        else if (m == "picard") cfg.method = SolverMethod::picard;
        else if (m == "l1") cfg.method = SolverMethod::l1;
        else if (m == "both") cfg.method = SolverMethod::both;
        else throw std::invalid_argument("config: method must be auto, picard, l1 or both");
        cfg.epsilon = want_double(kv, "epsilon", -1.0);
        cfg.picard.rho = want_double(kv, "picard_rho", cfg.picard.rho);
        cfg.picard.tol = want_double(kv, "picard_tol", cfg.picard.tol);
        cfg.picard.max_iterations = want_int(kv, "picard_max_iterations", cfg.picard.max_iterations);
        cfg.picard.shrink = want_double(kv, "picard_shrink", cfg.picard.shrink);
        const std::string init = want_str(kv, "picard_initial", "constant");
        if (init == "constant") cfg.picard.initial = PicardConfig::Initial::constant_extension;
        else if (init == "zero") cfg.picard.initial = PicardConfig::Initial::zero_extension;
        else throw std::invalid_argument("config: picard_initial must be constant or zero");
    }
    cfg.validate();
    return cfg;
}

ProblemConfig ProblemConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

void ProblemConfig::validate() const {
    domain.validate();
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("config: alpha must lie strictly in (0,1)");
    if (!(horizon > 0.0)) throw std::invalid_argument("config: horizon must be positive");
    if (steps < 2 || steps > (1 << 20))
        throw std::invalid_argument("config: steps must lie in [2, 2^20]");
    if (modes < 1 || modes > 128) throw std::invalid_argument("config: modes must lie in [1, 128]");
    coefficients.validate_bounds();
    picard.validate();
    if (epsilon >= horizon) throw std::invalid_argument("config: epsilon must stay below the horizon");
    if (initial_kind == "expr") (void)Expr::parse(initial_arg);
}

SpatialFn ProblemConfig::initial_fn() const {
    if (initial_kind == "zero") return [](double, double) { return 0.0; };
    if (initial_kind == "preset") return spatial_preset(initial_arg, domain);
    if (initial_kind == "expr") {
        Expr e = Expr::parse(initial_arg);
        return [e](double x, double y) { return e(x, y, 0.0); };
    }
    if (initial_kind == "csv") return spatial_field_csv(initial_arg);
    throw std::invalid_argument("config: unknown initial data kind '" + initial_kind + "'");
}

std::string ProblemConfig::canonical_text() const {
    std::ostringstream os;
    os << "[domain]\n";
    if (domain.kind == Domain::Kind::interval)
        os << "kind = interval\nlength = " << fmt15(domain.L) << "\n";
    else
        os << "kind = rectangle\nlx = " << fmt15(domain.Lx) << "\nly = " << fmt15(domain.Ly) << "\n";
    os << "quadrature = " << domain.quad_panels << "\n";
    os << "[time]\nhorizon = " << fmt15(horizon) << "\nsteps = " << steps
       << "\nalpha = " << fmt15(alpha) << "\n";
    os << "[coefficients]\nlambda = " << fmt15(coefficients.lambda)
       << "\nmu = " << fmt15(coefficients.mu) << "\n";
    os << "[forcing]\nkind = " << static_cast<int>(forcing.kind) << "\n";
    if (forcing.kind == ForcingSpec::Kind::modal)
        os << "modal_mode = " << forcing.mode << "\nmodal_g = " << forcing.g.text() << "\n";
    if (forcing.kind == ForcingSpec::Kind::expression && !forcing.field.is_lattice())
        os << "expr = " << forcing.field.expr().text() << "\n";
    os << "[initial]\nkind = " << initial_kind << "\narg = " << initial_arg << "\n";
    os << "[solver]\nmodes = " << modes << "\nmethod = " << static_cast<int>(effective_method())
       << "\nepsilon = " << fmt15(effective_epsilon()) << "\npicard_rho = " << fmt15(picard.rho)
       << "\npicard_tol = " << fmt15(picard.tol) << "\n";
    return os.str();
}

uint64_t ProblemConfig::hash() const {
    const std::string text = canonical_text();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ProblemConfig problem_preset(const std::string& name) {
    if (name == "heat")
        return ProblemConfig::parse_string(
            "[domain]\nkind = interval\nlength = 3.141592653589793\n"
            "[time]\nhorizon = 1\nsteps = 256\nalpha = 0.5\n"
            "[coefficients]\na = 1\nb = 0\nc = 0\nlambda = 1\nmu = 1\n"
            "[initial]\npreset = sine:1\n"
            "[solver]\nmodes = 8\n");
    if (name == "forced")
        return ProblemConfig::parse_string(
            "[domain]\nkind = interval\nlength = 3.141592653589793\n"
            "[time]\nhorizon = 1\nsteps = 256\nalpha = 0.5\n"
            "[coefficients]\na = 1\nb = 0\nc = 0\nlambda = 1\nmu = 1\n"
            "[forcing]\nmodal_mode = 1\nmodal_g = sin(t)\n"
            "[solver]\nmodes = 8\n");
    if (name == "drift")
        return ProblemConfig::parse_string(
            "[domain]\nkind = interval\nlength = 3.141592653589793\n"
            "[time]\nhorizon = 1\nsteps = 256\nalpha = 0.5\n"
            "[coefficients]\na = (1+0.5*sin(t))\nb = 0.2\nc = 0.3\nlambda = 0.5\nmu = 1.5\n"
            "[initial]\npreset = parabola\n"
            "[forcing]\nmodal_mode = 1\nmodal_g = sin(t)\n"
            "[solver]\nmodes = 8\nmethod = l1\n");
    throw std::invalid_argument("unknown problem preset '" + name + "' (heat, forced, drift)");
}

SpatialFn spatial_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spatial CSV: " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("empty spatial CSV: " + path);
    header = trim(header);
    bool twod;
    if (header == "x,value") twod = false;
    else if (header == "x,y,value") twod = true;
    else throw std::invalid_argument("spatial CSV header must be 'x,value' or 'x,y,value'");

    // reuse the coefficient lattice machinery with a singleton time axis
    std::string body = twod ? "x,y,t,value\n" : "x,t,value\n";
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const size_t last = line.find_last_of(',');
        body += line.substr(0, last) + ",0," + line.substr(last + 1) + "\n";
    }
    const std::string tmp = path + ".lattice.tmp";
    {
        std::ofstream out(tmp);
        out << body;
    }
    LatticeField lat = LatticeField::read_csv(tmp);
    std::remove(tmp.c_str());
    return [lat](double x, double y) { return lat.eval(x, y, 0.0); };
}

void Solution::write_solution_csv(const std::string& path, int spatial_samples) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const EigenBasis& basis = *field.basis;
    const Domain& dom = basis.domain();
    const bool twod = dom.kind == Domain::Kind::rectangle;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(spec_hash));
    out << "# spec " << buf << "\n";
    out << (twod ? "t,x,y,u\n" : "t,x,u\n");

    std::vector<std::array<double, 2>> pts;
    if (!twod) {
        for (int i = 0; i < spatial_samples; ++i)
            pts.push_back({dom.L * i / (spatial_samples - 1), 0.0});
    } else {
        for (int i = 0; i < spatial_samples; ++i)
            for (int j = 0; j < spatial_samples; ++j)
                pts.push_back({dom.Lx * i / (spatial_samples - 1), dom.Ly * j / (spatial_samples - 1)});
    }
    for (int j = 0; j < field.grid.nodes(); ++j) {
        const Eigen::VectorXd coeffs = field.coefficients.row(j).transpose();
        const Eigen::VectorXd vals = reconstruct(coeffs, basis, pts);
        for (size_t i = 0; i < pts.size(); ++i) {
            out << fmt15(field.grid.node(j)) << "," << fmt15(pts[i][0]);
            if (twod) out << "," << fmt15(pts[i][1]);
            out << "," << fmt15(vals(static_cast<Eigen::Index>(i))) << "\n";
        }
    }
}

void Solution::write_trace(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(spec_hash));
    out << "spec hash: " << buf << "\n" << trace.to_text();
    out << "residual (relative): " << fmt15(residual_relative) << "\n";
}

Solution solve(const ProblemConfig& config) {
    config.validate();
    auto basis = std::make_shared<EigenBasis>(config.domain, config.modes);
    const TimeGrid grid(config.horizon, config.steps);
    const FracOrder order(config.alpha);

    GalerkinSystem system = assemble(config.coefficients, config.forcing, config.initial_fn(),
                                     basis, grid, config.effective_epsilon());

    const SolverMethod method = config.effective_method();
    std::optional<SpectralField> picard_field, l1_field;
    SolveTrace trace;
    if (method == SolverMethod::picard || method == SolverMethod::both) {
        auto [f, t] = picard_solve(system, order, config.picard);
        picard_field = std::move(f);
        trace = std::move(t);
    }
    if (method == SolverMethod::l1 || method == SolverMethod::both) {
        l1_field = l1_step_solve(system, order);
    }
    if (picard_field && l1_field)
        trace.cross_discrepancy =
            (picard_field->coefficients - l1_field->coefficients).cwiseAbs().maxCoeff();

    const bool canonical_is_picard = picard_field.has_value();
    SpectralField canonical = canonical_is_picard ? std::move(*picard_field) : std::move(*l1_field);

    TimeSeries res = volterra_residual(canonical, system, order);
    const double sup = res.values().cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, canonical.coefficients.cwiseAbs().maxCoeff());
    Solution sol{std::move(canonical),
                 canonical_is_picard && l1_field ? std::move(l1_field) : std::nullopt,
                 std::move(trace),
                 sup,
                 sup / scale,
                 config.hash()};
    if (canonical_is_picard && sol.residual_relative > 1e-6)
        throw NonConvergenceError("solve: fixed-point residual above the 1e-6 contract", sol.trace);
    return sol;
}

ManufacturedDescriptor ManufacturedDescriptor::parse(const std::string& g_text, int mode) {
    ManufacturedDescriptor d;
    d.mode = mode;
    std::string s;
    for (char c : g_text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("manufactured descriptor: empty g(t)");
    // split into +/- separated terms of the form c, t^p, c*t^p
    size_t pos = 0;
    while (pos < s.size()) {
        double sign = 1.0;
        while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            if (s[pos] == '-') sign = -sign;
            ++pos;
        }
        size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        std::string termtext = s.substr(pos, end - pos);
        pos = end;
        if (termtext.empty()) throw std::invalid_argument("manufactured descriptor: malformed term");
        Term term;
        term.coef = sign;
        const size_t tpos = termtext.find('t');
        if (tpos == std::string::npos) {
            term.coef *= std::stod(termtext);
            term.power = 0.0;
        } else {
            std::string coef = termtext.substr(0, tpos);
            if (!coef.empty() && coef.back() == '*') coef.pop_back();
            if (!coef.empty()) term.coef *= std::stod(coef);
            std::string rest = termtext.substr(tpos + 1);
            if (rest.empty()) term.power = 1.0;
            else if (rest[0] == '^') term.power = std::stod(rest.substr(1));
            else throw std::invalid_argument("manufactured descriptor: malformed power in " + termtext);
        }
        d.g_terms.push_back(term);
    }
    return d;
}

double ManufacturedDescriptor::g(double t) const {
    double acc = 0.0;
    for (const Term& term : g_terms) acc += term.coef * std::pow(t, term.power);
    return acc;
}

double ManufacturedDescriptor::caputo_g(double t, double alpha) const {
    double acc = 0.0;
    for (const Term& term : g_terms) {
        if (term.power == 0.0) continue;
        acc += term.coef * std::tgamma(term.power + 1.0) /
               std::tgamma(term.power + 1.0 - alpha) * std::pow(t, term.power - alpha);
    }
    return acc;
}

void ErrorStudy::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "steps,err_final_l2,err_l2l2\n";
    for (const auto& r : rows)
        out << r.steps << "," << fmt15(r.err_final) << "," << fmt15(r.err_l2l2) << "\n";
    out << "# observed order (final): " << fmt15(observed_order_final) << "\n";
    out << "# observed order (l2l2):  " << fmt15(observed_order_l2l2) << "\n";
}

std::string ErrorStudy::to_text() const {
    std::ostringstream os;
    os << "steps    err_final_l2      err_l2l2\n";
    for (const auto& r : rows) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%-8d %-17.8e %-17.8e\n", r.steps, r.err_final, r.err_l2l2);
        os << buf;
    }
    os << "observed temporal order: " << observed_order_final << " (final-time), "
       << observed_order_l2l2 << " (space-time)\n";
    return os.str();
}

namespace {
double order_from_rows(const std::vector<ErrorStudyRow>& rows, bool final_col) {
    // least-squares slope of log(err) against log(N), negated
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& r : rows) {
        const double e = final_col ? r.err_final : r.err_l2l2;
        if (e <= 0.0) continue;
        const double lx = std::log(static_cast<double>(r.steps));
        const double ly = std::log(e);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    if (cnt < 2) return 0.0;
    return -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}
} // namespace

ErrorStudy manufactured_error(const ProblemConfig& base, const ManufacturedDescriptor& exact,
                              const std::vector<int>& step_counts) {
    if (exact.g_terms.empty()) throw std::invalid_argument("manufactured_error: empty descriptor");
    for (const auto& term : exact.g_terms)
        if (term.power != 0.0 && term.power < base.alpha)
            throw std::invalid_argument(
                "manufactured_error: powers below alpha leave the supported family");
    // the closed-form forcing requires a constant isotropic principal part
    if (base.coefficients.a.form() != MatrixField::Form::isotropic ||
        base.coefficients.a.entry(0).is_lattice() ||
        base.coefficients.a.entry(0).expr().depends_on_time() ||
        base.coefficients.a.entry(0).expr().depends_on_space())
        throw std::invalid_argument("manufactured_error: needs a constant isotropic coefficient");
    for (int c = 0; c < base.coefficients.b.components(); ++c)
        if (base.coefficients.b.entry(c).expr().text() != "0")
            throw std::invalid_argument("manufactured_error: drift must vanish");
    if (base.coefficients.c.expr().text() != "0")
        throw std::invalid_argument("manufactured_error: reaction must vanish");

    const double a0 = base.coefficients.a.entry(0).expr()(0, 0, 0);
    if (exact.mode < 1 || exact.mode > base.modes)
        throw std::invalid_argument("manufactured_error: mode outside the basis");

    ErrorStudy study;
    for (int N : step_counts) {
        ProblemConfig cfg = base;
        cfg.steps = N;
        if (cfg.epsilon < 0.0) cfg.epsilon = 0.0; // exact data unless explicitly overridden

        auto basis = std::make_shared<EigenBasis>(cfg.domain, cfg.modes);
        const double lam = basis->eigenvalue(exact.mode - 1);

        // f = (D^alpha g + a0 lambda_k g) phi_k, assembled in closed form
        std::ostringstream gexpr;
        bool firstTerm = true;
        auto append = [&](double coef, double power) {
            if (coef == 0.0) return;
            if (!firstTerm) gexpr << " + ";
            firstTerm = false;
            gexpr << fmt15(coef);
            if (power != 0.0) gexpr << "*t^" << fmt15(power);
        };
        for (const auto& term : exact.g_terms) {
            append(a0 * lam * term.coef, term.power);
            if (term.power != 0.0)
                append(term.coef * std::tgamma(term.power + 1.0) /
                           std::tgamma(term.power + 1.0 - cfg.alpha),
                       term.power - cfg.alpha);
        }
        if (firstTerm) gexpr << "0";
        cfg.forcing = ForcingSpec::modal(exact.mode, Expr::parse(gexpr.str()));

        // u0 = g(0) * phi_k written out as an expression in x[,y]
        const double g0 = exact.g(0.0);
        const auto [p, q] = basis->mode_indices(exact.mode - 1);
        std::ostringstream u0expr;
        if (cfg.domain.kind == Domain::Kind::interval) {
            u0expr << fmt15(g0 * std::sqrt(2.0 / cfg.domain.L)) << "*sin("
                   << fmt15(p * kPi / cfg.domain.L) << "*x)";
        } else {
            u0expr << fmt15(g0 * 2.0 / std::sqrt(cfg.domain.Lx * cfg.domain.Ly)) << "*sin("
                   << fmt15(p * kPi / cfg.domain.Lx) << "*x)*sin(" << fmt15(q * kPi / cfg.domain.Ly)
                   << "*y)";
        }
        cfg.initial_kind = "expr";
        cfg.initial_arg = u0expr.str();

        Solution sol = solve(cfg);
        const Eigen::MatrixXd& coeffs = sol.field.coefficients;

        const TimeGrid grid(cfg.horizon, N);
        double err_final = 0.0, acc = 0.0;
        for (int j = 0; j <= N; ++j) {
            Eigen::VectorXd diff = coeffs.row(j).transpose();
            diff(exact.mode - 1) -= exact.g(grid.node(j));
            const double e2 = diff.squaredNorm();
            if (j == N) err_final = std::sqrt(e2);
            acc += (j == 0 || j == N ? 0.5 : 1.0) * grid.dt() * e2;
        }
        study.rows.push_back({N, err_final, std::sqrt(acc)});
    }
    study.observed_order_final = order_from_rows(study.rows, true);
    study.observed_order_l2l2 = order_from_rows(study.rows, false);
    return study;
}

double spectral_h_minus_1_norm(const Eigen::VectorXd& coeffs, const EigenBasis& basis) {
    if (coeffs.size() != basis.count())
        throw std::invalid_argument("spectral_h_minus_1_norm: coefficient length mismatch");
    double acc = 0.0;
    for (int k = 0; k < basis.count(); ++k) acc += coeffs(k) * coeffs(k) / basis.eigenvalue(k);
    return std::sqrt(acc);
}

} // namespace tfd
