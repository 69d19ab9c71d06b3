#include "tfd/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace tfd {

namespace {

size_t bracket(const std::vector<double>& axis, double v, double& frac) {
    if (axis.size() == 1) {
        frac = 0.0;
        return 0;
    }
    if (v <= axis.front()) {
        frac = 0.0;
        return 0;
    }
    if (v >= axis.back()) {
        frac = 1.0;
        return axis.size() - 2;
    }
    const auto it = std::upper_bound(axis.begin(), axis.end(), v);
    const size_t hi = static_cast<size_t>(it - axis.begin());
    const size_t lo = hi - 1;
    frac = (v - axis[lo]) / (axis[hi] - axis[lo]);
    return lo;
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

LatticeField LatticeField::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open coefficient CSV: " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("empty coefficient CSV: " + path);
    header = trim(header);
    bool twod;
    if (header == "x,t,value") twod = false;
    else if (header == "x,y,t,value") twod = true;
    else throw std::invalid_argument("coefficient CSV header must be 'x,t,value' or 'x,y,t,value'");

    struct Key {
        double x, y, t;
        bool operator<(const Key& o) const {
            if (x != o.x) return x < o.x;
            if (y != o.y) return y < o.y;
            return t < o.t;
        }
    };
    std::map<Key, double> data;
    std::vector<double> xs, ys, ts;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        if (row.size() != (twod ? 4u : 3u))
            throw std::invalid_argument("coefficient CSV row arity mismatch: " + line);
        Key k{row[0], twod ? row[1] : 0.0, twod ? row[2] : row[1]};
        data[k] = row.back();
        xs.push_back(k.x);
        ys.push_back(k.y);
        ts.push_back(k.t);
    }
    auto uniq = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(xs);
    uniq(ys);
    uniq(ts);
    LatticeField f;
    f.xs_ = xs;
    f.ys_ = twod ? ys : std::vector<double>{};
    f.ts_ = ts;
    const size_t ny = twod ? ys.size() : 1;
    f.values_.resize(xs.size() * ny * ts.size());
    for (size_t ix = 0; ix < xs.size(); ++ix)
        for (size_t iy = 0; iy < ny; ++iy)
            for (size_t it = 0; it < ts.size(); ++it) {
                Key k{xs[ix], twod ? ys[iy] : 0.0, ts[it]};
                auto found = data.find(k);
                if (found == data.end())
                    throw std::invalid_argument("coefficient CSV does not fill a full lattice");
                f.values_[(ix * ny + iy) * ts.size() + it] = found->second;
            }
    return f;
}

double LatticeField::at(size_t ix, size_t iy, size_t it) const {
    const size_t ny = ys_.empty() ? 1 : ys_.size();
    return values_[(ix * ny + iy) * ts_.size() + it];
}

double LatticeField::eval(double x, double y, double t) const {
    double fx, fy = 0.0, ft;
    const size_t ix = bracket(xs_, x, fx);
    const size_t iy = ys_.empty() ? 0 : bracket(ys_, y, fy);
    const size_t it = bracket(ts_, t, ft);
    const size_t ix1 = std::min(ix + 1, xs_.size() - 1);
    const size_t iy1 = ys_.empty() ? 0 : std::min(iy + 1, ys_.size() - 1);
    const size_t it1 = std::min(it + 1, ts_.size() - 1);
    auto lerp = [](double a, double b, double f) { return a + (b - a) * f; };
    if (ys_.empty()) {
        const double v0 = lerp(at(ix, 0, it), at(ix, 0, it1), ft);
        const double v1 = lerp(at(ix1, 0, it), at(ix1, 0, it1), ft);
        return lerp(v0, v1, fx);
    }
    const double c00 = lerp(at(ix, iy, it), at(ix, iy, it1), ft);
    const double c01 = lerp(at(ix, iy1, it), at(ix, iy1, it1), ft);
    const double c10 = lerp(at(ix1, iy, it), at(ix1, iy, it1), ft);
    const double c11 = lerp(at(ix1, iy1, it), at(ix1, iy1, it1), ft);
    return lerp(lerp(c00, c01, fy), lerp(c10, c11, fy), fx);
}

ScalarField ScalarField::parse(const std::string& spec) {
    const std::string s = trim(spec);
    if (s.rfind("csv:", 0) == 0) return ScalarField(LatticeField::read_csv(trim(s.substr(4))));
    return ScalarField(Expr::parse(s));
}

MatrixField MatrixField::isotropic(ScalarField s) {
    MatrixField m;
    m.form_ = Form::isotropic;
    m.entries_ = {std::move(s)};
    return m;
}

MatrixField MatrixField::diagonal(ScalarField a11, ScalarField a22) {
    MatrixField m;
    m.form_ = Form::diagonal;
    m.entries_ = {std::move(a11), std::move(a22)};
    return m;
}

MatrixField MatrixField::symmetric(ScalarField a11, ScalarField a12, ScalarField a22) {
    MatrixField m;
    m.form_ = Form::symmetric;
    m.entries_ = {std::move(a11), std::move(a12), std::move(a22)};
    return m;
}

MatrixField MatrixField::parse(const std::string& spec) {
    std::string s = trim(spec);
    // tolerate a trailing "*I" on an isotropic factor
    if (s.size() > 2 && s.substr(s.size() - 2) == "*I") s = trim(s.substr(0, s.size() - 2));
    if (s == "I") s = "1";
    if (s.rfind("diag(", 0) == 0 && s.back() == ')') {
        auto parts = split_top_level(s.substr(5, s.size() - 6), ',');
        if (parts.size() != 2) throw std::invalid_argument("diag(...) takes two entries");
        return diagonal(ScalarField::parse(parts[0]), ScalarField::parse(parts[1]));
    }
    if (s.rfind("mat(", 0) == 0 && s.back() == ')') {
        auto parts = split_top_level(s.substr(4, s.size() - 5), ',');
        if (parts.size() != 3) throw std::invalid_argument("mat(...) takes a11, a12, a22");
        return symmetric(ScalarField::parse(parts[0]), ScalarField::parse(parts[1]),
                         ScalarField::parse(parts[2]));
    }
    return isotropic(ScalarField::parse(s));
}

void MatrixField::eval(double x, double y, double t, double& a11, double& a12, double& a22) const {
    switch (form_) {
        case Form::isotropic:
            a11 = a22 = entries_[0].eval(x, y, t);
            a12 = 0.0;
            return;
        case Form::diagonal:
            a11 = entries_[0].eval(x, y, t);
            a22 = entries_[1].eval(x, y, t);
            a12 = 0.0;
            return;
        case Form::symmetric:
            a11 = entries_[0].eval(x, y, t);
            a12 = entries_[1].eval(x, y, t);
            a22 = entries_[2].eval(x, y, t);
            return;
    }
}

VectorField VectorField::parse(const std::string& spec, int dim) {
    VectorField f;
    std::string s = trim(spec);
    if (s == "0") {
        for (int i = 0; i < dim; ++i) f.entries_.emplace_back(Expr::constant(0.0));
        return f;
    }
    if (s.size() > 1 && s.front() == '(' && s.back() == ')') {
        auto parts = split_top_level(s.substr(1, s.size() - 2), ',');
        if (static_cast<int>(parts.size()) != dim)
            throw std::invalid_argument("vector field arity does not match the domain dimension");
        for (auto& p : parts) f.entries_.push_back(ScalarField::parse(p));
        return f;
    }
    if (dim != 1) throw std::invalid_argument("2D drift field needs the form (e1, e2)");
    f.entries_.push_back(ScalarField::parse(s));
    return f;
}

double VectorField::eval(int component, double x, double y, double t) const {
    return entries_.at(component).eval(x, y, t);
}

SampleLattice default_validation_lattice(const Domain& d, double horizon) {
    SampleLattice lat;
    const int ns = 17;
    if (d.kind == Domain::Kind::interval) {
        for (int i = 0; i <= ns; ++i) lat.xs.push_back(d.L * i / ns);
        lat.ys.push_back(0.0);
    } else {
        for (int i = 0; i <= ns; ++i) lat.xs.push_back(d.Lx * i / ns);
        for (int i = 0; i <= ns; ++i) lat.ys.push_back(d.Ly * i / ns);
    }
    for (int i = 0; i <= ns; ++i) lat.ts.push_back(horizon * i / ns);
    return lat;
}

std::string EllipticityReport::to_text() const {
    std::ostringstream os;
    os << "ellipticity check: " << (pass ? "PASS" : "FAIL") << "\n";
    os << "  worst lower margin (xi'a xi - lambda|xi|^2): " << worst_lower_margin << "\n";
    os << "  worst upper margin (mu|xi|^2 - xi'a xi):     " << worst_upper_margin << "\n";
    os << "  max |a_ij| over lattice: " << max_abs_entry << "\n";
    if (violation) {
        os << "  witness: x=" << violation->x;
        os << " y=" << violation->y << " t=" << violation->t;
        os << " xi=(" << violation->xi1 << "," << violation->xi2 << ")";
        os << " quadratic form=" << violation->quadratic_form << "\n";
    }
    return os.str();
}

EllipticityReport validate_ellipticity(const CoefficientSet& coeffs, const Domain& d,
                                       const SampleLattice& lattice) {
    coeffs.validate_bounds();
    if (lattice.xs.empty() || lattice.ts.empty())
        throw std::invalid_argument("validate_ellipticity: empty sample lattice");
    const int dim = d.dim();

    std::vector<std::array<double, 2>> probes;
    probes.push_back({1.0, 0.0});
    if (dim == 2) {
        probes.push_back({0.0, 1.0});
        const double s = std::sqrt(0.5);
        probes.push_back({s, s});
        probes.push_back({s, -s});
        std::mt19937 rng(20240513u);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        int added = 0;
        while (added < 32) {
            double v1 = uni(rng), v2 = uni(rng);
            const double n = std::hypot(v1, v2);
            if (n < 1e-3 || n > 1.0) continue;
            probes.push_back({v1 / n, v2 / n});
            ++added;
        }
    }

    EllipticityReport rep;
    rep.worst_lower_margin = std::numeric_limits<double>::infinity();
    rep.worst_upper_margin = std::numeric_limits<double>::infinity();
    for (double t : lattice.ts)
        for (double x : lattice.xs)
            for (double y : lattice.ys) {
                double a11, a12, a22;
                coeffs.a.eval(x, y, t, a11, a12, a22);
                rep.max_abs_entry = std::max({rep.max_abs_entry, std::abs(a11)});
                if (dim == 2)
                    rep.max_abs_entry = std::max({rep.max_abs_entry, std::abs(a12), std::abs(a22)});
                for (const auto& xi : probes) {
                    const double q = dim == 1 ? a11 * xi[0] * xi[0]
                                              : a11 * xi[0] * xi[0] + 2.0 * a12 * xi[0] * xi[1] +
                                                    a22 * xi[1] * xi[1];
                    const double lower = q - coeffs.lambda;
                    const double upper = coeffs.mu - q;
                    if (lower < rep.worst_lower_margin) rep.worst_lower_margin = lower;
                    if (upper < rep.worst_upper_margin) rep.worst_upper_margin = upper;
                    if ((lower < -1e-12 || upper < -1e-12) && !rep.violation) {
                        rep.violation = EllipticityWitness{x, y, t, xi[0], xi[1], q};
                    }
                }
            }
    rep.pass = !rep.violation && rep.max_abs_entry <= coeffs.mu + 1e-12;
    return rep;
}

} // namespace tfd
