#include "tfd/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <vector>

namespace tfd {

struct Expr::Node {
    enum class Kind { number, var_x, var_y, var_t, add, sub, mul, div, pow, neg, fn };
    Kind kind = Kind::number;
    double value = 0.0;
    std::string fn_name;
    std::shared_ptr<const Node> a, b;

    double eval(double x, double y, double t) const {
        switch (kind) {
            case Kind::number: return value;
            case Kind::var_x: return x;
            case Kind::var_y: return y;
            case Kind::var_t: return t;
            case Kind::add: return a->eval(x, y, t) + b->eval(x, y, t);
            case Kind::sub: return a->eval(x, y, t) - b->eval(x, y, t);
            case Kind::mul: return a->eval(x, y, t) * b->eval(x, y, t);
            case Kind::div: return a->eval(x, y, t) / b->eval(x, y, t);
            case Kind::pow: return std::pow(a->eval(x, y, t), b->eval(x, y, t));
            case Kind::neg: return -a->eval(x, y, t);
            case Kind::fn: {
                const double v = a->eval(x, y, t);
                if (fn_name == "sin") return std::sin(v);
                if (fn_name == "cos") return std::cos(v);
                if (fn_name == "exp") return std::exp(v);
                if (fn_name == "sqrt") return std::sqrt(v);
                return std::abs(v);
            }
        }
        return 0.0;
    }

    bool depends(char var) const {
        switch (kind) {
            case Kind::number: return false;
            case Kind::var_x: return var == 'x';
            case Kind::var_y: return var == 'y';
            case Kind::var_t: return var == 't';
            case Kind::neg:
            case Kind::fn: return a->depends(var);
            default: return a->depends(var) || b->depends(var);
        }
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_num(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Kind::number;
    n->value = v;
    return n;
}

NodePtr make_bin(Expr::Node::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_ws();
        if (pos_ != s_.size())
            throw std::invalid_argument("expression: trailing input at '" + s_.substr(pos_) + "'");
        return e;
    }

private:
    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            skip_ws();
            if (accept('+')) lhs = make_bin(Expr::Node::Kind::add, lhs, term());
            else if (accept('-')) lhs = make_bin(Expr::Node::Kind::sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            skip_ws();
            if (accept('*')) lhs = make_bin(Expr::Node::Kind::mul, lhs, factor());
            else if (accept('/')) lhs = make_bin(Expr::Node::Kind::div, lhs, factor());
            else return lhs;
        }
    }

    NodePtr factor() {
        skip_ws();
        if (accept('-')) {
            auto n = std::make_shared<Expr::Node>();
            n->kind = Expr::Node::Kind::neg;
            n->a = factor();
            return n;
        }
        NodePtr base = primary();
        skip_ws();
        if (accept('^')) return make_bin(Expr::Node::Kind::pow, base, factor());
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw std::invalid_argument("expression: unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            skip_ws();
            if (!accept(')')) throw std::invalid_argument("expression: missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(s_.c_str() + pos_, &end);
            pos_ = static_cast<size_t>(end - s_.c_str());
            return make_num(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "pi") return make_num(3.141592653589793238462643383279502884);
            if (name == "x" || name == "y" || name == "t") {
                auto n = std::make_shared<Expr::Node>();
                n->kind = name == "x" ? Expr::Node::Kind::var_x
                        : name == "y" ? Expr::Node::Kind::var_y
                                      : Expr::Node::Kind::var_t;
                return n;
            }
            if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt" || name == "abs") {
                skip_ws();
                if (!accept('(')) throw std::invalid_argument("expression: expected '(' after " + name);
                NodePtr arg = expression();
                skip_ws();
                if (!accept(')')) throw std::invalid_argument("expression: missing ')' after " + name);
                auto n = std::make_shared<Expr::Node>();
                n->kind = Expr::Node::Kind::fn;
                n->fn_name = name;
                n->a = std::move(arg);
                return n;
            }
            throw std::invalid_argument("expression: unknown identifier '" + name + "'");
        }
        throw std::invalid_argument(std::string("expression: unexpected character '") + c + "'");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    const std::string& s_;
    size_t pos_ = 0;
};

// Flatten nested multiplications into a factor list.
void collect_factors(const NodePtr& n, std::vector<NodePtr>& out) {
    if (n->kind == Expr::Node::Kind::mul) {
        collect_factors(n->a, out);
        collect_factors(n->b, out);
    } else {
        out.push_back(n);
    }
}

} // namespace

Expr::Expr() : root_(make_num(0.0)), text_("0") {}
Expr::Expr(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

Expr Expr::parse(const std::string& text) {
    Parser p(text);
    return Expr(p.parse(), text);
}

Expr Expr::constant(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return Expr(make_num(v), buf);
}

double Expr::operator()(double x, double y, double t) const { return root_->eval(x, y, t); }

bool Expr::depends_on_time() const { return root_->depends('t'); }
bool Expr::depends_on_space() const { return root_->depends('x') || root_->depends('y'); }

bool Expr::separate(Expr& time_part, Expr& space_part) const {
    if (!depends_on_time()) {
        time_part = Expr::constant(1.0);
        space_part = *this;
        return true;
    }
    if (!depends_on_space()) {
        time_part = *this;
        space_part = Expr::constant(1.0);
        return true;
    }
    std::vector<NodePtr> factors;
    collect_factors(root_, factors);
    NodePtr tp = make_num(1.0), sp = make_num(1.0);
    for (const auto& f : factors) {
        const bool dt = f->depends('t');
        const bool ds = f->depends('x') || f->depends('y');
        if (dt && ds) return false;
        if (dt) tp = make_bin(Node::Kind::mul, tp, f);
        else sp = make_bin(Node::Kind::mul, sp, f);
    }
    time_part = Expr(tp, "(time factor of " + text_ + ")");
    space_part = Expr(sp, "(space factor of " + text_ + ")");
    return true;
}

const std::string& Expr::text() const { return text_; }

} // namespace tfd
