#pragma once

#include <memory>
#include <string>

namespace tfd {

/// Small arithmetic expressions over the variables x, y, t: numbers, + - * /,
/// ^ for powers, parentheses, unary minus, `pi`, and the functions sin, cos,
/// exp, sqrt, abs.  This is the grammar behind the coefficient / forcing /
/// initial-data preset strings.
class Expr {
public:
    Expr(); // constant 0
    static Expr parse(const std::string& text);
    static Expr constant(double v);

    double operator()(double x, double y, double t) const;

    bool depends_on_time() const;
    bool depends_on_space() const;

    /// If the expression is a pure product with every factor depending on
    /// at most one of {time, space}, splits it as g(t) * h(x,y) and returns
    /// true.  Used by the assembler to hoist the spatial quadrature out of
    /// the time loop.
    bool separate(Expr& time_part, Expr& space_part) const;

    const std::string& text() const;

    struct Node; // implementation detail, defined in expr.cpp

private:
    explicit Expr(std::shared_ptr<const Node> root, std::string text);
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace tfd
