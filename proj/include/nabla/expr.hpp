#pragma once

#include "nabla/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace nabla {

enum class UnaryOp { Neg, Sqrt, Cbrt, Abs, Exp, Ln, Sin, Cos };
enum class BinaryOp { Add, Sub, Mul, Div };

/// Constant exponent of `^`. `ratio` holds p/q in lowest terms when the
/// value is a small-denominator rational; odd q admits negative bases.
struct Exponent {
    double value = 1.0;
    std::optional<std::pair<std::int64_t, std::int64_t>> ratio;

    static Exponent from_value(double v);
    static Exponent from_ratio(std::int64_t p, std::int64_t q);
    bool is_integer() const { return ratio && ratio->second == 1; }
    bool operator==(const Exponent&) const = default;
};

/// Immutable expression tree in the single variable `t`. Copies share nodes.
class Expr {
public:
    struct Const {
        double value;
    };
    struct Var {};
    struct Unary {
        UnaryOp op;
        std::shared_ptr<const Expr> arg;
    };
    struct Binary {
        BinaryOp op;
        std::shared_ptr<const Expr> lhs, rhs;
    };
    struct Pow {
        std::shared_ptr<const Expr> base;
        Exponent exponent;
    };
    using Node = std::variant<Const, Var, Unary, Binary, Pow>;

    Expr() : node_(Const{0.0}) {}

    // Raw constructors keep the tree exactly as given.
    static Expr constant(double v);
    static Expr variable();
    static Expr unary(UnaryOp op, Expr arg);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
    static Expr power(Expr base, Exponent e);

    const Node& node() const noexcept { return node_; }
    std::optional<double> constant_value() const;

    /// IEEE evaluation; throws EvalError outside the real domain.
    double eval(double t) const;

    /// Symbolic derivative with light constant folding.
    Expr derivative() const;

    /// Replaces every occurrence of `t` with `inner`.
    Expr substitute(const Expr& inner) const;

    bool depends_on_t() const;

    /// Degree when the tree is a polynomial in t (t-free subtrees count as
    /// coefficients), nullopt otherwise.
    std::optional<int> polynomial_degree() const;

    /// True for polynomials whose leaves are literal constants only, so the
    /// value can be computed exactly over the rationals.
    bool is_rational_polynomial() const;

    /// Exact evaluation of a rational polynomial. Throws DomainError otherwise.
    Rational eval_exact(const Rational& t) const;

    /// Smallest distance to a singular argument (sqrt/cbrt/abs/ln argument,
    /// divisor, negative base of a fractional power) along the evaluation.
    double singularity_margin(double t) const;

    /// Text that parses back to a structurally equal tree.
    std::string to_string() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(Node n) : node_(std::move(n)) {}
    Node node_;
};

// Folding constructors used when building derived expressions.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, Exponent e);

/// Parses the function grammar: decimal literals, `t`, `pi`, `+ - * / ^`,
/// parentheses and `sqrt cbrt abs exp ln sin cos`. `^` needs a constant exponent.
Expr parse_expr(std::string_view src);

enum class Monotonicity { StrictlyIncreasing };

/// A parsed function with its classical derivative.
class RealFunction {
public:
    explicit RealFunction(Expr body, std::optional<Monotonicity> claim = std::nullopt);

    const Expr& body() const noexcept { return body_; }
    const Expr& derivative() const noexcept { return derivative_; }
    const std::optional<Monotonicity>& monotone_claim() const noexcept { return claim_; }
    RealFunction with_claim(Monotonicity m) const { return RealFunction(body_, m); }

    double operator()(double t) const { return body_.eval(t); }
    std::string to_string() const { return body_.to_string(); }

private:
    Expr body_;
    Expr derivative_;
    std::optional<Monotonicity> claim_;
};

RealFunction parse_function(std::string_view src);
double eval(const RealFunction& f, double x);
double eval_derivative(const RealFunction& f, double x);

/// f(g(t)).
RealFunction compose(const RealFunction& outer, const RealFunction& inner);

} // namespace nabla
