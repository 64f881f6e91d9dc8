#include "nabla/expr.hpp"

#include "nabla/error.hpp"
#include "nabla/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nabla {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::shared_ptr<const Expr> share(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

double checked(double v, const char* what) {
    if (!std::isfinite(v))
        throw EvalError(std::string(what) + " produced a non-finite value");
    return v;
}

const char* unary_name(UnaryOp op) {
    switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Cbrt: return "cbrt";
    case UnaryOp::Abs: return "abs";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Ln: return "ln";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    }
    return "?";
}

char binary_symbol(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    }
    return '?';
}

double power_value(double base, const Exponent& e) {
    if (e.is_integer() || base > 0.0)
        return std::pow(base, e.value);
    if (base == 0.0) {
        if (e.value < 0.0)
            throw EvalError("zero raised to a negative power");
        return 0.0;
    }
    if (e.ratio && e.ratio->second % 2 != 0) {
        const double mag = std::pow(-base, e.value);
        return (e.ratio->first % 2 != 0) ? -mag : mag;
    }
    throw EvalError("negative base " + format_real(base) + " with exponent " + format_real(e.value) +
                    " has no real value");
}

Rational rational_pow(const Rational& base, std::int64_t n) {
    Rational acc = 1;
    Rational b = base;
    for (auto k = n; k > 0; k >>= 1) {
        if (k & 1)
            acc *= b;
        b *= b;
    }
    return acc;
}

} // namespace

Rational to_rational(double x) {
    if (!std::isfinite(x))
        throw DomainError("cannot convert a non-finite value to a rational");
    int exp = 0;
    const double mant = std::frexp(x, &exp);
    // mant * 2^53 is an integer for every double.
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    Rational r = scaled;
    exp -= 53;
    if (exp > 0)
        r *= rational_pow(Rational(2), exp);
    else if (exp < 0)
        r /= rational_pow(Rational(2), -exp);
    return r;
}

Exponent Exponent::from_ratio(std::int64_t p, std::int64_t q) {
    if (q == 0)
        throw DomainError("exponent denominator is zero");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    const auto g = std::gcd(p, q);
    if (g > 1) {
        p /= g;
        q /= g;
    }
    return Exponent{static_cast<double>(p) / static_cast<double>(q), std::pair{p, q}};
}

Exponent Exponent::from_value(double v) {
    if (!std::isfinite(v))
        throw DomainError("exponent must be finite");
    // Continued-fraction search for a small-denominator representation.
    double x = v;
    std::int64_t h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    for (int i = 0; i < 40; ++i) {
        const double a = std::floor(x);
        if (std::abs(a) > 1e12)
            break;
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t h2 = ai * h0 + h1;
        const std::int64_t k2 = ai * k0 + k1;
        if (k2 > 10000)
            break;
        h1 = h0;
        h0 = h2;
        k1 = k0;
        k0 = k2;
        if (std::abs(static_cast<double>(h0) / static_cast<double>(k0) - v) <= 1e-12 * std::max(1.0, std::abs(v))) {
            auto e = from_ratio(h0, k0);
            e.value = v;
            return e;
        }
        const double frac = x - a;
        if (frac == 0.0)
            break;
        x = 1.0 / frac;
    }
    return Exponent{v, std::nullopt};
}

Expr Expr::constant(double v) {
    if (!std::isfinite(v))
        throw DomainError("constant must be finite");
    return Expr(Const{v});
}

Expr Expr::variable() { return Expr(Var{}); }

Expr Expr::unary(UnaryOp op, Expr arg) { return Expr(Unary{op, share(std::move(arg))}); }

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    return Expr(Binary{op, share(std::move(lhs)), share(std::move(rhs))});
}

Expr Expr::power(Expr base, Exponent e) { return Expr(Pow{share(std::move(base)), e}); }

std::optional<double> Expr::constant_value() const {
    if (const auto* c = std::get_if<Const>(&node_))
        return c->value;
    return std::nullopt;
}

double Expr::eval(double t) const {
    return std::visit(
        overloaded{
            [](const Const& c) { return c.value; },
            [&](const Var&) { return t; },
            [&](const Unary& u) {
                const double x = u.arg->eval(t);
                switch (u.op) {
                case UnaryOp::Neg: return -x;
                case UnaryOp::Sqrt:
                    if (x < 0.0)
                        throw EvalError("sqrt of negative value " + format_real(x));
                    return std::sqrt(x);
                case UnaryOp::Cbrt: return std::cbrt(x);
                case UnaryOp::Abs: return std::abs(x);
                case UnaryOp::Exp: return checked(std::exp(x), "exp");
                case UnaryOp::Ln:
                    if (x <= 0.0)
                        throw EvalError("ln of nonpositive value " + format_real(x));
                    return std::log(x);
                case UnaryOp::Sin: return std::sin(x);
                case UnaryOp::Cos: return std::cos(x);
                }
                return x;
            },
            [&](const Binary& b) {
                const double l = b.lhs->eval(t);
                const double r = b.rhs->eval(t);
                switch (b.op) {
                case BinaryOp::Add: return checked(l + r, "addition");
                case BinaryOp::Sub: return checked(l - r, "subtraction");
                case BinaryOp::Mul: return checked(l * r, "multiplication");
                case BinaryOp::Div:
                    if (r == 0.0)
                        throw EvalError("division by zero");
                    return checked(l / r, "division");
                }
                return l;
            },
            [&](const Pow& p) { return checked(power_value(p.base->eval(t), p.exponent), "power"); },
        },
        node_);
}

Expr operator+(const Expr& a, const Expr& b) {
    const auto ca = a.constant_value(), cb = b.constant_value();
    if (ca && cb)
        return Expr::constant(*ca + *cb);
    if (ca && *ca == 0.0)
        return b;
    if (cb && *cb == 0.0)
        return a;
    return Expr::binary(BinaryOp::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    const auto ca = a.constant_value(), cb = b.constant_value();
    if (ca && cb)
        return Expr::constant(*ca - *cb);
    if (cb && *cb == 0.0)
        return a;
    if (ca && *ca == 0.0)
        return -b;
    return Expr::binary(BinaryOp::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
    const auto ca = a.constant_value(), cb = b.constant_value();
    if (ca && cb)
        return Expr::constant(*ca * *cb);
    if ((ca && *ca == 0.0) || (cb && *cb == 0.0))
        return Expr::constant(0.0);
    if (ca && *ca == 1.0)
        return b;
    if (cb && *cb == 1.0)
        return a;
    return Expr::binary(BinaryOp::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    const auto ca = a.constant_value(), cb = b.constant_value();
    if (ca && cb && *cb != 0.0)
        return Expr::constant(*ca / *cb);
    if (ca && *ca == 0.0)
        return Expr::constant(0.0);
    if (cb && *cb == 1.0)
        return a;
    return Expr::binary(BinaryOp::Div, a, b);
}

Expr operator-(const Expr& a) {
    if (auto c = a.constant_value())
        return Expr::constant(-*c);
    if (const auto* u = std::get_if<Expr::Unary>(&a.node()); u && u->op == UnaryOp::Neg)
        return *u->arg;
    return Expr::unary(UnaryOp::Neg, a);
}

Expr pow(const Expr& base, Exponent e) {
    if (e.value == 1.0)
        return base;
    if (e.value == 0.0)
        return Expr::constant(1.0);
    return Expr::power(base, e);
}

Expr Expr::derivative() const {
    return std::visit(
        overloaded{
            [](const Const&) { return constant(0.0); },
            [](const Var&) { return constant(1.0); },
            [](const Unary& u) {
                const Expr& x = *u.arg;
                const Expr dx = x.derivative();
                switch (u.op) {
                case UnaryOp::Neg: return -dx;
                case UnaryOp::Sqrt: return dx / (constant(2.0) * unary(UnaryOp::Sqrt, x));
                case UnaryOp::Cbrt:
                    return dx / (constant(3.0) * pow(unary(UnaryOp::Cbrt, x), Exponent::from_ratio(2, 1)));
                case UnaryOp::Abs: return dx * (x / unary(UnaryOp::Abs, x));
                case UnaryOp::Exp: return unary(UnaryOp::Exp, x) * dx;
                case UnaryOp::Ln: return dx / x;
                case UnaryOp::Sin: return unary(UnaryOp::Cos, x) * dx;
                case UnaryOp::Cos: return -(unary(UnaryOp::Sin, x) * dx);
                }
                return dx;
            },
            [](const Binary& b) {
                const Expr& l = *b.lhs;
                const Expr& r = *b.rhs;
                const Expr dl = l.derivative();
                const Expr dr = r.derivative();
                switch (b.op) {
                case BinaryOp::Add: return dl + dr;
                case BinaryOp::Sub: return dl - dr;
                case BinaryOp::Mul: return dl * r + l * dr;
                case BinaryOp::Div:
                    if (!r.depends_on_t())
                        return dl / r;
                    return (dl * r - l * dr) / pow(r, Exponent::from_ratio(2, 1));
                }
                return dl;
            },
            [](const Pow& p) {
                const Expr& x = *p.base;
                Exponent lowered = p.exponent.ratio
                                       ? Exponent::from_ratio(p.exponent.ratio->first - p.exponent.ratio->second,
                                                              p.exponent.ratio->second)
                                       : Exponent{p.exponent.value - 1.0, std::nullopt};
                return constant(p.exponent.value) * pow(x, lowered) * x.derivative();
            },
        },
        node_);
}

Expr Expr::substitute(const Expr& inner) const {
    return std::visit(overloaded{
                          [&](const Const&) { return *this; },
                          [&](const Var&) { return inner; },
                          [&](const Unary& u) { return unary(u.op, u.arg->substitute(inner)); },
                          [&](const Binary& b) {
                              return binary(b.op, b.lhs->substitute(inner), b.rhs->substitute(inner));
                          },
                          [&](const Pow& p) { return power(p.base->substitute(inner), p.exponent); },
                      },
                      node_);
}

bool Expr::depends_on_t() const {
    return std::visit(overloaded{
                          [](const Const&) { return false; },
                          [](const Var&) { return true; },
                          [](const Unary& u) { return u.arg->depends_on_t(); },
                          [](const Binary& b) { return b.lhs->depends_on_t() || b.rhs->depends_on_t(); },
                          [](const Pow& p) { return p.base->depends_on_t(); },
                      },
                      node_);
}

std::optional<int> Expr::polynomial_degree() const {
    if (!depends_on_t())
        return 0;
    return std::visit(
        overloaded{
            [](const Const&) -> std::optional<int> { return 0; },
            [](const Var&) -> std::optional<int> { return 1; },
            [](const Unary& u) -> std::optional<int> {
                if (u.op == UnaryOp::Neg)
                    return u.arg->polynomial_degree();
                return std::nullopt;
            },
            [](const Binary& b) -> std::optional<int> {
                const auto l = b.lhs->polynomial_degree();
                const auto r = b.rhs->polynomial_degree();
                if (!l || !r)
                    return std::nullopt;
                switch (b.op) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return std::max(*l, *r);
                case BinaryOp::Mul: return *l + *r;
                case BinaryOp::Div:
                    if (b.rhs->depends_on_t())
                        return std::nullopt;
                    return *l;
                }
                return std::nullopt;
            },
            [](const Pow& p) -> std::optional<int> {
                const auto d = p.base->polynomial_degree();
                if (!d || !p.exponent.is_integer() || p.exponent.value < 0 || p.exponent.value > 1000)
                    return std::nullopt;
                return *d * static_cast<int>(p.exponent.value);
            },
        },
        node_);
}

bool Expr::is_rational_polynomial() const {
    return std::visit(overloaded{
                          [](const Const&) { return true; },
                          [](const Var&) { return true; },
                          [](const Unary& u) { return u.op == UnaryOp::Neg && u.arg->is_rational_polynomial(); },
                          [](const Binary& b) {
                              if (b.op == BinaryOp::Div && b.rhs->depends_on_t())
                                  return false;
                              return b.lhs->is_rational_polynomial() && b.rhs->is_rational_polynomial();
                          },
                          [](const Pow& p) {
                              return p.exponent.is_integer() && p.exponent.value >= 0 &&
                                     p.exponent.value <= 1000 && p.base->is_rational_polynomial();
                          },
                      },
                      node_);
}

Rational Expr::eval_exact(const Rational& t) const {
    return std::visit(
        overloaded{
            [](const Const& c) { return to_rational(c.value); },
            [&](const Var&) { return t; },
            [&](const Unary& u) -> Rational {
                if (u.op != UnaryOp::Neg)
                    throw DomainError(std::string("exact evaluation does not support ") + unary_name(u.op));
                return -u.arg->eval_exact(t);
            },
            [&](const Binary& b) -> Rational {
                const Rational l = b.lhs->eval_exact(t);
                const Rational r = b.rhs->eval_exact(t);
                switch (b.op) {
                case BinaryOp::Add: return l + r;
                case BinaryOp::Sub: return l - r;
                case BinaryOp::Mul: return l * r;
                case BinaryOp::Div:
                    if (r == 0)
                        throw EvalError("division by zero");
                    return l / r;
                }
                return l;
            },
            [&](const Pow& p) -> Rational {
                if (!p.exponent.is_integer() || p.exponent.value < 0)
                    throw DomainError("exact evaluation needs a nonnegative integer exponent");
                return rational_pow(p.base->eval_exact(t), p.exponent.ratio->first);
            },
        },
        node_);
}

double Expr::singularity_margin(double t) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        overloaded{
            [](const Const&) { return inf; },
            [](const Var&) { return inf; },
            [&](const Unary& u) {
                const double inner = u.arg->singularity_margin(t);
                switch (u.op) {
                case UnaryOp::Sqrt:
                case UnaryOp::Cbrt:
                case UnaryOp::Abs:
                case UnaryOp::Ln: return std::min(inner, std::abs(u.arg->eval(t)));
                default: return inner;
                }
            },
            [&](const Binary& b) {
                double m = std::min(b.lhs->singularity_margin(t), b.rhs->singularity_margin(t));
                if (b.op == BinaryOp::Div)
                    m = std::min(m, std::abs(b.rhs->eval(t)));
                return m;
            },
            [&](const Pow& p) {
                const double inner = p.base->singularity_margin(t);
                if (p.exponent.is_integer() && p.exponent.value >= 0)
                    return inner;
                return std::min(inner, std::abs(p.base->eval(t)));
            },
        },
        node_);
}

std::string Expr::to_string() const {
    return std::visit(
        overloaded{
            [](const Const& c) { return format_real(c.value); },
            [](const Var&) { return std::string("t"); },
            [](const Unary& u) {
                if (u.op == UnaryOp::Neg)
                    return "-(" + u.arg->to_string() + ")";
                return std::string(unary_name(u.op)) + "(" + u.arg->to_string() + ")";
            },
            [](const Binary& b) {
                return "(" + b.lhs->to_string() + " " + binary_symbol(b.op) + " " + b.rhs->to_string() + ")";
            },
            [](const Pow& p) {
                std::string e = p.exponent.ratio && p.exponent.ratio->second != 1
                                    ? std::to_string(p.exponent.ratio->first) + "/" +
                                          std::to_string(p.exponent.ratio->second)
                                    : format_real(p.exponent.value);
                return "(" + p.base->to_string() + ")^(" + e + ")";
            },
        },
        node_);
}

bool operator==(const Expr& a, const Expr& b) {
    return std::visit(
        overloaded{
            [](const Expr::Const& x, const Expr::Const& y) { return x.value == y.value; },
            [](const Expr::Var&, const Expr::Var&) { return true; },
            [](const Expr::Unary& x, const Expr::Unary& y) { return x.op == y.op && *x.arg == *y.arg; },
            [](const Expr::Binary& x, const Expr::Binary& y) {
                return x.op == y.op && *x.lhs == *y.lhs && *x.rhs == *y.rhs;
            },
            [](const Expr::Pow& x, const Expr::Pow& y) { return x.exponent == y.exponent && *x.base == *y.base; },
            [](const auto&, const auto&) { return false; },
        },
        a.node(), b.node());
}

RealFunction::RealFunction(Expr body, std::optional<Monotonicity> claim)
    : body_(std::move(body)), derivative_(body_.derivative()), claim_(claim) {}

double eval(const RealFunction& f, double x) { return f.body().eval(x); }

double eval_derivative(const RealFunction& f, double x) { return f.derivative().eval(x); }

RealFunction compose(const RealFunction& outer, const RealFunction& inner) {
    return RealFunction(outer.body().substitute(inner.body()));
}

RealFunction parse_function(std::string_view src) { return RealFunction(parse_expr(src)); }

} // namespace nabla
