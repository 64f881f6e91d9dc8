#include "nabla/error.hpp"
#include "nabla/expr.hpp"
#include "nabla/format.hpp"

#include <cctype>
#include <numbers>

namespace nabla {

namespace {

// expr    := term (('+'|'-') term)*
// term    := unary (('*'|'/') unary)*
// unary   := ('-'|'+') unary | power
// power   := primary ('^' unary)?
// primary := number | 't' | 'pi' | name '(' expr ')' | '(' expr ')'
class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse() {
        skip_ws();
        if (pos_ == src_.size())
            fail("empty expression");
        Expr e = expr();
        skip_ws();
        if (pos_ != src_.size())
            fail(std::string("unexpected '") + src_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_ + 1); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ == src_.size())
                fail(std::string("expected '") + c + "' before end of input");
            fail(std::string("expected '") + c + "' but found '" + src_[pos_] + "'");
        }
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = Expr::binary(BinaryOp::Add, lhs, term());
            else if (accept('-'))
                lhs = Expr::binary(BinaryOp::Sub, lhs, term());
            else
                return lhs;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = Expr::binary(BinaryOp::Mul, lhs, unary());
            else if (accept('/'))
                lhs = Expr::binary(BinaryOp::Div, lhs, unary());
            else
                return lhs;
        }
    }

    Expr unary() {
        skip_ws();
        if (accept('+'))
            return unary();
        if (accept('-')) {
            skip_ws();
            const bool literal = pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                                                        src_[pos_] == '.');
            Expr operand = unary();
            // A negated literal is a negative constant, matching how constants print.
            if (literal && std::holds_alternative<Expr::Const>(operand.node()))
                return Expr::constant(-*operand.constant_value());
            return Expr::unary(UnaryOp::Neg, operand);
        }
        return power();
    }

    Expr power() {
        Expr base = primary();
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '^') {
            const std::size_t at = pos_;
            ++pos_;
            Expr exponent = unary();
            if (exponent.depends_on_t()) {
                pos_ = at;
                fail("exponent of '^' must be constant");
            }
            double value = 0.0;
            try {
                value = exponent.eval(0.0);
            } catch (const EvalError& e) {
                pos_ = at;
                fail(std::string("exponent does not evaluate: ") + e.what());
            }
            return Expr::power(base, Exponent::from_value(value));
        }
        return base;
    }

    Expr primary() {
        skip_ws();
        if (pos_ == src_.size())
            fail("unexpected end of input");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
            const std::string_view name = src_.substr(start, pos_ - start);
            if (name == "t")
                return Expr::variable();
            if (name == "pi")
                return Expr::constant(std::numbers::pi);
            static constexpr std::pair<std::string_view, UnaryOp> functions[] = {
                {"sqrt", UnaryOp::Sqrt}, {"cbrt", UnaryOp::Cbrt}, {"abs", UnaryOp::Abs}, {"exp", UnaryOp::Exp},
                {"ln", UnaryOp::Ln},     {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},
            };
            for (const auto& [fname, op] : functions) {
                if (name == fname) {
                    expect('(');
                    Expr arg = expr();
                    expect(')');
                    return Expr::unary(op, arg);
                }
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'");
        }
        fail(std::string("unexpected '") + c + "'");
    }

    Expr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
                ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                digits();
            else
                pos_ = save;
        }
        const auto text = src_.substr(start, pos_ - start);
        try {
            return Expr::constant(parse_real(text, "literal"));
        } catch (const ParseError&) {
            pos_ = start;
            fail("malformed number '" + std::string(text) + "'");
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace

Expr parse_expr(std::string_view src) { return Parser(src).parse(); }

} // namespace nabla
