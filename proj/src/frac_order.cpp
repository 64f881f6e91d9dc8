#include "nabla/frac_order.hpp"

#include "nabla/error.hpp"
#include "nabla/format.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

namespace nabla {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError("order must be 'p/q' with integers p, q, got '" + std::string(whole) + "'");
    return v;
}

} // namespace

std::string FracOrder::to_string() const {
    return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q);
}

FracOrder classify_alpha(std::int64_t p, std::int64_t q) {
    if (q <= 0 || p <= 0 || p > q)
        throw DomainError("order " + std::to_string(p) + "/" + std::to_string(q) + " is outside (0, 1]");
    const auto g = std::gcd(p, q);
    p /= g;
    q /= g;
    const bool odd_reciprocal = p == 1 && q % 2 == 1;
    return FracOrder{p, q, odd_reciprocal ? OrderClass::OddReciprocal : OrderClass::General};
}

FracOrder parse_alpha(std::string_view text) {
    const auto slash = text.find('/');
    const std::int64_t p = parse_int(text.substr(0, slash), text);
    const std::int64_t q = slash == std::string_view::npos ? 1 : parse_int(text.substr(slash + 1), text);
    try {
        return classify_alpha(p, q);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

double signed_power(double x, const FracOrder& alpha) {
    if (alpha.is_one())
        return x;
    if (x >= 0.0)
        return std::pow(x, alpha.value());
    if (!alpha.odd_reciprocal())
        throw DomainError("(" + format_real(x) + ")^(" + alpha.to_string() + ") is not real");
    if (alpha.q == 3)
        return std::cbrt(x);
    return -std::pow(-x, alpha.value());
}

} // namespace nabla
