#include "nabla/format.hpp"

#include "nabla/error.hpp"

#include <charconv>
#include <cmath>

namespace nabla {

std::string format_real(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_real(std::string_view text, std::string_view what) {
    std::string_view body = text;
    if (!body.empty() && body.front() == '+')
        body.remove_prefix(1);
    double value = 0.0;
    auto res = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || res.ec != std::errc{} || res.ptr != body.data() + body.size() || !std::isfinite(value))
        throw ParseError("invalid " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

} // namespace nabla
