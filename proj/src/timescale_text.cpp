#include "nabla/error.hpp"
#include "nabla/format.hpp"
#include "nabla/timescale.hpp"

#include <string_view>

namespace nabla {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

Piece parse_interval_body(std::string_view body) {
    const auto parts = split(body, ':');
    if (parts.size() != 2)
        throw ParseError("interval expects '<a>:<b>', got '" + std::string(body) + "'");
    return {parse_real(parts[0], "interval bound"), parse_real(parts[1], "interval bound")};
}

Piece parse_piece(std::string_view text) {
    if (starts_with(text, "point:")) {
        const double v = parse_real(text.substr(6), "point");
        return {v, v};
    }
    if (starts_with(text, "interval:")) {
        auto p = parse_interval_body(text.substr(9));
        if (!(p.lo < p.hi))
            throw ParseError("interval piece needs a < b in '" + std::string(text) + "'");
        return p;
    }
    throw ParseError("unknown union piece '" + std::string(text) + "'");
}

} // namespace

TimeScale parse_timescale(const std::string& text) {
    const std::string_view s = text;
    try {
        if (s == "Z")
            return TimeScale::integers();
        if (s == "N")
            return TimeScale::naturals();
        if (starts_with(s, "hZ:"))
            return TimeScale::multiples(parse_real(s.substr(3), "grid step"));
        if (starts_with(s, "interval:")) {
            const auto p = parse_interval_body(s.substr(9));
            return TimeScale::interval(p.lo, p.hi);
        }
        if (starts_with(s, "finite:")) {
            std::vector<double> pts;
            for (auto part : split(s.substr(7), ','))
                pts.push_back(parse_real(part, "finite point"));
            return TimeScale::finite(std::move(pts));
        }
        if (starts_with(s, "union:(") && s.back() == ')') {
            std::vector<Piece> pieces;
            for (auto part : split(s.substr(7, s.size() - 8), ';'))
                pieces.push_back(parse_piece(part));
            return TimeScale::union_of(std::move(pieces));
        }
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid time scale '") + text + "': " + e.what());
    }
    throw ParseError("unrecognized time scale '" + text + "'");
}

std::string format_timescale(const TimeScale& ts) {
    const auto& r = ts.repr();
    if (const auto* f = std::get_if<FiniteSet>(&r)) {
        std::string s = "finite:";
        for (std::size_t i = 0; i < f->points.size(); ++i)
            s += (i ? "," : "") + format_real(f->points[i]);
        return s;
    }
    if (const auto* g = std::get_if<UniformGrid>(&r)) {
        if (g->offset == 0.0 && !g->hi) {
            if (!g->lo)
                return g->step == 1.0 ? "Z" : "hZ:" + format_real(g->step);
            if (g->step == 1.0 && *g->lo == 1)
                return "N";
        }
        if (g->lo && g->hi)
            return format_timescale(TimeScale::finite(ts.points()));
        throw DomainError("grid " + ts.describe() + " has no text form");
    }
    if (const auto* c = std::get_if<ContinuousInterval>(&r))
        return "interval:" + format_real(c->a) + ":" + format_real(c->b);
    const auto& u = std::get<PieceUnion>(r);
    std::string s = "union:(";
    for (std::size_t i = 0; i < u.pieces.size(); ++i) {
        const auto& p = u.pieces[i];
        s += i ? ";" : "";
        s += p.is_point() ? "point:" + format_real(p.lo)
                          : "interval:" + format_real(p.lo) + ":" + format_real(p.hi);
    }
    return s + ")";
}

} // namespace nabla
