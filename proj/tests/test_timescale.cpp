#include <doctest.h>

#include "oracles.hpp"

#include "nabla/error.hpp"
#include "nabla/timescale.hpp"

#include <algorithm>

using namespace nabla;

TEST_CASE("jump operators on the integers") {
    const auto z = TimeScale::integers();
    CHECK(rho(z, 3) == 2);
    CHECK(sigma(z, 3) == 4);
    CHECK(nu(z, 3) == 1);
    CHECK(tk_contains(z, -1000));
}

TEST_CASE("jump operators on 2Z") {
    const auto z2 = TimeScale::multiples(2.0);
    for (double t : {-4.0, 0.0, 4.0, 10.0}) {
        CHECK(rho(z2, t) == t - 2);
        CHECK(nu(z2, t) == 2);
    }
    CHECK_THROWS_AS(rho(z2, 3.0), DomainError);
}

TEST_CASE("continuous interval") {
    const auto iv = TimeScale::interval(0, 1);
    CHECK(rho(iv, 0.5) == 0.5);
    CHECK(sigma(iv, 1.0) == 1.0);
    CHECK(nu(iv, 0.7) == 0.0);
    CHECK(classify_point(iv, 0.0).kind == PointKind::LeftDense);
    CHECK(tk_contains(iv, 0.0));
    CHECK(iterate_rho(iv, 0.5, 2) == 0.5);
    CHECK_THROWS_AS(rho(iv, 1.5), DomainError);
}

TEST_CASE("finite set and unions") {
    const auto fs = TimeScale::finite({7, 1, 3});
    CHECK(sigma(fs, 3) == 7);
    CHECK(rho(fs, 1) == 1);
    CHECK(sigma(fs, 7) == 7);

    const auto u = TimeScale::union_of({{0, 1}, {2, 2}});
    CHECK(nu(u, 2) == 1);
    CHECK(classify_point(u, 1).kind == PointKind::LeftDense);
    CHECK(classify_point(u, 2).kind == PointKind::LeftScattered);
    CHECK(classify_point(u, 2).graininess == 1);
}

TEST_CASE("T^k drops a right-scattered minimum only") {
    const auto n = TimeScale::naturals();
    CHECK_FALSE(tk_contains(n, 1));
    CHECK(tk_contains(n, 2));
    CHECK(classify_point(n, 5).kind == PointKind::LeftScattered);
    CHECK(classify_point(n, 5).graininess == 1);
    CHECK_FALSE(tk_contains(TimeScale::finite({0, 1}), 0));
    CHECK(tk_contains(TimeScale::union_of({{0, 1}, {3, 3}}), 0));
}

TEST_CASE("restrict normalizes") {
    const auto n = restrict(TimeScale::naturals(), 1, 10);
    std::vector<double> expect;
    for (int k = 1; k <= 10; ++k)
        expect.push_back(k);
    CHECK(n == TimeScale::finite(expect));

    CHECK(restrict(TimeScale::interval(0, 5), 1, 3) == TimeScale::interval(1, 3));

    const auto u = TimeScale::union_of({{0, 1}, {2, 2}, {3, 4}});
    CHECK(restrict(u, 0, 2) == TimeScale::union_of({{0, 1}, {2, 2}}));

    CHECK_THROWS_AS(restrict(TimeScale::naturals(), 3, 3), DomainError);
    CHECK_THROWS_AS(restrict(TimeScale::naturals(), 0, 3), DomainError);
}

TEST_CASE("iterate_rho") {
    CHECK(iterate_rho(TimeScale::naturals(), 4, 3) == 1);
    CHECK(iterate_rho(TimeScale::naturals(), 4, 30) == 1);
    CHECK(iterate_rho(TimeScale::integers(), 4, 0) == 4);
    CHECK(iterate_rho(TimeScale::finite({1, 2, 5}), 5, 1) == 2);
}

TEST_CASE("union merges overlapping and touching pieces") {
    const auto u = TimeScale::union_of({{2, 3}, {0, 1}, {1, 2}});
    CHECK(u == TimeScale::interval(0, 3));
    CHECK(TimeScale::union_of({{1, 1}, {2, 2}}) == TimeScale::finite({1, 2}));
    CHECK_THROWS_AS(TimeScale::union_of({}), DomainError);
    CHECK_THROWS_AS(TimeScale::interval(1, 1), DomainError);
    CHECK_THROWS_AS(TimeScale::grid(0, 0), DomainError);
}

TEST_CASE("membership tolerance") {
    const auto h = TimeScale::multiples(0.1);
    CHECK(h.contains(0.3));
    CHECK(h.contains(0.1 * 7));
    CHECK_FALSE(h.contains(0.35));
    CHECK(TimeScale::interval(0, 1).contains(1.0 + 1e-13));
    CHECK_FALSE(TimeScale::finite({0.1}).contains(0.1 + 1e-17 + 1e-16));
}

TEST_CASE("text form round trips") {
    for (const char* text : {"Z", "N", "hZ:0.5", "interval:-1:1", "finite:1,3,7", "union:(interval:0:1;point:2)"}) {
        CAPTURE(text);
        const auto ts = parse_timescale(text);
        CHECK(parse_timescale(format_timescale(ts)) == ts);
    }
    CHECK(parse_timescale("hZ:2") == TimeScale::multiples(2));
    CHECK(parse_timescale("union:(point:0;point:1)") == TimeScale::finite({0, 1}));
    for (const char* bad : {"", "R", "hZ:", "hZ:-1", "interval:1:0", "finite:", "finite:1,,2", "union:(point:1",
                            "union:(line:1)", "z"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_timescale(bad), ParseError);
    }
}

namespace {

TimeScale random_scale(oracle::Rng& rng) {
    switch (rng.integer(0, 4)) {
    case 0: return TimeScale::integers();
    case 1: return TimeScale::grid(rng.uniform(-1, 1), rng.uniform(0.1, 2.0));
    case 2: {
        std::vector<double> pts;
        for (int i = 0, n = static_cast<int>(rng.integer(1, 15)); i < n; ++i)
            pts.push_back(rng.uniform(-10, 10));
        return TimeScale::finite(pts);
    }
    case 3: return TimeScale::interval(rng.uniform(-5, 0), rng.uniform(0.5, 5));
    default: {
        const double a = rng.uniform(-5, -3);
        return TimeScale::union_of({{a, a}, {-2, rng.uniform(-1, 1)}, {2, 2}, {3, rng.uniform(3.5, 5)}});
    }
    }
}

double random_member(oracle::Rng& rng, const TimeScale& ts) {
    if (const auto* g = std::get_if<UniformGrid>(&ts.repr()))
        return g->at(rng.integer(-30, 30));
    const auto pieces = ts.pieces();
    const auto& p = pieces[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(pieces.size()) - 1))];
    return p.is_point() ? p.lo : rng.uniform(p.lo, p.hi);
}

} // namespace

TEST_CASE("property: rho <= t <= sigma, both members, nu consistent with classification") {
    oracle::Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const auto ts = random_scale(rng);
        const double t = random_member(rng, ts);
        CAPTURE(ts.describe());
        CAPTURE(t);
        const double r = rho(ts, t), s = sigma(ts, t);
        CHECK(r <= t);
        CHECK(t <= s);
        CHECK(ts.contains(r));
        CHECK(ts.contains(s));
        const auto pc = classify_point(ts, t);
        CHECK(pc.graininess >= 0.0);
        CHECK((pc.kind == PointKind::LeftDense) == (pc.graininess == 0.0));
    }
}

TEST_CASE("property: finite-set jumps agree with a linear scan") {
    oracle::Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        std::vector<double> pts;
        for (int k = 0, n = static_cast<int>(rng.integer(1, 20)); k < n; ++k)
            pts.push_back(static_cast<double>(rng.integer(-50, 50)) / 4.0);
        const auto ts = TimeScale::finite(pts);
        for (double t : ts.points()) {
            CHECK(rho(ts, t) == oracle::rho_scan(pts, t));
            CHECK(sigma(ts, t) == oracle::sigma_scan(pts, t));
        }
    }
}

TEST_CASE("property: restrict keeps exactly the members inside [a, b]") {
    oracle::Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        const auto ts = random_scale(rng);
        double a = random_member(rng, ts), b = random_member(rng, ts);
        if (a == b)
            continue;
        if (a > b)
            std::swap(a, b);
        const auto r = restrict(ts, a, b);
        for (int k = 0; k < 50; ++k) {
            const double x = rng.uniform(a - 2, b + 2);
            const double probe = ts.contains(x) ? x : ts.nearest(x);
            CHECK(r.contains(probe) == (ts.contains(probe) && probe >= a && probe <= b));
        }
    }
}

TEST_CASE("property: iterate_rho composes") {
    oracle::Rng rng(14);
    for (int i = 0; i < 500; ++i) {
        const auto ts = random_scale(rng);
        const double t = random_member(rng, ts);
        const auto m = static_cast<std::uint64_t>(rng.integer(0, 10));
        const auto n = static_cast<std::uint64_t>(rng.integer(0, 10));
        CHECK(iterate_rho(ts, t, m + n) == iterate_rho(ts, iterate_rho(ts, t, m), n));
        CHECK(iterate_rho(ts, t, m + 1) <= iterate_rho(ts, t, m));
    }
}
