#include <doctest.h>

#include "oracles.hpp"

#include "nabla/error.hpp"
#include "nabla/series.hpp"

#include <cmath>

using namespace nabla;

namespace {

const FracOrder kOne = classify_alpha(1, 1);
const FracOrder kHalf = classify_alpha(1, 2);

Rational ipow(const Rational& x, int n) {
    Rational out = 1;
    for (int i = 0; i < n; ++i)
        out *= x;
    return out;
}

} // namespace

TEST_CASE("general product rule") {
    const auto z = TimeScale::integers();
    const auto t = parse_function("t");
    for (int x = -5; x <= 5; ++x)
        CHECK(general_product_rule(z, {t, t, t}, x, kOne) == 3.0 * x * x - 3.0 * x + 1);
    CHECK(general_product_rule(z, {t, t}, 3, kOne) == 5);
    CHECK(general_product_rule(z, {t, parse_function("0"), parse_function("exp(t)")}, 2, kHalf) == 0);
    CHECK_THROWS_AS(general_product_rule(z, {t}, 2, kOne), DomainError);
    CHECK(product_function({t, parse_function("t+1")})(2) == 6);
}

TEST_CASE("power sums on Z") {
    const auto z = TimeScale::integers();
    const auto f = parse_function("t^2");
    const auto p = power_sum(z, f, 2, kOne, 1);
    CHECK(p.value == 5);
    REQUIRE(p.exact);
    CHECK(*p.exact == 5);
    CHECK(power_sum_bruteforce(z, f, 2, 1).value == 5);
    for (int t = -5; t <= 10; ++t)
        for (unsigned m = 1; m <= 6; ++m) {
            CAPTURE(t);
            CAPTURE(m);
            const Rational tr = t;
            const Rational closed = (ipow(tr, 2 * m + 2) - ipow(tr - 1, 2 * m + 2)) / (2 * tr - 1);
            Rational direct = 0;
            for (unsigned i = 0; i <= m; ++i)
                direct += ipow(tr - 1, 2 * i) * ipow(tr, 2 * m - 2 * i);
            CHECK(closed == direct);
            const auto ps = power_sum(z, f, t, kOne, m);
            REQUIRE(ps.exact);
            CHECK(*ps.exact == closed);
            CHECK(*power_sum_bruteforce(z, f, t, m).exact == closed);
        }
}

TEST_CASE("power sum edge cases") {
    const auto z = TimeScale::integers();
    CHECK(power_sum_bruteforce(z, parse_function("t^2"), 4, 0).value == 1);
    CHECK(power_sum_bruteforce(z, parse_function("3"), 4, 5).value == 6 * 243);
    CHECK(power_sum(z, parse_function("t^2 + t"), 4, kOne, 1).value == 20 + 12);
    CHECK_THROWS_AS(power_sum(z, parse_function("3"), 4, kOne, 2), DomainError);
    CHECK_THROWS_AS(power_sum(z, parse_function("t^2"), 4, kOne, 0), DomainError);
    CHECK_THROWS_AS(power_sum(TimeScale::interval(0, 1), parse_function("t"), 0.5, kOne, 2), DomainError);
    const auto h = power_sum(TimeScale::multiples(0.5), parse_function("exp(t)"), 1, kHalf, 3);
    CHECK_FALSE(h.exact);
    const double a = std::exp(0.5), b = std::exp(1.0);
    CHECK(h.value == doctest::Approx(a * a * a + a * a * b + a * b * b + b * b * b).epsilon(1e-12));
}

TEST_CASE("backward expansion") {
    const auto n = TimeScale::naturals();
    const auto f = parse_function("t^3");
    const auto e = backward_expansion(n, f, 4, 1, kOne);
    CHECK(e.value == 64);
    CHECK(e.anchor_value == 1);
    CHECK(e.terms == std::vector<double>{37, 19, 7});
    // (1/3)(t^3 - t) = sum_{j=2}^t j(j-1)
    CHECK((64 - 4) / 3 == 2 + 6 + 12);
    const auto one = backward_expansion(n, f, 4, 3, kHalf);
    CHECK(one.terms.size() == 1);
    CHECK(one.value == 64);
    CHECK_THROWS_AS(backward_expansion(TimeScale::interval(0, 1), f, 0.5, 0.2, kOne), DomainError);
    CHECK_THROWS_AS(backward_expansion(TimeScale::multiples(2), f, 4, 1, kOne), DomainError);
    CHECK_THROWS_AS(backward_expansion(n, f, 4, 4, kOne), DomainError);
}

TEST_CASE("cube sums from the expansion") {
    const auto n = TimeScale::naturals();
    const auto f = parse_function("t^3");
    for (int t = 2; t <= 50; ++t) {
        const auto e = backward_expansion(n, f, t, 1, kOne);
        long long sum = 0;
        for (int j = 2; j <= t; ++j)
            sum += static_cast<long long>(j) * (j - 1);
        // Term j is 3j(j-1) + 1 for j = t, t-1, ..., 2.
        REQUIRE(e.terms.size() == static_cast<std::size_t>(t - 1));
        double reindexed = 0;
        for (std::size_t k = 0; k < e.terms.size(); ++k) {
            const double j = t - static_cast<double>(k);
            CHECK(e.terms[k] == 3 * j * (j - 1) + 1);
            reindexed += (e.terms[k] - 1) / 3;
        }
        CHECK(reindexed == static_cast<double>(sum));
        CHECK(static_cast<double>(sum) == (static_cast<double>(t) * t * t - t) / 3);
        CHECK(e.value == static_cast<double>(t) * t * t);
    }
}

TEST_CASE("property: product rule equals the derivative of the product") {
    oracle::Rng rng(11);
    const char* polys[] = {"t", "t^2 - 1", "3*t + 2", "t^3 - 2*t", "0.5*t^2 + t"};
    const auto scales = {TimeScale::integers(), TimeScale::multiples(0.25),
                         TimeScale::finite({-2, -1.5, 0, 0.5, 1, 2.5, 3})};
    for (const auto& ts : scales)
        for (int i = 0; i < 100; ++i) {
            std::vector<RealFunction> fs;
            for (int k = 0, m = static_cast<int>(rng.integer(2, 4)); k < m; ++k)
                fs.push_back(parse_function(polys[rng.integer(0, 4)]));
            const double t = ts.nearest(rng.uniform(-1.5, 2.5));
            if (!tk_contains(ts, t))
                continue;
            const auto alpha = i % 2 ? kOne : kHalf;
            const double direct = nabla::nabla(ts, product_function(fs), t, alpha).value;
            const double v = general_product_rule(ts, fs, t, alpha);
            CHECK(std::abs(v - direct) <= 1e-9 * (1 + std::abs(direct)));
            if (fs.size() == 2)
                CHECK(v == product_nabla(ts, fs[0], fs[1], t, alpha));
        }
}

TEST_CASE("property: closed power sum matches direct summation") {
    oracle::Rng rng(12);
    const auto z = TimeScale::integers();
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const std::string text = std::to_string(rng.integer(-3, 3)) + "*t^2 + " + std::to_string(rng.integer(-3, 3)) +
                                 "*t + " + std::to_string(rng.integer(-3, 3));
        const auto f = parse_function(text);
        const int t = static_cast<int>(rng.integer(-20, 20));
        const unsigned m = static_cast<unsigned>(rng.integer(1, 8));
        if (f(t) == f(t - 1)) {
            CHECK_THROWS_AS(power_sum(z, f, t, kOne, m), DomainError);
            continue;
        }
        const auto ps = power_sum(z, f, t, kOne, m);
        const auto bf = power_sum_bruteforce(z, f, t, m);
        REQUIRE(ps.exact);
        CHECK(*ps.exact == *bf.exact);
        CHECK(std::abs(ps.value - bf.value) <= 1e-9 * (1 + std::abs(bf.value)));
        ++checked;
    }
    CHECK(checked > 300);
}

TEST_CASE("property: telescoping on finite scales") {
    oracle::Rng rng(13);
    const char* fns[] = {"t^3 - t", "sin(t)", "exp(t/2)", "1/(t^2 + 1)"};
    for (int i = 0; i < 200; ++i) {
        std::vector<double> pts;
        for (int k = 0; k < 7; ++k)
            pts.push_back(rng.uniform(-3, 3));
        const auto ts = TimeScale::finite(pts);
        const auto sorted = ts.points();
        const auto f = parse_function(fns[i % 4]);
        const double t = sorted.back();
        const auto alpha = i % 2 ? kOne : kHalf;
        for (std::size_t j = 1; j + 1 < sorted.size(); ++j) {
            const auto e = backward_expansion(ts, f, t, sorted[j], alpha);
            CHECK(e.terms.size() == sorted.size() - 1 - j);
            CHECK(std::abs(e.value - f(t)) <= 1e-12 * (1 + std::abs(f(t))));
        }
    }
}
