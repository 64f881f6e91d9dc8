#include <doctest.h>

#include "nabla/error.hpp"
#include "nabla/verify.hpp"

using namespace nabla;

TEST_CASE("suite names") {
    CHECK(suite_names() == std::vector<std::string>{"fracdiff", "mvt", "chain", "series"});
    CHECK_THROWS_AS(run_suite("nope"), DomainError);
    CHECK_THROWS_AS(run_suites("nope"), DomainError);
}

TEST_CASE("every suite passes at the default seed") {
    for (const auto& r : run_suites("all")) {
        CAPTURE(r.name);
        CAPTURE(r.first_counterexample.value_or(""));
        CHECK(r.cases == 300);
        CHECK(r.passed == 300);
        CHECK(r.ok());
    }
}

TEST_CASE("suites pass at other seeds") {
    for (std::uint64_t seed : {1ull, 77ull, 123456789ull}) {
        for (const auto& r : run_suites("all", {seed, 100})) {
            CAPTURE(seed);
            CAPTURE(r.name);
            CAPTURE(r.first_counterexample.value_or(""));
            CHECK(r.ok());
        }
    }
}

TEST_CASE("reports are deterministic") {
    const VerifyOptions opts{99, 60};
    for (const auto& name : suite_names()) {
        const auto a = run_suite(name, opts), b = run_suite(name, opts);
        CHECK(a.passed == b.passed);
        CHECK(a.failed == b.failed);
        CHECK(a.first_counterexample == b.first_counterexample);
        CHECK(a.diagnostics == b.diagnostics);
    }
}

TEST_CASE("a prefix of cases replays the same cases") {
    // Case i depends only on (seed, suite, i).
    const auto small = run_suite("mvt", {5, 40}), large = run_suite("mvt", {5, 80});
    CHECK(small.cases == 40);
    CHECK(large.cases == 80);
    for (std::size_t i = 0; i < small.diagnostics.size(); ++i)
        CHECK(small.diagnostics[i] == large.diagnostics[i]);
}
