#pragma once

#include "nabla/fracdiff.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nabla {

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    int cases = 300;
    LimitOptions limits;
};

struct SuiteReport {
    std::string name;
    std::uint64_t seed = 0;
    int cases = 0;
    int passed = 0;
    int failed = 0;
    std::optional<std::string> first_counterexample;
    std::vector<std::string> diagnostics;

    bool ok() const { return failed == 0; }
};

/// Suite names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs one seeded property suite: fracdiff, mvt, chain or series.
/// Case i draws from its own generator, so a failing case replays from
/// (seed, suite, i) alone.
SuiteReport run_suite(const std::string& name, const VerifyOptions& opts = {});

/// `all` or a single suite name.
std::vector<SuiteReport> run_suites(const std::string& which, const VerifyOptions& opts = {});

} // namespace nabla
