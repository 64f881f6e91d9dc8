#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace nabla {

enum class OrderClass {
    OddReciprocal, // 1/q with q odd; negative bases have real powers
    General,
};

/// A derivative order p/q in (0, 1], kept exact and in lowest terms.
struct FracOrder {
    std::int64_t p = 1;
    std::int64_t q = 1;
    OrderClass cls = OrderClass::OddReciprocal;

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    bool is_one() const { return p == q; }
    bool odd_reciprocal() const { return cls == OrderClass::OddReciprocal; }
    std::string to_string() const;
    bool operator==(const FracOrder&) const = default;
};

/// Reduces p/q and classifies it. Throws DomainError outside (0, 1].
FracOrder classify_alpha(std::int64_t p, std::int64_t q);

/// Accepts `p/q` or an integer (`1`). Decimal orders are rejected.
FracOrder parse_alpha(std::string_view text);

/// x^alpha over the reals: ordinary power for x >= 0, the real odd root for
/// x < 0 when alpha is an odd reciprocal. Throws DomainError otherwise.
double signed_power(double x, const FracOrder& alpha);

} // namespace nabla
