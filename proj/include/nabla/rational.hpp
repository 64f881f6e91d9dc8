#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace nabla {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a binary double as a rational.
Rational to_rational(double x);

} // namespace nabla
