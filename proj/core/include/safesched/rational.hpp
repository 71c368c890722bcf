#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace safesched {

/// Exact arbitrary-precision rational. Always kept canonical.
using Rational = mpq_class;

/// Parses "0.4", "2/5", "3", "1e-2" style strings into an exact rational.
/// Throws ParseError on malformed input.
Rational parse_rational(std::string_view text);

/// Renders a rational as a finite decimal when it has one, else as "p/q".
std::string to_decimal_string(const Rational& value);

std::string to_fraction_string(const Rational& value);

double to_double(const Rational& value);

std::size_t hash_value(const Rational& value);

}  // namespace safesched
