#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qtw {

using Rational = mpq_class;

// Parses "7", "-3/4". Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

}  // namespace qtw
