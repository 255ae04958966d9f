#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairsel {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses "p/q", a decimal string ("0.25", "-3.5"), or an integer string.
Rat parse_rat(std::string_view s);

/// Canonical form: "p" for integers, "p/q" otherwise.
std::string rat_to_string(const Rat& r);

double rat_to_double(const Rat& r);

/// Exact value of the double (every finite double is a dyadic rational).
Rat rat_from_double(double d);

Rat rat_pow(const Rat& base, unsigned exp);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

}  // namespace fairsel
