#pragma once

#include <algorithm>
#include <cmath>

#include "fairsel/rational.hpp"

namespace fairsel {

enum class NumericMode { Exact, Float64 };

inline const char* to_string(NumericMode m) {
  return m == NumericMode::Exact ? "exact" : "float64";
}

/// Scalar policy for the numeric kernels. Rat is exact; double carries the
/// instance-wide 1e-9 tolerance.
template <class T>
struct NumTraits;

template <>
struct NumTraits<Rat> {
  static constexpr bool exact = true;
  static Rat from_rat(const Rat& r) { return r; }
  static Rat to_rat(const Rat& v) { return v; }
  static double to_double(const Rat& v) { return rat_to_double(v); }
  static bool eq(const Rat& a, const Rat& b) { return a == b; }
  static bool is_zero(const Rat& a) { return a == 0; }
  static bool lt(const Rat& a, const Rat& b) { return a < b; }
};

template <>
struct NumTraits<double> {
  static constexpr bool exact = false;
  static constexpr double tol = 1e-9;
  static double from_rat(const Rat& r) { return rat_to_double(r); }
  static Rat to_rat(double v) { return rat_from_double(v); }
  static double to_double(double v) { return v; }
  static bool eq(double a, double b) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  }
  static bool is_zero(double a) { return std::abs(a) <= tol; }
  static bool lt(double a, double b) { return a < b && !eq(a, b); }
};

template <class T>
T num_from_rat(const Rat& r) {
  return NumTraits<T>::from_rat(r);
}

}  // namespace fairsel
