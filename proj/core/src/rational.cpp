#include "fairsel/rational.hpp"

#include <cctype>
#include <cmath>

namespace fairsel {

namespace {

Int parse_int(std::string_view s) {
  if (s.empty()) throw ParseError("empty integer literal");
  size_t i = 0;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = (s[0] == '-');
    i = 1;
  }
  if (i == s.size()) throw ParseError("sign without digits");
  Int v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw ParseError("bad digit in integer literal: '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? Int(-v) : v;
}

}  // namespace

Rat parse_rat(std::string_view s) {
  // strip surrounding whitespace
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    return Rat(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view head = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty()) throw ParseError("trailing dot in '" + std::string(s) + "'");
    bool neg = !head.empty() && head[0] == '-';
    Int whole = head.empty() || head == "-" || head == "+" ? Int(0) : parse_int(head);
    Int scale = 1;
    Int digits = 0;
    for (char c : frac) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("bad digit in decimal literal: '" + std::string(s) + "'");
      digits = digits * 10 + (c - '0');
      scale *= 10;
    }
    Rat r = Rat(whole) + (neg ? Rat(-digits, scale) : Rat(digits, scale));
    return r;
  }
  return Rat(parse_int(s));
}

std::string rat_to_string(const Rat& r) {
  const Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

Rat rat_from_double(double d) {
  if (!std::isfinite(d)) throw ParseError("non-finite double cannot become a rational");
  if (d == 0.0) return Rat(0);
  int exp = 0;
  double mant = std::frexp(d, &exp);  // d = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings make the mantissa integral
  Int m = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rat r(m);
  if (exp > 0) {
    r *= rat_pow(Rat(2), static_cast<unsigned>(exp));
  } else if (exp < 0) {
    r /= rat_pow(Rat(2), static_cast<unsigned>(-exp));
  }
  return r;
}

Rat rat_pow(const Rat& base, unsigned exp) {
  Rat result(1);
  Rat b = base;
  while (exp > 0) {
    if (exp & 1u) result *= b;
    b *= b;
    exp >>= 1u;
  }
  return result;
}

}  // namespace fairsel
