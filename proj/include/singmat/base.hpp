#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace singmat {

// Coordinates, norms and counts are exact 64-bit integers; products of up to
// three of them go through 128-bit intermediates.  All workloads supported by
// the default budgets stay far below these widths (the widest intermediate is
// a product of three squared norms of magnitude <= ~1e8).
using Int = std::int64_t;
using Wide = __int128;

inline constexpr const char* kVersion = "singmat 0.1.0";

// Thrown when a request exceeds a configured feasibility budget.  The message
// names the limit; nothing is silently truncated.
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Int gcd_int(Int a, Int b) {
  return std::gcd(a, b);
}

inline std::string to_string_wide(Wide v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  std::string s;
  while (u) {
    s.insert(s.begin(), char('0' + int(u % 10)));
    u /= 10;
  }
  return neg ? "-" + s : s;
}

// floor(a / b) for b > 0.
inline Int floor_div(Int a, Int b) {
  Int q = a / b, r = a % b;
  return (r != 0 && r < 0) ? q - 1 : q;
}

inline Int ceil_div(Int a, Int b) {
  return floor_div(a + b - 1, b);
}

// Nearest integer to a/b for b > 0; ties round up.  Used by basis reduction,
// where any tie rule preserves termination.
inline Int round_div(Int a, Int b) {
  return floor_div(2 * a + b, 2 * b);
}

// floor(sqrt(v)) for v >= 0, exact.
inline Int isqrt(Wide v) {
  if (v < 0) throw std::invalid_argument("isqrt: negative argument");
  if (v == 0) return 0;
  Int r = (Int)std::sqrt((long double)v);
  while (r > 0 && (Wide)r * r > v) --r;
  while ((Wide)(r + 1) * (r + 1) <= v) ++r;
  return r;
}

// Largest x >= 0 with x*x*den <= num (floor of sqrt(num/den)), exact.
inline Int isqrt_ratio(Wide num, Wide den) {
  if (den <= 0) throw std::invalid_argument("isqrt_ratio: nonpositive denominator");
  if (num < 0) throw std::invalid_argument("isqrt_ratio: negative numerator");
  Int r = isqrt(num / den);
  while ((Wide)(r + 1) * (r + 1) * den <= num) ++r;
  while (r > 0 && (Wide)r * r * den > num) --r;
  return r;
}

// An exact nonnegative rational, kept reduced with den > 0.
struct Fraction {
  Int num = 0;
  Int den = 1;

  Fraction() = default;
  Fraction(Int n, Int d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    Int g = gcd_int(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double value() const { return double(num) / double(den); }
  bool operator==(const Fraction&) const = default;
};

// A positive length threshold T = num/den, exact.  Comparisons against
// T or T/k are done on squared integers so no rounding ever enters a count.
struct Radius {
  Int num = 1;
  Int den = 1;

  Radius() = default;
  Radius(Int n, Int d = 1) {
    Fraction f(n, d);
    num = f.num;
    den = f.den;
    if (num <= 0) throw std::invalid_argument("Radius: must be positive");
  }

  // Accepts "12" or "7/2".  Scientific notation is rejected: exact paths
  // need an exact T.
  static Radius parse(const std::string& s) {
    auto bad = [&] { return std::invalid_argument("Radius: cannot parse '" + s + "' (expected integer or p/q)"); };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) {
        size_t pos = 0;
        Int n = std::stoll(s, &pos);
        if (pos != s.size()) throw bad();
        return Radius(n);
      }
      size_t p1 = 0, p2 = 0;
      std::string a = s.substr(0, slash), b = s.substr(slash + 1);
      Int n = std::stoll(a, &p1);
      Int d = std::stoll(b, &p2);
      if (p1 != a.size() || p2 != b.size()) throw bad();
      return Radius(n, d);
    } catch (const std::invalid_argument&) {
      throw bad();
    } catch (const std::out_of_range&) {
      throw bad();
    }
  }

  Int floor() const { return num / den; }
  double value() const { return double(num) / double(den); }
  Fraction squared() const { return Fraction(num * num, den * den); }

  // |v| * k <= T, i.e. norm_sq * k^2 * den^2 <= num^2, exactly.
  bool contains_scaled(Int norm_sq, Int k = 1) const {
    return (Wide)norm_sq * k * k * den * den <= (Wide)num * num;
  }

  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

  bool operator==(const Radius&) const = default;
};

// Neumaier compensated accumulator for long floating sums.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }

  // Merging keeps determinism as long as callers merge in a fixed order.
  void merge(const CompensatedSum& o) {
    add(o.sum);
    add(o.comp);
  }

  double get() const { return sum + comp; }
};

}  // namespace singmat
