#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "singmat/arith.hpp"
#include "singmat/base.hpp"
#include "singmat/parallel.hpp"

namespace singmat::asymptotics {

// Volume of the unit ball by the parity-split formula:
//   n = 2m:   pi^m / m!
//   n = 2m+1: 2 (2 pi)^m / (2m+1)!!
inline double ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("ball_volume: n must be >= 1");
  int m = n / 2;
  if (n % 2 == 0) {
    double v = 1.0;
    for (int i = 1; i <= m; ++i) v *= std::numbers::pi / i;
    return v;
  }
  double v = 2.0;
  for (int i = 1; i <= m; ++i) v *= 2.0 * std::numbers::pi / (2 * i + 1);
  return v;
}

// The lattice-sum constant u_n, by its parity-split closed form:
//   n = 2m:   (n/2) * (2 (2 pi)^{m-1} / (2m-1)!!)^n * pi^m / m!
//   n = 2m+1: (n/2) * (pi^m / m!)^n * 2 (2 pi)^m / (2m+1)!!
// which is (n/2) * v_{n-1}^n * v_n.
inline double u_constant(int n) {
  if (n < 2) throw std::invalid_argument("u_constant: n must be >= 2");
  int m = n / 2;
  if (n % 2 == 0) {
    double vprev = 2.0;  // v_{n-1} = v_{2m-1} = 2 (2 pi)^{m-1} / (2m-1)!!
    for (int i = 1; i <= m - 1; ++i) vprev *= 2.0 * std::numbers::pi / (2 * i + 1);
    double vn = 1.0;
    for (int i = 1; i <= m; ++i) vn *= std::numbers::pi / i;
    return (n / 2.0) * std::pow(vprev, n) * vn;
  }
  double vprev = 1.0;  // v_{n-1} = v_{2m} = pi^m / m!
  for (int i = 1; i <= m; ++i) vprev *= std::numbers::pi / i;
  double vn = 2.0;
  for (int i = 1; i <= m; ++i) vn *= 2.0 * std::numbers::pi / (2 * i + 1);
  return (n / 2.0) * std::pow(vprev, n) * vn;
}

// Independent route: u_n = (v_{n-1}^n / 2) * surface(S^{n-1}), and the unit
// sphere surface is n * v_n.
inline double u_constant_surface(int n) {
  if (n < 2) throw std::invalid_argument("u_constant_surface: n must be >= 2");
  return std::pow(ball_volume(n - 1), n) / 2.0 * (n * ball_volume(n));
}

enum class Formula { primitive_n2, primitive_n3, primitive_general, all_rows };

inline const char* formula_name(Formula f) {
  switch (f) {
    case Formula::primitive_n2: return "primitive_n2";
    case Formula::primitive_n3: return "primitive_n3";
    case Formula::primitive_general: return "primitive_general";
    case Formula::all_rows: return "all_rows";
  }
  return "?";
}

inline Formula parse_formula(const std::string& s) {
  if (s == "primitive_n2") return Formula::primitive_n2;
  if (s == "primitive_n3") return Formula::primitive_n3;
  if (s == "primitive_general") return Formula::primitive_general;
  if (s == "all_rows") return Formula::all_rows;
  throw std::invalid_argument("unknown formula '" + s + "' (expected primitive_n2, primitive_n3, primitive_general or all_rows)");
}

// Main-term evaluation with the constants used to produce it.
struct Prediction {
  Formula formula = Formula::primitive_n3;
  int n = 3;
  double T = 0;
  double main_term = 0;
  double u_n = 0;
  double v_n = 0;
  double v_n_minus_1 = 0;
  double zeta_n = 0;
  double zeta_n_minus_1 = 0;  // NaN when n = 2 (zeta(1) diverges)
};

// Leading asymptotics of the singular-matrix counts (natural log throughout):
//   primitive_general (n >= 4): (n-1) u_n / (zeta(n) zeta(n-1)^n) T^{n^2-n} log T
//   primitive_n3:               2 u_3 / (zeta(3) zeta(2)^3) T^6 log T
//   primitive_n2:               2 pi / zeta(2) T^2
//   all_rows (n >= 3):          (n-1) u_n / zeta(n) T^{n^2-n} log T
inline Prediction predict(Formula f, int n, double T) {
  if (!(T > 0)) throw std::invalid_argument("predict: T must be positive");
  switch (f) {
    case Formula::primitive_n2:
      if (n != 2) throw std::invalid_argument("predict: formula primitive_n2 requires n = 2");
      break;
    case Formula::primitive_n3:
      if (n != 3) throw std::invalid_argument("predict: formula primitive_n3 requires n = 3");
      break;
    case Formula::primitive_general:
      if (n < 4) throw std::invalid_argument("predict: formula primitive_general requires n >= 4");
      break;
    case Formula::all_rows:
      if (n < 3) throw std::invalid_argument("predict: formula all_rows requires n >= 3");
      break;
  }
  Prediction p;
  p.formula = f;
  p.n = n;
  p.T = T;
  p.u_n = u_constant(n);
  p.v_n = ball_volume(n);
  p.v_n_minus_1 = ball_volume(n - 1);
  p.zeta_n = arith::zeta(n);
  p.zeta_n_minus_1 = n >= 3 ? arith::zeta(n - 1) : std::numeric_limits<double>::quiet_NaN();
  double logT = std::log(T);
  double power = std::pow(T, double(n) * n - n);
  switch (f) {
    case Formula::primitive_n2:
      p.main_term = 2.0 * std::numbers::pi / p.zeta_n * T * T;
      break;
    case Formula::primitive_n3:
    case Formula::primitive_general:
      p.main_term = (n - 1) * p.u_n / (p.zeta_n * std::pow(p.zeta_n_minus_1, n)) * power * logT;
      break;
    case Formula::all_rows:
      p.main_term = (n - 1) * p.u_n / p.zeta_n * power * logT;
      break;
  }
  return p;
}

// Exact enumeration of the primitive lattice sum
//   sum over primitive lambda, 1 <= |lambda| <= M, of v_{n-1}^n / |lambda|^n,
// against its leading term (2 u_n / zeta(n)) log M.
struct PrimitiveSum {
  int n = 3;
  Int M = 0;
  Int vectors = 0;
  double sum = 0;
  double predicted = 0;
  double residual = 0;
};

inline PrimitiveSum primitive_sum(Int M, int n, Int budget_M, int threads = 0) {
  if (n != 3 && n != 4) throw std::invalid_argument("primitive_sum: n must be 3 or 4");
  if (M < 1) throw std::invalid_argument("primitive_sum: M must be >= 1");
  if (M > budget_M)
    throw budget_error("primitive_sum: M = " + std::to_string(M) + " exceeds the configured limit " +
                       std::to_string(budget_M));
  double vpow = std::pow(ball_volume(n - 1), n);
  Int Msq = M * M;
  std::vector<CompensatedSum> partial(size_t(M) + 1);
  std::vector<Int> counts(size_t(M) + 1, 0);
  // slabs over the first coordinate's absolute value keep the merge order fixed
  parallel_slabs(M + 1, threads, [&](Int ax) {
    CompensatedSum acc;
    Int cnt = 0;
    Int mult = ax > 0 ? 2 : 1;  // +-ax halves carry identical terms
    auto visit = [&](Int nsq) {
      double term = vpow / std::pow(double(nsq), n / 2.0);
      for (Int i = 0; i < mult; ++i) acc.add(term);
      cnt += mult;
    };
    Int rest0 = Msq - ax * ax;
    if (n == 3) {
      Int ymax = isqrt(rest0);
      for (Int y = -ymax; y <= ymax; ++y) {
        Int g2 = gcd_int(ax, y < 0 ? -y : y);
        Int zmax = isqrt(rest0 - y * y);
        for (Int z = -zmax; z <= zmax; ++z) {
          if (ax == 0 && y == 0 && z == 0) continue;
          if (gcd_int(g2, z < 0 ? -z : z) != 1) continue;
          visit(ax * ax + y * y + z * z);
        }
      }
    } else {
      Int ymax = isqrt(rest0);
      for (Int y = -ymax; y <= ymax; ++y) {
        Int g2 = gcd_int(ax, y < 0 ? -y : y);
        Int rest1 = rest0 - y * y;
        Int zmax = isqrt(rest1);
        for (Int z = -zmax; z <= zmax; ++z) {
          Int g3 = gcd_int(g2, z < 0 ? -z : z);
          Int wmax = isqrt(rest1 - z * z);
          for (Int w = -wmax; w <= wmax; ++w) {
            if (ax == 0 && y == 0 && z == 0 && w == 0) continue;
            if (gcd_int(g3, w < 0 ? -w : w) != 1) continue;
            visit(ax * ax + y * y + z * z + w * w);
          }
        }
      }
    }
    partial[size_t(ax)] = acc;
    counts[size_t(ax)] = cnt;
  });
  PrimitiveSum out;
  out.n = n;
  out.M = M;
  CompensatedSum total;
  for (auto& p : partial) total.merge(p);
  for (Int c : counts) out.vectors += c;
  out.sum = total.get();
  out.predicted = 2.0 * u_constant(n) / arith::zeta(n) * std::log(double(M));
  out.residual = out.sum - out.predicted;
  return out;
}

}  // namespace singmat::asymptotics
