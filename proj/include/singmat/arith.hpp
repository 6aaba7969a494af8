#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "singmat/base.hpp"

namespace singmat::arith {

// gcd of absolute coordinate values; 0 iff v is the zero vector.
inline Int gcd_vec(std::span<const Int> v) {
  if (v.empty()) throw std::invalid_argument("gcd_vec: empty vector");
  Int g = 0;
  for (Int c : v) {
    g = gcd_int(g, c < 0 ? -c : c);
    if (g == 1) break;
  }
  return g;
}

inline Int gcd_vec(const std::vector<Int>& v) {
  return gcd_vec(std::span<const Int>(v));
}

inline bool is_primitive(std::span<const Int> v) {
  return gcd_vec(v) == 1;
}

inline bool is_primitive(const std::vector<Int>& v) {
  return gcd_vec(v) == 1;
}

// Möbius function values over [1, limit], immutable once built and safe to
// share across threads.
struct MobiusTable {
  Int limit = 0;
  std::vector<std::int8_t> values;  // index k in [1, limit]

  int at(Int k) const {
    if (k < 1 || k > limit) throw std::out_of_range("MobiusTable: k out of range");
    return values[size_t(k)];
  }
};

// Linear sieve over smallest prime factors.
inline MobiusTable mobius_sieve(Int limit) {
  if (limit < 1) throw std::invalid_argument("mobius_sieve: limit must be >= 1");
  MobiusTable t;
  t.limit = limit;
  t.values.assign(size_t(limit) + 1, 0);
  t.values[1] = 1;
  std::vector<Int> primes;
  std::vector<std::int8_t>& mu = t.values;
  std::vector<bool> composite(size_t(limit) + 1, false);
  for (Int i = 2; i <= limit; ++i) {
    if (!composite[size_t(i)]) {
      primes.push_back(i);
      mu[size_t(i)] = -1;
    }
    for (Int p : primes) {
      if (i * p > limit) break;
      composite[size_t(i * p)] = true;
      if (i % p == 0) {
        mu[size_t(i * p)] = 0;
        break;
      }
      mu[size_t(i * p)] = -mu[size_t(i)];
    }
  }
  return t;
}

// Riemann zeta at integer s >= 2: partial sum to K plus the integral-bracket
// tail (K^{1-s} + (K+1)^{1-s}) / (2(s-1)), whose error is at most K^{-s}/2.
// K is chosen so that the documented error is <= tol.
inline double zeta(int s, double tol = 1e-12) {
  if (s < 2) throw std::invalid_argument("zeta: requires s >= 2");
  if (!(tol > 0)) throw std::invalid_argument("zeta: tol must be positive");
  double k_needed = std::pow(1.0 / (2.0 * tol), 1.0 / s);
  Int K = (Int)k_needed + 2;
  if (K < 16) K = 16;
  if (K > 50'000'000) K = 50'000'000;
  CompensatedSum acc;
  for (Int k = K; k >= 1; --k) acc.add(std::pow(double(k), -s));
  double tail = (std::pow(double(K), 1 - s) + std::pow(double(K + 1), 1 - s)) / (2.0 * (s - 1));
  return acc.get() + tail;
}

}  // namespace singmat::arith
