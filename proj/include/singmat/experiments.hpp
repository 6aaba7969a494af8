#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "singmat/arith.hpp"
#include "singmat/asymptotics.hpp"
#include "singmat/base.hpp"
#include "singmat/parallel.hpp"
#include "singmat/planes.hpp"

namespace singmat::experiments {

// Distribution of the successive-minima ratio mu_2/mu_1 over primitive
// 2-dimensional sublattices of Z^3 ordered by determinant.  Lattices are
// indexed by their canonical primitive normal (det = |lambda|), so the
// enumeration is an exact ball scan.
struct SchmidtStat {
  Int det_max = 0;
  std::vector<Fraction> a_values;  // thresholds a, exact
  std::vector<Int> counts;         // N(a, det_max) per threshold
  Int total = 0;                   // N(1, det_max)
  double fitted_const = 0;         // total / (arcsin(1/2) det_max^3)
};

// Parses "2", "1.5" or "3/2" into an exact fraction.
inline Fraction parse_ratio_threshold(const std::string& s) {
  auto bad = [&] { return std::invalid_argument("cannot parse ratio threshold '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Radius r = Radius::parse(s);
    return Fraction(r.num, r.den);
  }
  auto dot = s.find('.');
  try {
    if (dot == std::string::npos) {
      size_t pos = 0;
      Int v = std::stoll(s, &pos);
      if (pos != s.size() || v < 1) throw bad();
      return Fraction(v, 1);
    }
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (fp.empty() || fp.size() > 9) throw bad();
    size_t p1 = 0, p2 = 0;
    Int whole = std::stoll(ip, &p1);
    Int frac = std::stoll(fp, &p2);
    if (p1 != ip.size() || p2 != fp.size() || whole < 0 || frac < 0) throw bad();
    Int den = 1;
    for (size_t i = 0; i < fp.size(); ++i) den *= 10;
    return Fraction(whole * den + frac, den);
  } catch (const std::logic_error&) {
    throw bad();
  }
}

inline SchmidtStat schmidt_distribution(Int det_max, const std::vector<Fraction>& a_values,
                                        Int budget_D, int threads = 0) {
  if (det_max < 1) throw std::invalid_argument("schmidt_distribution: det_max must be >= 1");
  if (det_max > budget_D)
    throw budget_error("schmidt_distribution: det_max = " + std::to_string(det_max) +
                       " exceeds the configured limit " + std::to_string(budget_D));
  for (const auto& a : a_values)
    if (a.num < a.den) throw std::invalid_argument("schmidt_distribution: thresholds must be >= 1");

  size_t na = a_values.size();
  Int xmax = isqrt(det_max * det_max);
  auto per_slab = std::vector<std::vector<Int>>(size_t(xmax) + 1, std::vector<Int>(na + 1, 0));
  planes::scan_canonical_primitive(det_max * det_max, threads, [&](Int slab, Int a, Int b, Int c, Int nsq) {
    (void)nsq;
    Int p, q, r;
    planes::plane_gram(a, b, c, p, q, r);
    planes::gauss_reduce_gram(p, q, r);
    auto& acc = per_slab[size_t(slab)];
    acc[na] += 1;  // total
    for (size_t i = 0; i < na; ++i) {
      // mu2^2 / mu1^2 >= a^2, exactly: r * den^2 >= p * num^2
      const auto& t = a_values[i];
      if ((Wide)r * t.den * t.den >= (Wide)p * t.num * t.num) acc[i] += 1;
    }
  });
  SchmidtStat out;
  out.det_max = det_max;
  out.a_values = a_values;
  out.counts.assign(na, 0);
  for (const auto& acc : per_slab) {
    for (size_t i = 0; i < na; ++i) out.counts[i] += acc[i];
    out.total += acc[na];
  }
  out.fitted_const = double(out.total) / (std::asin(0.5) * std::pow(double(det_max), 3.0));
  return out;
}

// ---------------------------------------------------------------------------
// Partition diagnostic: the big-determinant / unbalanced / good trichotomy.
// ---------------------------------------------------------------------------

struct RegionSums {
  Int planes = 0;
  Int sum_p_cubed = 0;    // sum of P_lambda(T)^3 over the region
  double sum_c = 0;       // sum of the per-plane main terms c(T, lambda)
};

struct PartitionReport {
  Radius T;
  double A = 6, B = 2;
  RegionSums big_det, epicentric, good;
  double max_good_ratio = 0;  // max over the good region of |eps(T,l)| / c(T,l)
  Int total_planes = 0;
  Int total_p_cubed = 0;
  double total_c = 0;
};

// Classifies every T-bounded plane (normals |lambda| <= T^2) into
//   big_det:    det > T^2 / (log T)^A
//   epicentric: det below that but mu2/mu1 > (log T)^B
//   good:       the rest,
// and reports sum P^3 and sum c(T, lambda) per region.  Logs are natural;
// for T <= e the thresholds degenerate (no big-det region, and the ratio
// cut clamps to 1 since mu2/mu1 >= 1 always), which keeps the trichotomy
// exhaustive at any T.  Requires (A - B)/2 - 1 >= 1, A > 0, B > 1.
inline PartitionReport partition_diagnostic(const Radius& T, double A, double B, Int budget_T,
                                            int threads = 0) {
  if (!((A - B) / 2.0 - 1.0 >= 1.0) || !(A > 0) || !(B > 1))
    throw std::invalid_argument(
        "partition_diagnostic: constants must satisfy (A-B)/2 - 1 >= 1, A > 0, B > 1 (got A = " +
        std::to_string(A) + ", B = " + std::to_string(B) + ")");
  if ((Wide)T.num > (Wide)budget_T * T.den)
    throw budget_error("partition_diagnostic: T = " + T.str() + " exceeds the configured limit " +
                       std::to_string(budget_T));

  double t = T.value();
  double logT = std::log(t);
  double det_threshold = logT > 0 ? t * t / std::pow(logT, A) : std::numeric_limits<double>::infinity();
  double ratio_threshold = logT > 0 ? std::max(std::pow(logT, B), 1.0) : 1.0;
  double zeta2 = arith::zeta(2);
  double c_base = std::pow(std::numbers::pi, 3) * std::pow(t, 6.0) / std::pow(zeta2, 3.0);

  Int nsq_max = Int(((Wide)T.num * T.num * T.num * T.num) / ((Wide)T.den * T.den * T.den * T.den));
  auto mu = arith::mobius_sieve(std::max<Int>(T.floor(), 1));
  Int xmax = isqrt(nsq_max);

  struct Slab {
    RegionSums big, epi, good;
    CompensatedSum c_big, c_epi, c_good;
    double max_ratio = 0;
  };
  auto slabs = std::vector<Slab>(size_t(xmax) + 1);

  planes::scan_canonical_primitive(nsq_max, threads, [&](Int slab_id, Int a, Int b, Int c, Int nsq) {
    Int p, q, r;
    planes::plane_gram(a, b, c, p, q, r);
    if (!planes::gauss_reduce_gram_bounded(p, q, r, nsq, T.num, T.den)) return;
    Int P = planes::count_primitive_mobius(p, q, r, T, mu);
    double det = std::sqrt(double(nsq));
    double c_lam = c_base / (det * det * det);
    Int p3 = P * P * P;
    auto& s = slabs[size_t(slab_id)];
    if (det > det_threshold) {
      s.big.planes += 1;
      s.big.sum_p_cubed += p3;
      s.c_big.add(c_lam);
    } else if (double(r) > ratio_threshold * ratio_threshold * double(p)) {
      s.epi.planes += 1;
      s.epi.sum_p_cubed += p3;
      s.c_epi.add(c_lam);
    } else {
      s.good.planes += 1;
      s.good.sum_p_cubed += p3;
      s.c_good.add(c_lam);
      double ratio = std::abs(double(p3) - c_lam) / c_lam;
      if (ratio > s.max_ratio) s.max_ratio = ratio;
    }
  });

  PartitionReport rep;
  rep.T = T;
  rep.A = A;
  rep.B = B;
  CompensatedSum cb, ce, cg;
  for (const auto& s : slabs) {
    rep.big_det.planes += s.big.planes;
    rep.big_det.sum_p_cubed += s.big.sum_p_cubed;
    cb.merge(s.c_big);
    rep.epicentric.planes += s.epi.planes;
    rep.epicentric.sum_p_cubed += s.epi.sum_p_cubed;
    ce.merge(s.c_epi);
    rep.good.planes += s.good.planes;
    rep.good.sum_p_cubed += s.good.sum_p_cubed;
    cg.merge(s.c_good);
    if (s.max_ratio > rep.max_good_ratio) rep.max_good_ratio = s.max_ratio;
  }
  rep.big_det.sum_c = cb.get();
  rep.epicentric.sum_c = ce.get();
  rep.good.sum_c = cg.get();
  rep.total_planes = rep.big_det.planes + rep.epicentric.planes + rep.good.planes;
  rep.total_p_cubed = rep.big_det.sum_p_cubed + rep.epicentric.sum_p_cubed + rep.good.sum_p_cubed;
  rep.total_c = rep.big_det.sum_c + rep.epicentric.sum_c + rep.good.sum_c;
  return rep;
}

}  // namespace singmat::experiments
