#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "singmat/arith.hpp"
#include "singmat/base.hpp"
#include "singmat/lattice.hpp"

namespace singmat::counting {

using lattice::ReducedBasis;
using lattice::SubLattice;

inline constexpr Int kDefaultBoxGuard = Int(1) << 31;

// One exact ball-count result for a sublattice.  Counts are of nonzero
// vectors; N_Lambda including the origin is includes_origin_total.
struct BallCount {
  Fraction radius_sq;
  Int total_nonzero = 0;
  Int primitive = 0;
  Int includes_origin_total = 1;
};

// Yields every nonzero v in L with norm_sq(v) <= radius_sq exactly once, in
// lexicographic order over the reduced-basis coefficients.  The visitor
// receives (ambient vector, norm_sq).
template <class Visitor>
inline void enumerate_points(const SubLattice& L, Fraction radius_sq, Visitor&& visit,
                             Int box_guard = kDefaultBoxGuard) {
  if (L.rank() > 3) throw std::invalid_argument("enumerate_points: rank must be <= 3");
  ReducedBasis rb = lattice::reduce(L);
  SubLattice R = SubLattice::from_basis(rb.vectors);
  lattice::enumerate_coefficients(R, radius_sq, box_guard, [&](std::span<const Int> x, Int nsq) {
    visit(R.combine(x), nsq);
  });
}

// Number of nonzero v in L with |v| <= T / scale_k, i.e. with
// norm_sq(v) * scale_k^2 <= T^2, exactly.
inline Int count_points(const SubLattice& L, const Radius& T, Int scale_k = 1,
                        Int box_guard = kDefaultBoxGuard) {
  if (scale_k < 1) throw std::invalid_argument("count_points: scale_k must be >= 1");
  Fraction rsq(T.num * T.num, T.den * T.den * scale_k * scale_k);
  if (rsq.num == 0) return 0;
  Int count = 0;
  enumerate_points(L, rsq, [&](const IntVec&, Int) { ++count; }, box_guard);
  return count;
}

// Number of v in L with |v| <= T whose ambient coordinates are coprime.
// For a primitive sublattice this is exactly primitivity within L.
inline Int count_primitive_direct(const SubLattice& L, const Radius& T,
                                  Int box_guard = kDefaultBoxGuard) {
  Int count = 0;
  enumerate_points(
      L, T.squared(),
      [&](const IntVec& v, Int) {
        if (v.is_primitive()) ++count;
      },
      box_guard);
  return count;
}

// Moebius inversion of the all-points counts:
//   P_L(T) = sum_{k=1}^{floor(T)} mu(k) * N_L(T/k).
// Equals count_primitive_direct exactly on primitive lattices.
inline Int count_primitive_mobius(const SubLattice& L, const Radius& T, const arith::MobiusTable& mu,
                                  Int box_guard = kDefaultBoxGuard) {
  Int kmax = T.floor();
  if (mu.limit < kmax)
    throw std::invalid_argument("count_primitive_mobius: MobiusTable limit " + std::to_string(mu.limit) +
                                " is below floor(T) = " + std::to_string(kmax));
  Int total = 0;
  for (Int k = 1; k <= kmax; ++k) {
    int m = mu.at(k);
    if (m == 0) continue;
    Int c = count_points(L, T, k, box_guard);
    total += m * c;
    if (c == 0) break;  // counts are monotone in the radius; later k are empty
  }
  return total;
}

inline BallCount ball_count(const SubLattice& L, const Radius& T, Int box_guard = kDefaultBoxGuard) {
  BallCount b;
  b.radius_sq = T.squared();
  enumerate_points(
      L, b.radius_sq,
      [&](const IntVec& v, Int) {
        ++b.total_nonzero;
        if (v.is_primitive()) ++b.primitive;
      },
      box_guard);
  b.includes_origin_total = b.total_nonzero + 1;
  return b;
}

// Empirical probe of the planar primitive-count error term: for a rank-2
// primitive L, compares P_L(T) against its main term
// v_2 T^2 / (zeta(2) det L) and normalizes the residual by
// T log(T + 2) / mu_1 (log is shifted to stay finite at T = 1).
struct PointCountProbe {
  Int count = 0;
  double main_term = 0;
  double residual = 0;
  double normalized_residual = 0;
};

inline PointCountProbe point_count_error_probe(const SubLattice& L, const Radius& T,
                                               Int box_guard = kDefaultBoxGuard) {
  if (L.rank() != 2) throw std::invalid_argument("point_count_error_probe: rank must be 2");
  PointCountProbe p;
  p.count = count_primitive_direct(L, T, box_guard);
  double t = T.value();
  double det = std::sqrt(double(L.det_sq()));
  p.main_term = std::numbers::pi * t * t / (arith::zeta(2) * det);
  p.residual = double(p.count) - p.main_term;
  double mu1 = std::sqrt(double(lattice::successive_minima(L)[0]));
  p.normalized_residual = p.residual * mu1 / (t * std::log(t + 2.0));
  return p;
}

}  // namespace singmat::counting
