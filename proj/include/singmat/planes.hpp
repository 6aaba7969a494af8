#pragma once

// Fast exact machinery for 2-dimensional sublattices of Z^3 presented by a
// primitive normal vector.  Everything here works on Gram data in int64 with
// 128-bit intermediates; inputs are assumed to satisfy |lambda| <= ~5*10^6,
// far above every configured budget.

#include <array>
#include <cstdint>

#include "singmat/arith.hpp"
#include "singmat/base.hpp"
#include "singmat/parallel.hpp"

namespace singmat::planes {

struct Normal3 {
  Int x = 0, y = 0, z = 0;

  Int norm_sq() const { return x * x + y * y + z * z; }
  auto operator<=>(const Normal3&) const = default;
};

// Canonical representative of {+v, -v}: first nonzero coordinate positive.
inline Normal3 canonical(Int x, Int y, Int z) {
  if (x < 0 || (x == 0 && (y < 0 || (y == 0 && z < 0)))) return {-x, -y, -z};
  return {x, y, z};
}

inline Int gcd3(Int a, Int b, Int c) {
  return gcd_int(gcd_int(a < 0 ? -a : a, b < 0 ? -b : b), c < 0 ? -c : c);
}

// g = u*a + v*b with g = gcd(|a|, |b|) >= 0.
inline void ext_gcd(Int a, Int b, Int& g, Int& u, Int& v) {
  Int old_r = a, r = b;
  Int old_u = 1, cu = 0;
  Int old_v = 0, cv = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_u - q * cu;
    old_u = cu;
    cu = t;
    t = old_v - q * cv;
    old_v = cv;
    cv = t;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_u = -old_u;
    old_v = -old_v;
  }
  g = old_r;
  u = old_u;
  v = old_v;
}

// Gram matrix (p, q, r) = (<b1,b1>, <b1,b2>, <b2,b2>) of a basis of the
// plane orthogonal to primitive (a, b, c):
//   b1 = (b/g, -a/g, 0),  b2 = (u*c, v*c, -g)  with  u*a + v*b = g = gcd(a,b).
// (b1 x b2 = (a, b, c), so this is a basis of the full orthogonal lattice.)
inline void plane_gram(Int a, Int b, Int c, Int& p, Int& q, Int& r) {
  if (a == 0 && b == 0) {
    p = 1;
    q = 0;
    r = 1;
    return;
  }
  Int g, u, v;
  ext_gcd(a, b, g, u, v);
  Int b1x = b / g, b1y = -(a / g);
  Int b2x = u * c, b2y = v * c;
  p = b1x * b1x + b1y * b1y;
  q = b1x * b2x + b1y * b2y;
  r = b2x * b2x + b2y * b2y + g * g;
}

// In-place Lagrange-Gauss reduction of a planar Gram (p, q, r); on return
// p <= r and |2q| <= p, so p and r are the exact squared successive minima.
inline void gauss_reduce_gram(Int& p, Int& q, Int& r) {
  if (p > r) std::swap(p, r);
  while (true) {
    Int t = round_div(q, p);
    if (t != 0) {
      Wide nr = (Wide)r - 2 * (Wide)t * q + (Wide)t * t * p;
      q = Int((Wide)q - (Wide)t * p);
      r = Int(nr);
    }
    if (r >= p) break;
    std::swap(p, r);
  }
}

// Same, but bails out early when the plane provably has mu_2 > T:
// det_sq / p <= mu_2^2 is monotone as p shrinks, so det_sq > p * T^2 is a
// sound one-sided rejection.  Returns true iff mu_2 <= T.
inline bool gauss_reduce_gram_bounded(Int& p, Int& q, Int& r, Int det_sq, Int t_num, Int t_den) {
  Wide tn2 = (Wide)t_num * t_num;
  Wide td2 = (Wide)t_den * t_den;
  if (p > r) std::swap(p, r);
  while (true) {
    if ((Wide)det_sq * td2 > (Wide)p * tn2) return false;
    Int t = round_div(q, p);
    if (t != 0) {
      Wide nr = (Wide)r - 2 * (Wide)t * q + (Wide)t * t * p;
      q = Int((Wide)q - (Wide)t * p);
      r = Int(nr);
    }
    if (r >= p) break;
    std::swap(p, r);
  }
  return (Wide)r * td2 <= tn2;
}

// Exact integer solution range of A x^2 + 2 B x + C <= 0 with A > 0.
// Returns false when empty.
inline bool quad_range(Wide A, Wide B, Wide C, Int& lo, Int& hi) {
  Wide disc = B * B - A * C;
  if (disc < 0) return false;
  Int s = isqrt(disc);
  auto q_of = [&](Int x) { return A * x * x + 2 * B * x + C; };
  // s = floor(sqrt(disc)) never overestimates, so the floor/ceil estimates
  // sit at or one below/above the true endpoints; one exact probe fixes each.
  Int h = Int(((Wide)s - B) >= 0 ? ((Wide)s - B) / A : -((B - (Wide)s + A - 1) / A));
  while (q_of(h + 1) <= 0) ++h;
  Int l = Int((-(Wide)s - B) >= 0 ? (-(Wide)s - B + A - 1) / A : -(((Wide)s + B) / A));
  while (q_of(l - 1) <= 0) --l;
  if (l > h) return false;
  lo = l;
  hi = h;
  return true;
}

// Number of nonzero (x, y) with (p x^2 + 2 q x y + r y^2) * sq_den <= sq_num.
// The Gram must be reduced.  This is N_Lambda at the radius whose square is
// sq_num / sq_den.
inline Int count_all(Int p, Int q, Int r, Wide sq_num, Wide sq_den) {
  if (sq_num <= 0) return 0;
  Wide det = (Wide)p * r - (Wide)q * q;
  Int count = 0;
  // y = 0 row: p x^2 * sq_den <= sq_num, x > 0
  count += isqrt_ratio(sq_num, (Wide)p * sq_den);
  Int ymax = isqrt_ratio(sq_num * p, sq_den * det);
  Wide A = (Wide)p * sq_den;
  for (Int y = 1; y <= ymax; ++y) {
    Wide B = (Wide)q * sq_den * y;
    Wide C = (Wide)r * sq_den * y * y - sq_num;
    Int lo, hi;
    if (quad_range(A, B, C, lo, hi)) count += hi - lo + 1;
  }
  return 2 * count;
}

// Primitive points (coprime basis coefficients) of norm <= T, by Moebius
// inversion over the all-point counts.  Exact; the Gram must be reduced and
// the table must cover floor(T).  Right choice when the plane determinant is
// small relative to T (many points, few scaled radii).
inline Int count_primitive_mobius(Int p, Int q, Int r, const Radius& T, const arith::MobiusTable& mu) {
  Wide tn2 = (Wide)T.num * T.num;
  Wide td2 = (Wide)T.den * T.den;
  Int kmax = isqrt_ratio(tn2, td2 * p);  // T/k >= mu_1
  if (kmax > T.floor()) kmax = T.floor();
  Int total = 0;
  for (Int k = 1; k <= kmax; ++k) {
    int m = mu.at(k);
    if (m == 0) continue;
    total += m * count_all(p, q, r, tn2, td2 * k * k);
  }
  return total;
}

// Primitive points of norm <= T by direct per-point coprimality checks.
// Right choice when the plane determinant is large (few points).
inline Int count_primitive_direct(Int p, Int q, Int r, const Radius& T) {
  Wide tn2 = (Wide)T.num * T.num;
  Wide td2 = (Wide)T.den * T.den;
  Wide det = (Wide)p * r - (Wide)q * q;
  Int count = 0;
  if ((Wide)p * td2 <= tn2) count += 1;  // +-b1 is the only primitive pair on the x-axis
  Int ymax = isqrt_ratio(tn2 * p, td2 * det);
  Wide A = (Wide)p * td2;
  for (Int y = 1; y <= ymax; ++y) {
    Wide B = (Wide)q * td2 * y;
    Wide C = (Wide)r * td2 * y * y - tn2;
    Int lo, hi;
    if (!quad_range(A, B, C, lo, hi)) continue;
    if (y == 1) {
      count += hi - lo + 1;
    } else {
      for (Int x = lo; x <= hi; ++x)
        if (gcd_int(x < 0 ? -x : x, y) == 1) ++count;
    }
  }
  return 2 * count;
}

// Visits every canonical primitive lambda in Z^3 with |lambda|^2 <= norm_sq_max,
// partitioned into slabs by the first coordinate; fn(slab, x, y, z, norm_sq).
// Slab s > 0 holds x = s; slab 0 holds the x = 0 vectors.
template <class Fn>
inline void scan_canonical_primitive(Int norm_sq_max, int threads, Fn&& fn) {
  if (norm_sq_max < 1) return;
  Int xmax = isqrt(norm_sq_max);
  parallel_slabs(xmax + 1, threads, [&](Int slab) {
    Int x = slab;
    if (x == 0) {
      fn(slab, Int(0), Int(0), Int(1), Int(1));
      Int bmax = isqrt(norm_sq_max);
      for (Int y = 1; y <= bmax; ++y) {
        Int cmax = isqrt(norm_sq_max - y * y);
        for (Int z = -cmax; z <= cmax; ++z)
          if (gcd_int(y, z < 0 ? -z : z) == 1) fn(slab, Int(0), y, z, y * y + z * z);
      }
      return;
    }
    Int rest = norm_sq_max - x * x;
    Int ymax = isqrt(rest);
    for (Int y = -ymax; y <= ymax; ++y) {
      Int g2 = gcd_int(x, y < 0 ? -y : y);
      Int zmax = isqrt(rest - y * y);
      Int base = x * x + y * y;
      if (g2 == 1) {
        for (Int z = -zmax; z <= zmax; ++z) fn(slab, x, y, z, base + z * z);
      } else {
        for (Int z = -zmax; z <= zmax; ++z)
          if (gcd_int(g2, z < 0 ? -z : z) == 1) fn(slab, x, y, z, base + z * z);
      }
    }
  });
}

}  // namespace singmat::planes
