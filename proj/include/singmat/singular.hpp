#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "singmat/arith.hpp"
#include "singmat/base.hpp"
#include "singmat/parallel.hpp"
#include "singmat/planes.hpp"
#include "singmat/vec.hpp"

namespace singmat::singular {

enum class CountMode { brute, pairs, decompose, closed2 };

inline const char* mode_name(CountMode m) {
  switch (m) {
    case CountMode::brute: return "brute";
    case CountMode::pairs: return "pairs";
    case CountMode::decompose: return "decompose";
    case CountMode::closed2: return "closed2";
  }
  return "?";
}

inline CountMode parse_mode(const std::string& s) {
  if (s == "brute") return CountMode::brute;
  if (s == "pairs") return CountMode::pairs;
  if (s == "decompose") return CountMode::decompose;
  if (s == "closed2") return CountMode::closed2;
  throw std::invalid_argument("unknown count mode '" + s + "'");
}

// One exact counting result.
struct CountRecord {
  int n = 0;
  Radius T;
  CountMode mode = CountMode::brute;
  bool primitive_only = true;
  Int count = 0;
  Int planes_visited = 0;
  double elapsed_ms = 0;
};

// Feasibility limits.  Exceeding one raises budget_error naming it; nothing
// is ever silently truncated.  All limits can be overridden.
struct Budget {
  Int brute_n2_T = 100;    // the pair loop is quadratic in the ~pi*T^2 vectors
  Int brute_n3_T = 5;      // full triple loop
  Int brute_n4_T = 2;      // full quadruple loop
  Int plane_n3_T = 25;     // pairs / decompose for n = 3
  Int index_n3_T = 12;     // full in-memory plane index (discovery route)
  Int nonprim_n3_T = 8;    // pairs / decompose without the primitivity filter
  Int primsum_n3_M = 500;
  Int primsum_n4_M = 60;
  Int schmidt_D = 200;
  Int partition_T = 40;
  Int enum_box = Int(1) << 31;

  void override_field(const std::string& key, Int value) {
    if (key == "brute_n2_T") brute_n2_T = value;
    else if (key == "brute_n3_T") brute_n3_T = value;
    else if (key == "brute_n4_T") brute_n4_T = value;
    else if (key == "plane_n3_T") plane_n3_T = value;
    else if (key == "index_n3_T") index_n3_T = value;
    else if (key == "nonprim_n3_T") nonprim_n3_T = value;
    else if (key == "primsum_n3_M") primsum_n3_M = value;
    else if (key == "primsum_n4_M") primsum_n4_M = value;
    else if (key == "schmidt_D") schmidt_D = value;
    else if (key == "partition_T") partition_T = value;
    else if (key == "enum_box") enum_box = value;
    else throw std::invalid_argument("unknown budget key '" + key + "'");
  }
};

namespace detail {

inline void check_budget(const char* what, const Radius& T, Int limit) {
  if ((Wide)T.num > (Wide)limit * T.den)
    throw budget_error(std::string(what) + ": T = " + T.str() + " exceeds the configured limit " +
                       std::to_string(limit));
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
};

// All vectors of Z^n in the closed ball of radius T, lexicographic order.
// primitive_only drops the zero vector and every proper multiple.
inline std::vector<std::vector<Int>> ball_vectors(int n, const Radius& T, bool primitive_only) {
  std::vector<std::vector<Int>> out;
  Int box = T.floor();
  std::vector<Int> x(size_t(n), -box);
  while (true) {
    Wide nsq = 0;
    for (Int c : x) nsq += (Wide)c * c;
    if ((Wide)nsq * T.den * T.den <= (Wide)T.num * T.num) {
      if (!primitive_only) {
        out.push_back(x);
      } else if (nsq > 0) {
        Int g = 0;
        for (Int c : x) g = gcd_int(g, c < 0 ? -c : c);
        if (g == 1) out.push_back(x);
      }
    }
    int i = n - 1;
    while (i >= 0 && x[size_t(i)] == box) {
      x[size_t(i)] = -box;
      --i;
    }
    if (i < 0) break;
    ++x[size_t(i)];
  }
  return out;
}

inline Int ball_count(int n, const Radius& T, bool primitive_only) {
  return Int(ball_vectors(n, T, primitive_only).size());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Plane index: canonical primitive normals with cached primitive counts.
// ---------------------------------------------------------------------------

// Index of the 2-dimensional sublattices of Z^3 that hold at least two
// independent primitive vectors of length <= T, keyed by their canonical
// primitive normal, with P_lambda(T) cached per plane.
class PlaneIndex {
 public:
  struct Entry {
    planes::Normal3 normal;
    Int count = 0;  // primitive points of length <= T in the plane
  };

  const std::vector<Entry>& entries() const { return entries_; }
  const Radius& radius() const { return T_; }

  // Discovery by normalized cross products of independent primitive pairs.
  static PlaneIndex build_via_pairs(const Radius& T, int threads) {
    auto vecs = detail::ball_vectors(3, T, true);
    size_t V = vecs.size();
    std::vector<std::vector<std::uint64_t>> keys(V);
    parallel_slabs(Int(V), threads, [&](Int i) {
      const auto& a = vecs[size_t(i)];
      auto& out = keys[size_t(i)];
      for (size_t j = size_t(i) + 1; j < V; ++j) {
        const auto& b = vecs[j];
        Int cx = a[1] * b[2] - a[2] * b[1];
        Int cy = a[2] * b[0] - a[0] * b[2];
        Int cz = a[0] * b[1] - a[1] * b[0];
        if (cx == 0 && cy == 0 && cz == 0) continue;
        Int g = planes::gcd3(cx, cy, cz);
        auto nrm = planes::canonical(cx / g, cy / g, cz / g);
        out.push_back(pack(nrm));
      }
    });
    std::vector<std::uint64_t> all;
    size_t total = 0;
    for (const auto& k : keys) total += k.size();
    all.reserve(total);
    for (const auto& k : keys) all.insert(all.end(), k.begin(), k.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    PlaneIndex idx;
    idx.T_ = T;
    idx.entries_.resize(all.size());
    auto mu = arith::mobius_sieve(std::max<Int>(T.floor(), 1));
    parallel_slabs(Int(all.size()), threads, [&](Int i) {
      auto nrm = unpack(all[size_t(i)]);
      Int p, q, r;
      planes::plane_gram(nrm.x, nrm.y, nrm.z, p, q, r);
      planes::gauss_reduce_gram(p, q, r);
      idx.entries_[size_t(i)] = Entry{nrm, planes::count_primitive_mobius(p, q, r, T, mu)};
    });
    return idx;
  }

  // The same plane set by direct enumeration of all primitive normals with
  // |lambda| <= T^2, keeping those whose plane has two independent vectors
  // of length <= T.  Cross-validates discovery; O(1) extra memory per slab.
  static PlaneIndex build_via_scan(const Radius& T, int threads) {
    Int nsq_max = Int(((Wide)T.num * T.num * T.num * T.num) / ((Wide)T.den * T.den * T.den * T.den));
    auto mu = arith::mobius_sieve(std::max<Int>(T.floor(), 1));
    Int xmax = isqrt(nsq_max);
    std::vector<std::vector<Entry>> per_slab(size_t(xmax) + 1);
    planes::scan_canonical_primitive(nsq_max, threads, [&](Int slab, Int a, Int b, Int c, Int nsq) {
      Int p, q, r;
      planes::plane_gram(a, b, c, p, q, r);
      if (!planes::gauss_reduce_gram_bounded(p, q, r, nsq, T.num, T.den)) return;
      per_slab[size_t(slab)].push_back(Entry{{a, b, c}, planes::count_primitive_mobius(p, q, r, T, mu)});
    });
    PlaneIndex idx;
    idx.T_ = T;
    for (auto& s : per_slab) idx.entries_.insert(idx.entries_.end(), s.begin(), s.end());
    std::sort(idx.entries_.begin(), idx.entries_.end(),
              [](const Entry& a, const Entry& b) { return pack(a.normal) < pack(b.normal); });
    return idx;
  }

  static std::uint64_t pack(const planes::Normal3& n) {
    constexpr std::uint64_t off = 1u << 20;
    return (std::uint64_t(n.x) << 42) | ((std::uint64_t(n.y + Int(off))) << 21) | std::uint64_t(n.z + Int(off));
  }
  static planes::Normal3 unpack(std::uint64_t k) {
    constexpr Int off = 1 << 20;
    return {Int(k >> 42), Int((k >> 21) & 0x1FFFFF) - off, Int(k & 0x1FFFFF) - off};
  }

 private:
  Radius T_;
  std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Exact counters for singular matrices.
// ---------------------------------------------------------------------------

// Full grid scan: every n-tuple of rows in the ball, exact determinant test.
inline CountRecord brute_force_count(int n, const Radius& T, bool primitive_only,
                                     const Budget& budget = {}, int threads = 0) {
  detail::Timer timer;
  if (n < 2 || n > 4) throw std::invalid_argument("brute_force_count: n must be 2, 3 or 4");
  if (n == 2) detail::check_budget("brute_force_count n=2", T, budget.brute_n2_T);
  if (n == 3) detail::check_budget("brute_force_count n=3", T, budget.brute_n3_T);
  if (n == 4) detail::check_budget("brute_force_count n=4", T, budget.brute_n4_T);

  auto vecs = detail::ball_vectors(n, T, primitive_only);
  Int V = Int(vecs.size());
  std::vector<Int> partial(size_t(V), 0);

  if (n == 2) {
    parallel_slabs(V, threads, [&](Int i) {
      const auto& a = vecs[size_t(i)];
      Int c = 0;
      for (const auto& b : vecs)
        if (a[0] * b[1] - a[1] * b[0] == 0) ++c;
      partial[size_t(i)] = c;
    });
  } else if (n == 3) {
    parallel_slabs(V, threads, [&](Int i) {
      const auto& a = vecs[size_t(i)];
      Int c = 0;
      for (const auto& b : vecs) {
        Int cx = a[1] * b[2] - a[2] * b[1];
        Int cy = a[2] * b[0] - a[0] * b[2];
        Int cz = a[0] * b[1] - a[1] * b[0];
        for (const auto& d : vecs)
          if (cx * d[0] + cy * d[1] + cz * d[2] == 0) ++c;
      }
      partial[size_t(i)] = c;
    });
  } else {
    parallel_slabs(V, threads, [&](Int i) {
      const auto& a = vecs[size_t(i)];
      Int c = 0;
      for (const auto& b : vecs)
        for (const auto& e : vecs) {
          // cofactor vector w with w . d = det(a, b, e, d)
          Int m01 = b[0] * e[1] - b[1] * e[0], m02 = b[0] * e[2] - b[2] * e[0];
          Int m03 = b[0] * e[3] - b[3] * e[0], m12 = b[1] * e[2] - b[2] * e[1];
          Int m13 = b[1] * e[3] - b[3] * e[1], m23 = b[2] * e[3] - b[3] * e[2];
          Int w0 = -(a[1] * m23 - a[2] * m13 + a[3] * m12);
          Int w1 = a[0] * m23 - a[2] * m03 + a[3] * m02;
          Int w2 = -(a[0] * m13 - a[1] * m03 + a[3] * m01);
          Int w3 = a[0] * m12 - a[1] * m02 + a[2] * m01;
          for (const auto& d : vecs)
            if (w0 * d[0] + w1 * d[1] + w2 * d[2] + w3 * d[3] == 0) ++c;
        }
      partial[size_t(i)] = c;
    });
  }
  CountRecord rec{n, T, CountMode::brute, primitive_only, 0, 0, 0};
  for (Int i = 0; i < V; ++i) rec.count += partial[size_t(i)];
  rec.elapsed_ms = timer.ms();
  return rec;
}

// n = 2 closed form: two primitive rows are collinear iff equal up to sign,
// so the count is twice the number of primitive vectors in the disc.
inline CountRecord pn2_exact(const Radius& T, int threads = 0) {
  detail::Timer timer;
  if (T.floor() < 1) throw std::invalid_argument("pn2_exact: requires T >= 1");
  Int xmax = T.floor();
  std::vector<Int> partial(size_t(xmax) + 1, 0);
  parallel_slabs(xmax + 1, threads, [&](Int x) {
    Wide tn2 = (Wide)T.num * T.num;
    Wide td2 = (Wide)T.den * T.den;
    Int c = 0;
    Wide rest = tn2 - td2 * x * x;
    Int ymax = isqrt_ratio(rest < 0 ? 0 : rest, td2);
    if (x == 0) {
      c = 2;  // (0, +-1)
    } else {
      for (Int y = -ymax; y <= ymax; ++y)
        if (gcd_int(x, y < 0 ? -y : y) == 1) ++c;
      c *= 2;  // x and -x halves
    }
    partial[size_t(x)] = c;
  });
  CountRecord rec{2, T, CountMode::closed2, true, 0, 0, 0};
  Int prim = 0;
  for (Int c : partial) prim += c;
  rec.count = 2 * prim;
  rec.elapsed_ms = timer.ms();
  return rec;
}

namespace detail {

// Per-line tally used by the non-primitive (all integer rows) counters:
// number of points of the line Z*d in the ball, m(d) = 2*floor(T/|d|), and
// the count of n-tuples drawn from a line including the zero vector.
inline Int line_points(const Radius& T, Int dir_norm_sq) {
  return 2 * isqrt_ratio((Wide)T.num * T.num, (Wide)T.den * T.den * dir_norm_sq);
}

inline Wide tuple_pow(Int base, int n) {
  Wide r = 1;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

// Rank <= 1 stratum of M_n(T): for every canonical primitive direction d,
// tuples with all rows on Z*d (zero rows allowed), the all-zero tuple
// counted once globally.
inline Int rank_le1_all(int n, const Radius& T) {
  auto prim = ball_vectors(n, T, true);
  Wide total = 1;  // the zero matrix
  for (const auto& d : prim) {
    bool canon = false;
    for (Int c : d) {
      if (c > 0) canon = true;
      if (c != 0) break;
    }
    if (!canon) continue;
    Wide nsq = 0;
    for (Int c : d) nsq += (Wide)c * c;
    Int m = line_points(T, Int(nsq));
    total += tuple_pow(m + 1, n) - 1;
  }
  return Int(total);
}

}  // namespace detail

// Ordered-pair oracle for n = 3: sum over ordered pairs of first rows of the
// number of admissible third rows.  Collinear or rank-deficient prefixes
// admit every row in the ball; independent prefixes admit exactly the rows
// of their plane.
inline CountRecord pair_oracle_pn3(const Radius& T, bool primitive_only = true,
                                   const Budget& budget = {}, int threads = 0) {
  detail::Timer timer;
  detail::check_budget("pair_oracle_pn3", T, primitive_only ? budget.plane_n3_T : budget.nonprim_n3_T);

  CountRecord rec{3, T, CountMode::pairs, primitive_only, 0, 0, 0};

  if (!primitive_only) {
    // modest sizes only: memoized N_lambda per discovered plane
    auto vecs = detail::ball_vectors(3, T, false);
    Int all_rows = Int(vecs.size());  // includes the zero row
    std::map<std::uint64_t, Int> memo;
    Wide total = 0;
    for (size_t i = 0; i < vecs.size(); ++i) {
      for (size_t j = 0; j < vecs.size(); ++j) {
        const auto& a = vecs[i];
        const auto& b = vecs[j];
        Int cx = a[1] * b[2] - a[2] * b[1];
        Int cy = a[2] * b[0] - a[0] * b[2];
        Int cz = a[0] * b[1] - a[1] * b[0];
        if (cx == 0 && cy == 0 && cz == 0) {
          total += all_rows;  // two dependent rows: any third row is singular
          continue;
        }
        Int g = planes::gcd3(cx, cy, cz);
        auto nrm = planes::canonical(cx / g, cy / g, cz / g);
        auto key = PlaneIndex::pack(nrm);
        auto it = memo.find(key);
        Int inplane;
        if (it == memo.end()) {
          Int p, q, r;
          planes::plane_gram(nrm.x, nrm.y, nrm.z, p, q, r);
          planes::gauss_reduce_gram(p, q, r);
          inplane = planes::count_all(p, q, r, (Wide)T.num * T.num, (Wide)T.den * T.den) + 1;
          memo.emplace(key, inplane);
        } else {
          inplane = it->second;
        }
        total += inplane;
      }
    }
    rec.count = Int(total);
    rec.planes_visited = Int(memo.size());
    rec.elapsed_ms = timer.ms();
    return rec;
  }

  auto vecs = detail::ball_vectors(3, T, true);
  Int P3 = Int(vecs.size());

  if ((Wide)T.num <= (Wide)budget.index_n3_T * T.den) {
    // full index: discovery by cross products, then a literal pair sweep
    auto idx = PlaneIndex::build_via_pairs(T, threads);
    const auto& entries = idx.entries();
    std::vector<std::uint64_t> keys(entries.size());
    for (size_t i = 0; i < entries.size(); ++i) keys[i] = PlaneIndex::pack(entries[i].normal);
    std::vector<Int> partial(vecs.size(), 0);
    parallel_slabs(Int(vecs.size()), threads, [&](Int i) {
      const auto& a = vecs[size_t(i)];
      Wide acc = 0;
      for (size_t j = size_t(i) + 1; j < vecs.size(); ++j) {
        const auto& b = vecs[j];
        Int cx = a[1] * b[2] - a[2] * b[1];
        Int cy = a[2] * b[0] - a[0] * b[2];
        Int cz = a[0] * b[1] - a[1] * b[0];
        if (cx == 0 && cy == 0 && cz == 0) continue;
        Int g = planes::gcd3(cx, cy, cz);
        auto key = PlaneIndex::pack(planes::canonical(cx / g, cy / g, cz / g));
        size_t pos = size_t(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin());
        acc += 2 * entries[pos].count;  // (a,b) and (b,a)
      }
      partial[size_t(i)] = Int(acc);
    });
    Wide total = 2 * (Wide)P3 * P3;  // ordered collinear pairs (v, +-v) admit any primitive row
    for (Int c : partial) total += c;
    rec.count = Int(total);
    rec.planes_visited = Int(entries.size());
    rec.elapsed_ms = timer.ms();
    return rec;
  }

  // Large T: the full index would not fit in memory.  Small-determinant
  // planes (visited quadratically often) are precomputed into a direct
  // address table; the long tail is recounted per pair, which is cheap
  // because such planes hold only a handful of points.
  const Int R0 = 120;
  const Int R0sq = R0 * R0;
  auto mu = arith::mobius_sieve(std::max<Int>(T.floor(), 1));
  const size_t dim_y = size_t(2 * R0 + 1);
  std::vector<std::int32_t> table(size_t(R0 + 1) * dim_y * dim_y, 0);
  auto slot = [&](Int x, Int y, Int z) {
    return (size_t(x) * dim_y + size_t(y + R0)) * dim_y + size_t(z + R0);
  };
  std::atomic<Int> cached_planes{0};
  planes::scan_canonical_primitive(R0sq, threads, [&](Int, Int a, Int b, Int c, Int nsq) {
    Int p, q, r;
    planes::plane_gram(a, b, c, p, q, r);
    if (!planes::gauss_reduce_gram_bounded(p, q, r, nsq, T.num, T.den)) return;
    table[slot(a, b, c)] = std::int32_t(planes::count_primitive_mobius(p, q, r, T, mu));
    cached_planes.fetch_add(1, std::memory_order_relaxed);
  });

  std::vector<Int> partial(vecs.size(), 0);
  std::vector<Int> evals(vecs.size(), 0);
  parallel_slabs(Int(vecs.size()), threads, [&](Int i) {
    const auto& a = vecs[size_t(i)];
    Wide acc = 0;
    Int ev = 0;
    for (size_t j = size_t(i) + 1; j < vecs.size(); ++j) {
      const auto& b = vecs[j];
      Int cx = a[1] * b[2] - a[2] * b[1];
      Int cy = a[2] * b[0] - a[0] * b[2];
      Int cz = a[0] * b[1] - a[1] * b[0];
      if (cx == 0 && cy == 0 && cz == 0) continue;
      Int g = planes::gcd3(cx, cy, cz);
      auto nrm = planes::canonical(cx / g, cy / g, cz / g);
      Int nsq = nrm.norm_sq();
      Int pl;
      if (nsq <= R0sq) {
        pl = table[slot(nrm.x, nrm.y, nrm.z)];
      } else {
        Int p, q, r;
        planes::plane_gram(nrm.x, nrm.y, nrm.z, p, q, r);
        planes::gauss_reduce_gram(p, q, r);
        pl = planes::count_primitive_direct(p, q, r, T);
        ++ev;
      }
      acc += 2 * pl;
    }
    partial[size_t(i)] = Int(acc);
    evals[size_t(i)] = ev;
  });
  Wide total = 2 * (Wide)P3 * P3;
  Wide ev_total = 0;
  for (size_t i = 0; i < vecs.size(); ++i) {
    total += partial[i];
    ev_total += evals[i];
  }
  rec.count = Int(total);
  rec.planes_visited = cached_planes.load() + Int(ev_total);  // upper bound on distinct planes
  rec.elapsed_ms = timer.ms();
  return rec;
}

// Plane decomposition for n = 3: matrices are stratified by the rank of
// their row span.  Rank-2 matrices live in a unique plane and contribute
// P^3 - 4P there (removing same-line triples); the rank <= 1 stratum is
// added once globally.
inline CountRecord decompose_pn3(const Radius& T, bool primitive_only = true,
                                 const Budget& budget = {}, int threads = 0) {
  detail::Timer timer;
  detail::check_budget("decompose_pn3", T, primitive_only ? budget.plane_n3_T : budget.nonprim_n3_T);

  CountRecord rec{3, T, CountMode::decompose, primitive_only, 0, 0, 0};

  if (!primitive_only) {
    auto idx = PlaneIndex::build_via_pairs(T, threads);
    Wide total = detail::rank_le1_all(3, T);
    auto mu = arith::mobius_sieve(std::max<Int>(T.floor(), 1));
    Wide tn2 = (Wide)T.num * T.num, td2 = (Wide)T.den * T.den;
    for (const auto& e : idx.entries()) {
      Int p, q, r;
      planes::plane_gram(e.normal.x, e.normal.y, e.normal.z, p, q, r);
      planes::gauss_reduce_gram(p, q, r);
      Int all_pts = planes::count_all(p, q, r, tn2, td2);
      // same-line triples inside the plane, counted per primitive direction
      Wide line_triples = 1;  // zero matrix, re-added globally; subtract it here
      Wide plane_cube = detail::tuple_pow(all_pts + 1, 3);
      // enumerate canonical primitive directions in the plane
      Int ymax = isqrt_ratio(tn2 * p, td2 * ((Wide)p * r - (Wide)q * q));
      Wide A = (Wide)p * td2;
      Wide lines_sum = 0;
      {
        // x-axis direction (+-b1)
        if ((Wide)p * td2 <= tn2) {
          Int mline = detail::line_points(T, p);
          lines_sum += detail::tuple_pow(mline + 1, 3) - 1;
        }
        for (Int y = 1; y <= ymax; ++y) {
          Wide B = (Wide)q * td2 * y;
          Wide C = (Wide)r * td2 * y * y - tn2;
          Int lo, hi;
          if (!planes::quad_range(A, B, C, lo, hi)) continue;
          for (Int x = lo; x <= hi; ++x) {
            if (gcd_int(x < 0 ? -x : x, y) != 1) continue;
            Int dn = Int(((Wide)p * x * x + 2 * (Wide)q * x * y + (Wide)r * y * y));
            Int mline = detail::line_points(T, dn);
            lines_sum += detail::tuple_pow(mline + 1, 3) - 1;
          }
        }
      }
      total += plane_cube - lines_sum - line_triples;
    }
    rec.count = Int(total);
    rec.planes_visited = Int(idx.entries().size());
    rec.elapsed_ms = timer.ms();
    return rec;
  }

  Int P3 = detail::ball_count(3, T, true);
  if ((Wide)T.num <= (Wide)budget.index_n3_T * T.den) {
    auto idx = PlaneIndex::build_via_pairs(T, threads);
    Wide total = 4 * (Wide)P3;
    for (const auto& e : idx.entries()) total += (Wide)e.count * e.count * e.count - 4 * (Wide)e.count;
    rec.count = Int(total);
    rec.planes_visited = Int(idx.entries().size());
    rec.elapsed_ms = timer.ms();
    return rec;
  }

  // Large T: direct scan over all candidate normals |lambda| <= T^2 with an
  // early unboundedness rejection; planes without two independent short
  // vectors contribute exactly 0 and are skipped.
  Int nsq_max = Int(((Wide)T.num * T.num * T.num * T.num) / ((Wide)T.den * T.den * T.den * T.den));
  auto mu = arith::mobius_sieve(std::max<Int>(T.floor(), 1));
  Int xmax = isqrt(nsq_max);
  std::vector<Wide> partial(size_t(xmax) + 1, 0);
  std::vector<Int> visited(size_t(xmax) + 1, 0);
  planes::scan_canonical_primitive(nsq_max, threads, [&](Int slab, Int a, Int b, Int c, Int nsq) {
    Int p, q, r;
    planes::plane_gram(a, b, c, p, q, r);
    if (!planes::gauss_reduce_gram_bounded(p, q, r, nsq, T.num, T.den)) return;
    Int pl = planes::count_primitive_mobius(p, q, r, T, mu);
    if (pl < 4) return;
    partial[size_t(slab)] += (Wide)pl * pl * pl - 4 * (Wide)pl;
    visited[size_t(slab)] += 1;
  });
  Wide total = 4 * (Wide)P3;
  for (size_t i = 0; i < partial.size(); ++i) {
    total += partial[i];
    rec.planes_visited += visited[i];
  }
  rec.count = Int(total);
  rec.elapsed_ms = timer.ms();
  return rec;
}

// n = 2 oracle and decomposition counterparts (lines instead of planes).
inline CountRecord count_n2(const Radius& T, CountMode mode, bool primitive_only) {
  detail::Timer timer;
  CountRecord rec{2, T, mode, primitive_only, 0, 0, 0};
  if (mode == CountMode::pairs) {
    auto vecs = detail::ball_vectors(2, T, primitive_only);
    Wide total = 0;
    for (const auto& v : vecs) {
      if (v[0] == 0 && v[1] == 0) {
        total += Wide(vecs.size());  // zero first row: any second row
        continue;
      }
      if (primitive_only) {
        total += 2;  // +-v
      } else {
        Int g = gcd_int(v[0] < 0 ? -v[0] : v[0], v[1] < 0 ? -v[1] : v[1]);
        Int dn = Int(((Wide)v[0] * v[0] + (Wide)v[1] * v[1]) / ((Wide)g * g));
        total += detail::line_points(T, dn) + 1;  // line points plus the zero row
      }
    }
    rec.count = Int(total);
  } else if (mode == CountMode::decompose) {
    auto prim = detail::ball_vectors(2, T, true);
    if (primitive_only) {
      rec.count = 2 * Int(prim.size());  // 4 matrices per line, P/2 lines
      rec.planes_visited = Int(prim.size()) / 2;
    } else {
      Wide total = 1;  // zero matrix
      Int lines = 0;
      for (const auto& d : prim) {
        if (d[0] < 0 || (d[0] == 0 && d[1] < 0)) continue;  // canonical half
        Int m = detail::line_points(T, d[0] * d[0] + d[1] * d[1]);
        total += detail::tuple_pow(m + 1, 2) - 1;
        ++lines;
      }
      rec.count = Int(total);
      rec.planes_visited = lines;
    }
  } else {
    throw std::invalid_argument("count_n2: mode must be pairs or decompose");
  }
  rec.elapsed_ms = timer.ms();
  return rec;
}

// Unified dispatch used by the CLI and the test suites.
inline CountRecord count_singular(int n, const Radius& T, CountMode mode, bool primitive_only,
                                  const Budget& budget = {}, int threads = 0) {
  switch (mode) {
    case CountMode::brute:
      return brute_force_count(n, T, primitive_only, budget, threads);
    case CountMode::closed2:
      if (n != 2) throw std::invalid_argument("mode closed2 requires n = 2");
      if (!primitive_only) throw std::invalid_argument("mode closed2 counts primitive rows only");
      return pn2_exact(T, threads);
    case CountMode::pairs:
      if (n == 2) return count_n2(T, mode, primitive_only);
      if (n == 3) return pair_oracle_pn3(T, primitive_only, budget, threads);
      throw std::invalid_argument("mode pairs requires n in {2, 3}");
    case CountMode::decompose:
      if (n == 2) return count_n2(T, mode, primitive_only);
      if (n == 3) return decompose_pn3(T, primitive_only, budget, threads);
      throw std::invalid_argument("mode decompose requires n in {2, 3}");
  }
  throw std::invalid_argument("count_singular: unknown mode");
}

// The same methods with the primitivity filter off (counts N_n(T)).
inline CountRecord count_all_rows(int n, const Radius& T, CountMode mode, const Budget& budget = {},
                                  int threads = 0) {
  return count_singular(n, T, mode, false, budget, threads);
}

}  // namespace singmat::singular
