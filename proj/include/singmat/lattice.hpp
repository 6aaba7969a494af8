#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "singmat/base.hpp"
#include "singmat/vec.hpp"

namespace singmat::lattice {

using Matrix = std::vector<std::vector<Int>>;

// ---------------------------------------------------------------------------
// Small exact integer matrix helpers (dimensions <= 4 everywhere below).
// ---------------------------------------------------------------------------

inline Wide det_wide(const Matrix& m) {
  size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return (Wide)m[0][0] * m[1][1] - (Wide)m[0][1] * m[1][0];
  Wide d = 0;
  // cofactor expansion along the first row
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    Matrix sub(n - 1, std::vector<Int>(n - 1));
    for (size_t r = 1; r < n; ++r) {
      size_t cc = 0;
      for (size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        sub[r - 1][cc++] = m[r][c];
      }
    }
    Wide term = (Wide)m[0][j] * det_wide(sub);
    d += (j % 2 == 0) ? term : -term;
  }
  return d;
}

// Row-style Hermite normal form: returns H with pivot columns strictly
// increasing, positive pivots, entries above each pivot reduced into
// [0, pivot).  Zero rows sink to the bottom.  If `transform` is given it
// receives a unimodular U with H = U * M.
inline Matrix hnf_rows(Matrix m, Matrix* transform = nullptr) {
  size_t rows = m.size();
  size_t cols = rows ? m[0].size() : 0;
  Matrix u;
  if (transform) {
    u.assign(rows, std::vector<Int>(rows, 0));
    for (size_t i = 0; i < rows; ++i) u[i][i] = 1;
  }
  auto row_op = [&](size_t dst, size_t src, Int f) {
    for (size_t c = 0; c < cols; ++c) m[dst][c] += f * m[src][c];
    if (transform)
      for (size_t c = 0; c < rows; ++c) u[dst][c] += f * u[src][c];
  };
  auto row_swap = [&](size_t a, size_t b) {
    std::swap(m[a], m[b]);
    if (transform) std::swap(u[a], u[b]);
  };
  auto row_negate = [&](size_t r) {
    for (auto& x : m[r]) x = -x;
    if (transform)
      for (auto& x : u[r]) x = -x;
  };

  size_t pivot_row = 0;
  for (size_t col = 0; col < cols && pivot_row < rows; ++col) {
    // gcd the column into pivot_row; the pivot is kept positive so the
    // floor-division remainders strictly decrease
    for (size_t r = pivot_row + 1; r < rows; ++r) {
      while (m[r][col] != 0) {
        if (m[pivot_row][col] == 0) {
          row_swap(pivot_row, r);
          continue;
        }
        if (m[pivot_row][col] < 0) row_negate(pivot_row);
        Int q = floor_div(m[r][col], m[pivot_row][col]);
        row_op(r, pivot_row, -q);
        if (m[r][col] != 0) row_swap(pivot_row, r);
      }
    }
    if (m[pivot_row][col] == 0) continue;
    if (m[pivot_row][col] < 0) row_negate(pivot_row);
    for (size_t r = 0; r < pivot_row; ++r) {
      Int q = floor_div(m[r][col], m[pivot_row][col]);
      if (q != 0) row_op(r, pivot_row, -q);
    }
    ++pivot_row;
  }
  if (transform) *transform = std::move(u);
  return m;
}

// ---------------------------------------------------------------------------
// SubLattice
// ---------------------------------------------------------------------------

// An m-dimensional sublattice of Z^n given by an integer basis, with its
// exact Gram matrix and squared determinant.  Immutable after construction.
class SubLattice {
 public:
  static SubLattice from_basis(std::vector<IntVec> basis) {
    if (basis.empty()) throw std::invalid_argument("SubLattice: empty basis");
    int n = basis[0].dim();
    for (const auto& v : basis)
      if (v.dim() != n) throw std::invalid_argument("SubLattice: mixed dimensions");
    int m = int(basis.size());
    if (m > n) throw std::invalid_argument("SubLattice: rank exceeds ambient dimension");
    auto gram = Matrix(size_t(m), std::vector<Int>(size_t(m)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) gram[size_t(i)][size_t(j)] = dot(basis[size_t(i)], basis[size_t(j)]);
    Wide d = det_wide(gram);
    if (d <= 0) throw std::invalid_argument("SubLattice: basis rows are linearly dependent");
    SubLattice L;
    L.ambient_ = n;
    L.rank_ = m;
    L.basis_ = std::move(basis);
    L.gram_ = std::move(gram);
    L.det_sq_ = (Int)d;
    return L;
  }

  static SubLattice standard(int n) {
    std::vector<IntVec> b;
    for (int i = 0; i < n; ++i) {
      std::vector<Int> c(size_t(n), 0);
      c[size_t(i)] = 1;
      b.emplace_back(std::move(c));
    }
    return from_basis(std::move(b));
  }

  int ambient() const { return ambient_; }
  int rank() const { return rank_; }
  const std::vector<IntVec>& basis() const { return basis_; }
  Int gram(int i, int j) const { return gram_[size_t(i)][size_t(j)]; }
  const Matrix& gram_matrix() const { return gram_; }
  Int det_sq() const { return det_sq_; }

  // Ambient vector of the coefficient combination sum x_i * b_i.
  IntVec combine(std::span<const Int> x) const {
    std::vector<Int> c(size_t(ambient_), 0);
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < ambient_; ++j) c[size_t(j)] += x[size_t(i)] * basis_[size_t(i)][j];
    return IntVec(std::move(c));
  }

  // Canonical row-HNF of the basis; two sublattices are equal iff these match.
  Matrix hnf_basis() const {
    Matrix m;
    for (const auto& v : basis_) m.push_back(v.coords());
    Matrix h = hnf_rows(std::move(m));
    h.resize(size_t(rank_));  // full-rank input: trailing rows are zero-free
    return h;
  }

  // Exact membership: does v lie in this sublattice (integer combination)?
  bool contains(const IntVec& v) const {
    if (v.dim() != ambient_) return false;
    Matrix h = hnf_basis();
    std::vector<Int> rem = v.coords();
    for (const auto& row : h) {
      size_t p = 0;
      while (p < row.size() && row[p] == 0) ++p;
      if (p == row.size()) continue;
      // later HNF rows are zero in column p, so the pivot must divide exactly
      if (rem[p] % row[p] != 0) return false;
      Int q = rem[p] / row[p];
      for (size_t c = 0; c < rem.size(); ++c) rem[c] -= q * row[c];
    }
    for (Int x : rem)
      if (x != 0) return false;
    return true;
  }

 private:
  int ambient_ = 0;
  int rank_ = 0;
  std::vector<IntVec> basis_;
  Matrix gram_;
  Int det_sq_ = 0;
};

// ---------------------------------------------------------------------------
// Orthogonal complements via the unimodular kernel (Hermite normal form).
// ---------------------------------------------------------------------------

// Basis of { v in Z^n : v . u = 0 for every basis row u }.  Computed from the
// unimodular transform of the HNF of the transposed basis; the result is a
// primitive sublattice, canonicalized to row HNF.
inline std::vector<IntVec> kernel_basis(const Matrix& basis_rows, int ambient) {
  size_t m = basis_rows.size();
  auto bt = Matrix(size_t(ambient), std::vector<Int>(m));
  for (size_t i = 0; i < m; ++i)
    for (int j = 0; j < ambient; ++j) bt[size_t(j)][i] = basis_rows[i][size_t(j)];
  Matrix u;
  Matrix h = hnf_rows(std::move(bt), &u);
  std::vector<IntVec> kernel;
  for (size_t r = 0; r < h.size(); ++r) {
    bool zero = true;
    for (Int x : h[r])
      if (x != 0) zero = false;
    if (zero) kernel.emplace_back(u[r]);
  }
  if (kernel.empty()) return kernel;
  Matrix k;
  for (const auto& v : kernel) k.push_back(v.coords());
  Matrix canon = hnf_rows(std::move(k));
  std::vector<IntVec> out;
  for (size_t r = 0; r < kernel.size(); ++r) out.emplace_back(canon[r]);
  return out;
}

// The rank-(n-1) primitive sublattice orthogonal to a primitive lambda.
// Its squared determinant equals norm_sq(lambda) exactly.
inline SubLattice orthogonal_complement(const IntVec& lambda) {
  if (lambda.is_zero()) throw std::invalid_argument("orthogonal_complement: lambda must be nonzero");
  if (lambda.dim() < 2) throw std::invalid_argument("orthogonal_complement: ambient dimension must be >= 2");
  if (!lambda.is_primitive()) throw std::invalid_argument("orthogonal_complement: lambda must be primitive");
  Matrix rows{lambda.coords()};
  auto k = kernel_basis(rows, lambda.dim());
  return SubLattice::from_basis(std::move(k));
}

inline SubLattice orthogonal_complement(const SubLattice& L) {
  Matrix rows;
  for (const auto& v : L.basis()) rows.push_back(v.coords());
  auto k = kernel_basis(rows, L.ambient());
  if (k.empty()) throw std::invalid_argument("orthogonal_complement: full-rank lattice has trivial complement");
  return SubLattice::from_basis(std::move(k));
}

// ---------------------------------------------------------------------------
// Exact coefficient enumeration (Fincke-Pohst box over a given basis).
// ---------------------------------------------------------------------------

// Visits every nonzero coefficient vector x with Q(x) <= radius_sq, in
// lexicographic order over (x_1, .., x_m).  The per-coordinate box comes from
// the exact dual bound x_i^2 * det <= radius_sq * adj_ii; every candidate is
// then checked with an exact integer quadratic form evaluation.
// `box_guard` caps the box cell count to keep memory/time bounded.
template <class Visitor>
inline void enumerate_coefficients(const SubLattice& L, Fraction radius_sq, Int box_guard, Visitor&& visit) {
  if (L.rank() > 3) throw std::invalid_argument("enumerate_coefficients: rank must be <= 3");
  if (radius_sq.num <= 0) throw std::invalid_argument("enumerate_coefficients: radius_sq must be positive");
  int m = L.rank();
  const Matrix& g = L.gram_matrix();
  Int det = L.det_sq();

  std::array<Int, 3> bound{0, 0, 0};
  for (int i = 0; i < m; ++i) {
    Wide adj;
    if (m == 1) {
      adj = 1;
    } else if (m == 2) {
      adj = g[size_t(1 - i)][size_t(1 - i)];
    } else {
      int a = (i + 1) % 3, b = (i + 2) % 3;
      adj = (Wide)g[size_t(a)][size_t(a)] * g[size_t(b)][size_t(b)] - (Wide)g[size_t(a)][size_t(b)] * g[size_t(a)][size_t(b)];
    }
    // x_i^2 <= radius_sq * adj / det
    bound[size_t(i)] = isqrt_ratio((Wide)radius_sq.num * adj, (Wide)radius_sq.den * det);
  }
  Wide cells = 1;
  for (int i = 0; i < m; ++i) cells *= 2 * (Wide)bound[size_t(i)] + 1;
  if (cells > box_guard)
    throw budget_error("enumerate_coefficients: coefficient box of " + to_string_wide(cells) +
                       " cells exceeds the safety bound " + std::to_string(box_guard));

  std::array<Int, 3> x{0, 0, 0};
  auto qform = [&](int mm) {
    Wide q = 0;
    for (int i = 0; i < mm; ++i)
      for (int j = 0; j < mm; ++j) q += (Wide)g[size_t(i)][size_t(j)] * x[size_t(i)] * x[size_t(j)];
    return q;
  };
  Wide rn = radius_sq.num, rd = radius_sq.den;
  for (x[0] = -bound[0]; x[0] <= bound[0]; ++x[0]) {
    if (m == 1) {
      if (x[0] != 0 && qform(1) * rd <= rn) visit(std::span<const Int>(x.data(), 1), (Int)qform(1));
      continue;
    }
    for (x[1] = -bound[1]; x[1] <= bound[1]; ++x[1]) {
      if (m == 2) {
        if ((x[0] != 0 || x[1] != 0)) {
          Wide q = qform(2);
          if (q * rd <= rn) visit(std::span<const Int>(x.data(), 2), (Int)q);
        }
        continue;
      }
      for (x[2] = -bound[2]; x[2] <= bound[2]; ++x[2]) {
        if (x[0] == 0 && x[1] == 0 && x[2] == 0) continue;
        Wide q = qform(3);
        if (q * rd <= rn) visit(std::span<const Int>(x.data(), 3), (Int)q);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Reduction: minimal length-product bases for rank <= 3, exact.
// ---------------------------------------------------------------------------

// Basis sorted by nondecreasing norm whose length product is minimal among
// all bases; for rank <= 3 its norms are exactly the successive minima.
struct ReducedBasis {
  std::vector<IntVec> vectors;
  std::vector<Int> norms_sq;

  // Squared Minkowski-style product bound used by tests: the squared length
  // product of the reduced basis is at most (4/3)^{m(m-1)/2} * det_sq.
  static Fraction product_bound_sq(int rank) {
    Int e = rank * (rank - 1) / 2;
    Int n = 1, d = 1;
    for (Int i = 0; i < e; ++i) {
      n *= 4;
      d *= 3;
    }
    return Fraction(n, d);
  }
};

namespace detail {

inline IntVec sign_canonical(const IntVec& v) {
  for (int i = 0; i < v.dim(); ++i) {
    if (v[i] > 0) return v;
    if (v[i] < 0) return v.negated();
  }
  return v;
}

inline void sort_basis(std::vector<IntVec>& b) {
  for (auto& v : b) v = sign_canonical(v);
  std::sort(b.begin(), b.end(), [](const IntVec& x, const IntVec& y) {
    if (x.norm_sq() != y.norm_sq()) return x.norm_sq() < y.norm_sq();
    return x < y;
  });
}

// Lagrange-Gauss reduction; the output attains both successive minima.
inline std::vector<IntVec> gauss_reduce(IntVec a, IntVec b) {
  if (a.norm_sq() > b.norm_sq()) std::swap(a, b);
  while (true) {
    Int q = round_div(dot(a, b), a.norm_sq());
    if (q != 0) {
      std::vector<Int> c(b.coords());
      for (int i = 0; i < a.dim(); ++i) c[size_t(i)] -= q * a[i];
      b = IntVec(std::move(c));
    }
    if (b.norm_sq() >= a.norm_sq()) break;
    std::swap(a, b);
  }
  std::vector<IntVec> out{a, b};
  sort_basis(out);
  return out;
}

// One greedy size-reduction sweep for rank 3: reduce each vector against the
// others until no single-step improvement remains.
inline std::vector<IntVec> greedy_reduce3(std::vector<IntVec> b) {
  bool changed = true;
  int guard = 0;
  while (changed && ++guard < 1000) {
    changed = false;
    std::sort(b.begin(), b.end(), [](const IntVec& x, const IntVec& y) { return x.norm_sq() < y.norm_sq(); });
    for (size_t i = 1; i < b.size(); ++i) {
      for (size_t j = 0; j < i; ++j) {
        Int q = round_div(dot(b[i], b[j]), b[j].norm_sq());
        if (q == 0) continue;
        std::vector<Int> c(b[i].coords());
        for (int k = 0; k < b[i].dim(); ++k) c[size_t(k)] -= q * b[j][k];
        IntVec nv(std::move(c));
        if (nv.norm_sq() < b[i].norm_sq()) {
          b[i] = std::move(nv);
          changed = true;
        }
      }
    }
  }
  return b;
}

}  // namespace detail

// Reduced (minimal length-product) basis, certified exactly:
//   rank 1: the basis vector;
//   rank 2: Lagrange-Gauss;
//   rank 3: greedy reduction, then exhaustive search over all short vectors
//           for the product-minimal basis triple.
inline ReducedBasis reduce(const SubLattice& L) {
  if (L.rank() > 3)
    throw std::invalid_argument("reduce: rank " + std::to_string(L.rank()) + " not supported (exact paths stop at rank 3)");
  ReducedBasis out;
  if (L.rank() == 1) {
    out.vectors = {detail::sign_canonical(L.basis()[0])};
  } else if (L.rank() == 2) {
    out.vectors = detail::gauss_reduce(L.basis()[0], L.basis()[1]);
  } else {
    auto greedy = detail::greedy_reduce3(L.basis());
    detail::sort_basis(greedy);
    SubLattice G = SubLattice::from_basis(greedy);
    // Candidates: every lattice vector no longer than the current longest
    // basis vector (any minimal basis lives among them), one per +/- pair,
    // in coefficient coordinates relative to the greedy basis.
    struct Cand {
      std::array<Int, 3> x;
      Int nsq;
    };
    std::vector<Cand> cands;
    enumerate_coefficients(G, Fraction(greedy[2].norm_sq(), 1), Int(1) << 34, [&](std::span<const Int> x, Int nsq) {
      for (size_t i = 0; i < 3; ++i) {
        if (x[i] > 0) break;
        if (x[i] < 0) return;
      }
      cands.push_back({{x[0], x[1], x[2]}, nsq});
    });
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.nsq != b.nsq) return a.nsq < b.nsq;
      return a.x < b.x;
    });
    auto det3 = [](const std::array<Int, 3>& a, const std::array<Int, 3>& b, const std::array<Int, 3>& c) {
      return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
             a[2] * (b[0] * c[1] - b[1] * c[0]);
    };
    // Minimizing the length product is the same as minimizing the product of
    // squared norms; the latter stays within 128 bits.
    Wide best = (Wide)greedy[0].norm_sq() * greedy[1].norm_sq() * greedy[2].norm_sq();
    std::array<std::array<Int, 3>, 3> best_x = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    size_t N = cands.size();
    for (size_t i = 0; i < N; ++i) {
      Wide ni = cands[i].nsq;
      if (ni * ni * ni > best) break;
      for (size_t j = i + 1; j < N; ++j) {
        Wide pij = ni * cands[j].nsq;
        if (pij * cands[j].nsq > best) break;
        for (size_t k = j + 1; k < N; ++k) {
          Wide p = pij * cands[k].nsq;
          if (p >= best) break;
          Int d = det3(cands[i].x, cands[j].x, cands[k].x);
          if (d == 1 || d == -1) {
            best_x = {cands[i].x, cands[j].x, cands[k].x};
            best = p;
            break;  // later k only increases the product for this (i, j)
          }
        }
      }
    }
    out.vectors = {G.combine(best_x[0]), G.combine(best_x[1]), G.combine(best_x[2])};
  }
  detail::sort_basis(out.vectors);
  for (const auto& v : out.vectors) out.norms_sq.push_back(v.norm_sq());
  return out;
}

// Exact squared successive minima via Fincke-Pohst enumeration below the
// reduced-basis norm bound.
inline std::vector<Int> successive_minima(const SubLattice& L) {
  ReducedBasis rb = reduce(L);
  SubLattice R = SubLattice::from_basis(rb.vectors);
  int m = L.rank();
  struct Pt {
    std::array<Int, 3> x;
    Int nsq;
  };
  std::vector<Pt> pts;
  enumerate_coefficients(R, Fraction(rb.norms_sq.back(), 1), Int(1) << 34, [&](std::span<const Int> x, Int nsq) {
    Pt p{{0, 0, 0}, nsq};
    for (int i = 0; i < m; ++i) p.x[size_t(i)] = x[size_t(i)];
    pts.push_back(p);
  });
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    if (a.nsq != b.nsq) return a.nsq < b.nsq;
    return a.x < b.x;
  });
  std::vector<std::array<Int, 3>> chosen;
  std::vector<Int> minima;
  auto independent = [&](const std::array<Int, 3>& x) {
    if (chosen.empty()) return true;
    if (chosen.size() == 1) {
      const auto& a = chosen[0];
      return a[1] * x[2] - a[2] * x[1] != 0 || a[2] * x[0] - a[0] * x[2] != 0 || a[0] * x[1] - a[1] * x[0] != 0;
    }
    const auto& a = chosen[0];
    const auto& b = chosen[1];
    Wide d = (Wide)a[0] * (b[1] * x[2] - b[2] * x[1]) - (Wide)a[1] * (b[0] * x[2] - b[2] * x[0]) +
             (Wide)a[2] * (b[0] * x[1] - b[1] * x[0]);
    return d != 0;
  };
  for (const auto& p : pts) {
    if (int(minima.size()) == m) break;
    if (independent(p.x)) {
      chosen.push_back(p.x);
      minima.push_back(p.nsq);
    }
  }
  if (int(minima.size()) != m) throw std::logic_error("successive_minima: enumeration missed an independent vector");
  return minima;
}

// True iff the largest successive minimum is <= T (exact squared compare).
inline bool is_bounded_by(const SubLattice& L, const Radius& T) {
  auto mins = successive_minima(L);
  return T.contains_scaled(mins.back());
}

}  // namespace singmat::lattice
