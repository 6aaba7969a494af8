#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "singmat/counting.hpp"
#include "singmat/rng.hpp"

using namespace singmat;
using lattice::SubLattice;

TEST_CASE("enumerate_points on Z^2, radius_sq 4") {
  auto L = SubLattice::standard(2);
  std::vector<IntVec> pts;
  counting::enumerate_points(L, Fraction(4, 1), [&](const IntVec& v, Int) { pts.push_back(v); });
  CHECK(pts.size() == 12);
  std::set<IntVec> uniq(pts.begin(), pts.end());
  CHECK(uniq.size() == 12);
  auto grid = oracle::ball_grid(2, Radius(2), false);
  CHECK(uniq == std::set<IntVec>(grid.begin(), grid.end()));
}

TEST_CASE("enumerate_points in the plane x+y+z=0, radius_sq 2") {
  auto L = lattice::orthogonal_complement(IntVec{1, 1, 1});
  std::set<IntVec> pts;
  counting::enumerate_points(L, Fraction(2, 1), [&](const IntVec& v, Int nsq) {
    CHECK(nsq == v.norm_sq());
    pts.insert(v);
  });
  std::set<IntVec> expected = {IntVec{1, -1, 0}, IntVec{-1, 1, 0}, IntVec{0, 1, -1},
                               IntVec{0, -1, 1}, IntVec{1, 0, -1}, IntVec{-1, 0, 1}};
  CHECK(pts == expected);
}

TEST_CASE("enumeration below the first minimum is empty") {
  auto L = lattice::orthogonal_complement(IntVec{1, 1, 1});
  Int n = 0;
  counting::enumerate_points(L, Fraction(1, 1), [&](const IntVec&, Int) { ++n; });
  CHECK(n == 0);
}

TEST_CASE("enumeration order is deterministic and lexicographic in coefficients") {
  auto L = SubLattice::standard(2);
  std::vector<IntVec> first, second;
  counting::enumerate_points(L, Fraction(9, 1), [&](const IntVec& v, Int) { first.push_back(v); });
  counting::enumerate_points(L, Fraction(9, 1), [&](const IntVec& v, Int) { second.push_back(v); });
  CHECK(first == second);
}

TEST_CASE("enumerate_points refuses a runaway box") {
  auto L = SubLattice::standard(3);
  CHECK_THROWS_AS(counting::enumerate_points(
                      L, Fraction(1'000'000'000, 1), [](const IntVec&, Int) {}, 1000),
                  budget_error);
}

TEST_CASE("count_points on Z^2 with scaling") {
  auto L = SubLattice::standard(2);
  Radius T(2);
  CHECK(counting::count_points(L, T, 1) == 12);
  CHECK(counting::count_points(L, T, 2) == 4);
  CHECK(counting::count_points(L, T, 3) == 0);
}

TEST_CASE("count_primitive_direct examples") {
  CHECK(counting::count_primitive_direct(SubLattice::standard(2), Radius(2)) == 8);
  CHECK(counting::count_primitive_direct(lattice::orthogonal_complement(IntVec{0, 0, 1}), Radius(2)) == 8);
  CHECK(counting::count_primitive_direct(lattice::orthogonal_complement(IntVec{1, 1, 1}), Radius(1)) == 0);
}

TEST_CASE("count_primitive_mobius examples") {
  auto mu = arith::mobius_sieve(4);
  CHECK(counting::count_primitive_mobius(SubLattice::standard(2), Radius(2), mu) == 8);
  CHECK(counting::count_primitive_mobius(SubLattice::standard(2), Radius(1), mu) == 4);
  CHECK(counting::count_primitive_mobius(lattice::orthogonal_complement(IntVec{1, 1, 1}), Radius(1), mu) == 0);
  CHECK_THROWS_AS(counting::count_primitive_mobius(SubLattice::standard(2), Radius(9), mu), std::invalid_argument);
}

TEST_CASE("mobius equivalence on random planes") {
  SplitMix64 rng(1001);
  auto mu = arith::mobius_sieve(12);
  for (int it = 0; it < 60; ++it) {
    IntVec lam = random_primitive_vec(rng, 3, 30);
    auto L = lattice::orthogonal_complement(lam);
    for (Int t : {3, 7, 12}) {
      Radius T(t);
      Int direct = counting::count_primitive_direct(L, T);
      Int inverted = counting::count_primitive_mobius(L, T, mu);
      CHECK(direct == inverted);
      CHECK(direct == oracle::plane_count_grid(lam, T, true));
      CHECK(counting::count_points(L, T) == oracle::plane_count_grid(lam, T, false));
    }
  }
}

TEST_CASE("forward inversion identity: N(T) = sum of P(T/k)") {
  SplitMix64 rng(321);
  for (int it = 0; it < 30; ++it) {
    IntVec lam = random_primitive_vec(rng, 3, 20);
    auto L = lattice::orthogonal_complement(lam);
    Radius T(9);
    Int total = counting::count_points(L, T, 1);
    Int sum = 0;
    for (Int k = 1; k <= T.floor(); ++k) {
      // P at radius T/k, computed with exact scaled comparisons
      Int p = 0;
      counting::enumerate_points(L, T.squared(), [&](const IntVec& v, Int nsq) {
        if (T.contains_scaled(nsq, k) && v.is_primitive()) ++p;
      });
      sum += p;
    }
    CHECK(total == sum);
  }
}

TEST_CASE("ball counts are even and primitive implies nonzero") {
  SplitMix64 rng(555);
  for (int it = 0; it < 40; ++it) {
    IntVec lam = random_primitive_vec(rng, 3, 25);
    auto L = lattice::orthogonal_complement(lam);
    auto b = counting::ball_count(L, Radius(8));
    CHECK(b.total_nonzero % 2 == 0);
    CHECK(b.primitive % 2 == 0);
    CHECK(b.primitive <= b.total_nonzero);
    CHECK(b.includes_origin_total == b.total_nonzero + 1);
    if (b.primitive == 0) CHECK(b.total_nonzero == 0);
  }
}

TEST_CASE("rational radius: T = 5/2 ball membership is exact") {
  auto L = SubLattice::standard(2);
  Radius T = Radius::parse("5/2");
  // |v|^2 <= 25/4: norms 1, 2, 4, 5 qualify; 6.25 is the cut
  Int got = counting::count_points(L, T);
  Int want = 0;
  for (const auto& v : oracle::ball_grid(2, Radius(3), false))
    if ((Wide)v.norm_sq() * 4 <= 25) ++want;
  CHECK(got == want);
}

TEST_CASE("point_count_error_probe schema") {
  auto L = lattice::orthogonal_complement(IntVec{1, 1, 1});
  SUBCASE("empty ball: residual is minus the main term") {
    auto p = counting::point_count_error_probe(L, Radius(1));
    CHECK(p.count == 0);
    CHECK(p.residual == -p.main_term);
  }
  SUBCASE("populated ball") {
    auto p = counting::point_count_error_probe(L, Radius(10));
    CHECK(p.count == counting::count_primitive_direct(L, Radius(10)));
    CHECK(p.main_term > 0);
    CHECK(std::isfinite(p.normalized_residual));
  }
  SUBCASE("rank must be 2") {
    CHECK_THROWS_AS(counting::point_count_error_probe(SubLattice::standard(3), Radius(2)), std::invalid_argument);
  }
}

TEST_CASE("all-points residual |N - pi T^2/det| * mu1 / T stays bounded") {
  SplitMix64 rng(909090);
  double worst = 0;
  for (int it = 0; it < 500; ++it) {
    IntVec lam = random_primitive_vec(rng, 3, 15);
    auto L = lattice::orthogonal_complement(lam);
    double mu1 = std::sqrt(double(lattice::successive_minima(L)[0]));
    double det = std::sqrt(double(L.det_sq()));
    for (Int t : {10, 50, 200}) {
      Int N = counting::count_points(L, Radius(t));
      double resid = std::abs(double(N) - std::numbers::pi * t * t / det);
      worst = std::max(worst, resid * mu1 / t);
    }
  }
  // empirical constant from a reference run of this seed (max observed 1.82)
  CHECK(worst < 5.0);
}

TEST_CASE("probe normalized residual stays bounded over a sample") {
  SplitMix64 rng(8080);
  double worst = 0;
  for (int it = 0; it < 50; ++it) {
    IntVec lam = random_primitive_vec(rng, 3, 15);
    auto L = lattice::orthogonal_complement(lam);
    for (Int t : {20, 40}) {
      auto p = counting::point_count_error_probe(L, Radius(t));
      worst = std::max(worst, std::abs(p.normalized_residual));
    }
  }
  // empirical constant from a reference run of this seed (max observed 0.56)
  CHECK(worst < 3.0);
}
