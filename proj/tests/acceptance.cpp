// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.  Exit status is nonzero if
// any criterion fails.
//
//   acceptance [--threads N] [--only 1,2,...] [--csv-dir DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "singmat/asymptotics.hpp"
#include "singmat/counting.hpp"
#include "singmat/experiments.hpp"
#include "singmat/io.hpp"
#include "singmat/lattice.hpp"
#include "singmat/rng.hpp"
#include "singmat/singular.hpp"

using namespace singmat;
using std::numbers::pi;

namespace {

int g_threads = 0;
const std::uint64_t kSeed = 0x5eed;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) { return io::fmt_g12(v); }

// ---------------------------------------------------------------------------
// Criteria 1-7 also append their records to a CSV body; criterion 9 reruns
// them and compares the bytes.
// ---------------------------------------------------------------------------

Outcome criterion1(std::string* csv) {
  Outcome o;
  using singular::CountMode;
  for (Int t = 1; t <= 5; ++t) {
    for (bool prim : {true, false}) {
      Radius T(t);
      auto b = singular::brute_force_count(3, T, prim, {}, g_threads);
      auto p = singular::pair_oracle_pn3(T, prim, {}, g_threads);
      auto d = singular::decompose_pn3(T, prim, {}, g_threads);
      o.require(b.count == p.count, "brute != pairs at T=" + std::to_string(t) + (prim ? " prim" : " all"));
      o.require(b.count == d.count, "brute != decompose at T=" + std::to_string(t) + (prim ? " prim" : " all"));
      if (t == 1 && prim) o.require(b.count == 168, "PN3(1) = " + std::to_string(b.count) + ", want 168");
      if (t == 5 && prim && o.pass) o.detail = "three methods agree, T = 1..5, both filters; PN3(5) = " + std::to_string(b.count);
      for (const auto& rec : {b, p, d}) {
        io::Row row;
        row.command = "c1_count";
        row.n = 3;
        row.T = T.str();
        row.mode = singular::mode_name(rec.mode);
        row.count = rec.count;
        row.planes_visited = rec.planes_visited;
        *csv += io::csv_line(row);
      }
    }
  }
  return o;
}

Outcome criterion2(std::string* csv) {
  Outcome o;
  for (Int t = 1; t <= 30; ++t) {
    Radius T(t);
    Int closed = singular::pn2_exact(T, g_threads).count;
    Int brute = singular::brute_force_count(2, T, true, {}, g_threads).count;
    o.require(closed == brute, "pn2_exact(" + std::to_string(t) + ") = " + std::to_string(closed) +
                                   " != brute " + std::to_string(brute));
    io::Row row;
    row.command = "c2_closed2";
    row.n = 2;
    row.T = T.str();
    row.mode = "closed2";
    row.count = closed;
    *csv += io::csv_line(row);
  }
  auto big = singular::pn2_exact(Radius(1000), g_threads);
  double density = double(big.count) / 1e6;
  double target = 2.0 * pi / arith::zeta(2);
  o.require(std::abs(density - target) <= 0.08,
            "density at T=1000 is " + fmt(density) + ", want within 0.08 of " + fmt(target));
  io::Row row;
  row.command = "c2_closed2";
  row.n = 2;
  row.T = "1000";
  row.mode = "closed2";
  row.count = big.count;
  row.main_term = target * 1e6;
  row.ratio = density / target;
  *csv += io::csv_line(row);
  if (o.pass) o.detail = "PN2 exact to T=30; density(1000) = " + fmt(density);
  return o;
}

Outcome criterion3(std::string* csv) {
  Outcome o;
  SplitMix64 rng(kSeed);
  std::vector<IntVec> lams;
  for (int i = 0; i < 200; ++i) lams.push_back(random_primitive_vec(rng, 3, 50, 2500));
  auto mu = arith::mobius_sieve(20);
  for (Int t : {5, 10, 20}) {
    Radius T(t);
    Int agree = 0;
    Int total_p = 0;
    for (const auto& lam : lams) {
      auto L = lattice::orthogonal_complement(lam);
      Int direct = counting::count_primitive_direct(L, T);
      Int inverted = counting::count_primitive_mobius(L, T, mu);
      if (direct == inverted) ++agree;
      total_p += direct;
    }
    o.require(agree == 200, "mobius mismatch at T=" + std::to_string(t) + " for " +
                                std::to_string(200 - agree) + " lattices");
    io::Row row;
    row.command = "c3_mobius";
    row.n = 3;
    row.T = T.str();
    row.count = total_p;
    row.planes_visited = agree;
    *csv += io::csv_line(row);
  }
  if (o.pass) o.detail = "200 lattices x 3 radii, exact agreement";
  return o;
}

Outcome criterion4(std::string* csv) {
  Outcome o;
  SplitMix64 rng(kSeed + 1);
  for (int n = 2; n <= 4; ++n) {
    Int checked = 0;
    Wide det_sum = 0;
    for (int i = 0; i < 10'000; ++i) {
      IntVec lam = random_primitive_vec(rng, n, 50);
      auto L = lattice::orthogonal_complement(lam);
      if (L.det_sq() != lam.norm_sq()) {
        o.require(false, "det_sq mismatch for lambda = " + lam.str());
        break;
      }
      ++checked;
      det_sum += L.det_sq();
    }
    io::Row row;
    row.command = "c4_orthdet";
    row.n = n;
    row.count = checked;
    row.main_term = double(Int(det_sum % 1'000'000'007));
    *csv += io::csv_line(row);
  }
  if (o.pass) o.detail = "10^4 complements per n in {2,3,4}, det_sq exact";
  return o;
}

Outcome criterion5(std::string* csv) {
  Outcome o;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); };
  struct Want {
    int n;
    double value;
  } wants[] = {{2, 4 * pi}, {3, 2 * std::pow(pi, 4)}, {4, 256 * std::pow(pi, 6) / 81}};
  for (auto [n, value] : wants) {
    double closed = asymptotics::u_constant(n);
    double surface = asymptotics::u_constant_surface(n);
    o.require(rel(closed, value) <= 1e-10, "u_" + std::to_string(n) + " closed form off");
    o.require(rel(surface, value) <= 1e-10, "u_" + std::to_string(n) + " surface route off");
    o.require(rel(closed, surface) <= 1e-10, "u_" + std::to_string(n) + " routes disagree");
    io::Row row;
    row.command = "c5_constants";
    row.n = n;
    row.mode = "u_n";
    row.main_term = closed;
    *csv += io::csv_line(row);
  }
  o.require(rel(asymptotics::ball_volume(2), pi) <= 1e-10, "v_2 != pi");
  o.require(rel(asymptotics::ball_volume(3), 4 * pi / 3) <= 1e-10, "v_3 != 4pi/3");
  io::Row row;
  row.command = "c5_constants";
  row.mode = "v_2,v_3";
  row.main_term = asymptotics::ball_volume(2);
  row.ratio = asymptotics::ball_volume(3);
  *csv += io::csv_line(row);
  if (o.pass) o.detail = "u_2, u_3, u_4 via both routes; v_2, v_3";
  return o;
}

Outcome criterion6(std::string* csv) {
  Outcome o;
  std::vector<double> residuals;
  double sum400 = 0;
  for (Int M : {50, 100, 200, 400}) {
    auto r = asymptotics::primitive_sum(M, 3, 500, g_threads);
    residuals.push_back(r.residual);
    if (M == 400) sum400 = r.sum;
    io::Row row;
    row.command = "c6_primsum";
    row.n = 3;
    row.T = std::to_string(M);
    row.count = r.vectors;
    row.main_term = r.predicted;
    row.ratio = r.sum / r.predicted;
    *csv += io::csv_line(row);
  }
  double spread = *std::max_element(residuals.begin(), residuals.end()) -
                  *std::min_element(residuals.begin(), residuals.end());
  o.require(spread <= 0.02 * sum400,
            "residual spread " + fmt(spread) + " exceeds 2% of sum(400) = " + fmt(sum400));
  if (o.pass) o.detail = "residual spread " + fmt(spread) + " vs bound " + fmt(0.02 * sum400);
  return o;
}

Outcome criterion7(std::string* csv) {
  Outcome o;
  std::vector<Fraction> as = {Fraction(3, 2), Fraction(2, 1), Fraction(3, 1)};
  auto s = experiments::schmidt_distribution(150, as, 200, g_threads);
  double denom = std::asin(0.5);
  std::string measured;
  for (size_t i = 0; i < as.size(); ++i) {
    double got = double(s.counts[i]) / double(s.total);
    double want = std::asin(1.0 / (2.0 * as[i].value())) / denom;
    o.require(std::abs(got - want) <= 0.05,
              "a=" + fmt(as[i].value()) + ": ratio " + fmt(got) + " vs arcsin " + fmt(want));
    measured += (measured.empty() ? "" : ", ") + fmt(got);
    io::Row row;
    row.command = "c7_schmidt";
    row.n = 3;
    row.T = "150";
    row.mode = "a=" + std::to_string(as[i].num) + "/" + std::to_string(as[i].den);
    row.count = s.counts[i];
    row.planes_visited = s.total;
    row.ratio = got;
    *csv += io::csv_line(row);
  }
  if (o.pass) o.detail = "ratios {" + measured + "} within 0.05 of the arcsin law";
  return o;
}

std::string run_criteria_1_to_7(std::vector<Outcome>* outcomes) {
  std::string csv = std::string(io::kCsvHeader) + "\n";
  std::vector<Outcome> local;
  local.push_back(criterion1(&csv));
  local.push_back(criterion2(&csv));
  local.push_back(criterion3(&csv));
  local.push_back(criterion4(&csv));
  local.push_back(criterion5(&csv));
  local.push_back(criterion6(&csv));
  local.push_back(criterion7(&csv));
  if (outcomes) *outcomes = std::move(local);
  return csv;
}

Outcome criterion8() {
  Outcome o;
  // Ratios of the ordered-pair oracle to the main-term prediction.  The
  // trend check allows per-step lattice-count fluctuation of 0.01 in
  // |ratio - 1| (the exact counts oscillate; convergence, not monotonicity,
  // is the claim) and demands a decisive overall move toward 1.
  const double kStepSlack = 0.01;
  const double kMinOverallDrop = 0.05;
  double prev_dist = -1, first_dist = 0, last_dist = 0;
  std::string seq;
  for (Int t : {8, 12, 16, 20, 25}) {
    auto rec = singular::pair_oracle_pn3(Radius(t), true, {}, g_threads);
    double pred = asymptotics::predict(asymptotics::Formula::primitive_n3, 3, double(t)).main_term;
    double ratio = double(rec.count) / pred;
    seq += (seq.empty() ? "" : ", ") + fmt(ratio);
    o.require(ratio >= 0.3 && ratio <= 2.0, "ratio " + fmt(ratio) + " at T=" + std::to_string(t) +
                                                " outside [0.3, 2.0]");
    double dist = std::abs(ratio - 1.0);
    if (prev_dist >= 0)
      o.require(dist <= prev_dist + kStepSlack,
                "|ratio-1| moved away from 1 at T=" + std::to_string(t) + " beyond the fluctuation slack");
    if (first_dist == 0 && prev_dist < 0) first_dist = dist;
    last_dist = dist;
    prev_dist = dist;
  }
  o.require(last_dist <= first_dist - kMinOverallDrop,
            "no decisive overall trend toward 1: |r-1| went " + fmt(first_dist) + " -> " + fmt(last_dist));
  // good-region error ratio decreasing with T under admissible constants
  double prev_ratio = -1, first_ratio = 0, last_ratio = 0;
  std::string gseq;
  for (Int t : {10, 20, 40}) {
    auto rep = experiments::partition_diagnostic(Radius(t), 5.3, 1.3, 40, g_threads);
    o.require(rep.good.planes > 0, "good region empty at T=" + std::to_string(t));
    double r = rep.max_good_ratio;
    gseq += (gseq.empty() ? "" : ", ") + fmt(r);
    if (prev_ratio >= 0) o.require(r <= prev_ratio, "good-region ratio increased at T=" + std::to_string(t));
    if (t == 10) first_ratio = r;
    if (t == 40) last_ratio = r;
    prev_ratio = r;
  }
  o.require(last_ratio < first_ratio, "good-region ratio did not decrease overall");
  if (o.pass) o.detail = "oracle/prediction {" + seq + "}; good-region ratios {" + gseq + "}";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  std::string csv_dir;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--threads") && i + 1 < argc) {
      g_threads = std::atoi(argv[++i]);
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      std::istringstream ss(argv[++i]);
      std::string part;
      while (std::getline(ss, part, ',')) only.push_back(std::atoi(part.c_str()));
    } else if (!std::strcmp(argv[i], "--csv-dir") && i + 1 < argc) {
      csv_dir = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--threads N] [--only 1,2,...] [--csv-dir DIR]\n");
      return 2;
    }
  }
  auto wanted = [&](int k) { return only.empty() || std::find(only.begin(), only.end(), k) != only.end(); };

  int failures = 0;
  auto report = [&](int k, const Outcome& o, double secs) {
    std::printf("CRITERION %d: %s%s%s (%.1fs)\n", k, o.pass ? "PASS" : "FAIL",
                o.detail.empty() ? "" : " - ", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  bool need_1_to_7 = false;
  for (int k = 1; k <= 7; ++k)
    if (wanted(k)) need_1_to_7 = true;
  bool need9 = wanted(9);

  std::vector<Outcome> outcomes;
  std::string first_csv;
  if (need_1_to_7 || need9) {
    auto t0 = std::chrono::steady_clock::now();
    first_csv = run_criteria_1_to_7(&outcomes);
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // per-criterion timing is folded into the batch; report the batch time on 1
    for (int k = 1; k <= 7; ++k)
      if (wanted(k)) report(k, outcomes[size_t(k - 1)], k == 1 ? total : 0.0);
  }

  if (wanted(8)) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = criterion8();
    report(8, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

  if (need9) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    std::string second_csv = run_criteria_1_to_7(nullptr);
    o.require(first_csv == second_csv, "CSV outputs differ between runs");
    if (o.pass)
      o.detail = "criteria 1-7 reruns emit byte-identical CSV (" + std::to_string(first_csv.size()) + " bytes)";
    if (!csv_dir.empty()) {
      std::string path = csv_dir + "/acceptance_records.csv";
      if (FILE* f = std::fopen(path.c_str(), "wb")) {
        std::fwrite(first_csv.data(), 1, first_csv.size(), f);
        std::fclose(f);
      }
    }
    report(9, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

  return failures == 0 ? 0 : 1;
}
