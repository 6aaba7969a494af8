#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "singmat/arith.hpp"
#include "singmat/asymptotics.hpp"
#include "singmat/cache.hpp"
#include "singmat/counting.hpp"
#include "singmat/experiments.hpp"
#include "singmat/io.hpp"
#include "singmat/lattice.hpp"
#include "singmat/singular.hpp"

namespace singmat::cli {

using nlohmann::json;

enum class Command { count, lattice_report, predict, sweep, schmidt, partition, primsum };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::count: return "count";
    case Command::lattice_report: return "lattice";
    case Command::predict: return "predict";
    case Command::sweep: return "sweep";
    case Command::schmidt: return "schmidt";
    case Command::partition: return "partition";
    case Command::primsum: return "primsum";
  }
  return "?";
}

enum class Format { csv, jsonl };

struct RunConfig {
  Command command = Command::count;
  Format format = Format::csv;
  std::string out_path;  // empty: stdout
  int threads = 0;       // 0: hardware concurrency
  std::uint64_t seed = 0x5eedULL;
  std::string cache_path;  // empty: no cache
  bool timings = false;
  singular::Budget budget;
  std::vector<std::string> budget_overrides;  // "key=value", applied in order

  // count / sweep
  int n = 3;
  Radius T{1, 1};
  std::vector<Radius> T_list;
  singular::CountMode mode = singular::CountMode::brute;
  bool primitive = false;

  // lattice
  std::vector<Int> lambda;

  // predict
  asymptotics::Formula formula = asymptotics::Formula::primitive_n3;
  double T_real = 0;

  // schmidt
  Int det_max = 150;
  std::vector<Fraction> a_values;

  // partition
  double A = 6, B = 2;

  // primsum
  std::vector<Int> M_list;
};

namespace detail {

inline void apply_overrides(RunConfig& cfg) {
  for (const auto& s : cfg.budget_overrides) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("budget override must be key=value, got '" + s + "'");
    cfg.budget.override_field(s.substr(0, eq), std::stoll(s.substr(eq + 1)));
  }
}

// Main term matching a count record, when one is defined and positive.
inline std::optional<double> matching_main_term(int n, const Radius& T, bool primitive) {
  using asymptotics::Formula;
  double t = T.value();
  try {
    double m = 0;
    if (primitive) {
      if (n == 2) m = asymptotics::predict(Formula::primitive_n2, 2, t).main_term;
      else if (n == 3) m = asymptotics::predict(Formula::primitive_n3, 3, t).main_term;
      else m = asymptotics::predict(Formula::primitive_general, n, t).main_term;
    } else {
      if (n < 3) return std::nullopt;
      m = asymptotics::predict(Formula::all_rows, n, t).main_term;
    }
    if (!(m > 0) || !std::isfinite(m)) return std::nullopt;
    return m;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

inline io::Row count_row(const singular::CountRecord& rec, bool timings) {
  io::Row row;
  row.command = "count";
  row.n = rec.n;
  row.T = rec.T.str();
  row.mode = singular::mode_name(rec.mode);
  row.count = rec.count;
  if (auto m = matching_main_term(rec.n, rec.T, rec.primitive_only)) {
    row.main_term = *m;
    row.ratio = double(rec.count) / *m;
  }
  row.planes_visited = rec.planes_visited;
  if (timings) row.elapsed_ms = rec.elapsed_ms;
  return row;
}

inline json count_json(const singular::CountRecord& rec, const io::Row& row) {
  json extra;
  extra["primitive"] = rec.primitive_only;
  return io::row_to_json(row, std::move(extra));
}

struct Emitted {
  std::vector<io::Row> rows;
  std::vector<json> records;

  void add(io::Row row, json extra = json::object()) {
    records.push_back(io::row_to_json(row, std::move(extra)));
    rows.push_back(std::move(row));
  }
};

inline Emitted execute(const RunConfig& cfg) {
  Emitted out;
  switch (cfg.command) {
    case Command::count: {
      auto rec = singular::count_singular(cfg.n, cfg.T, cfg.mode, cfg.primitive, cfg.budget, cfg.threads);
      io::Row row = count_row(rec, cfg.timings);
      json extra;
      extra["primitive"] = rec.primitive_only;
      out.add(std::move(row), std::move(extra));
      break;
    }
    case Command::sweep: {
      if (cfg.T_list.empty()) throw std::invalid_argument("sweep: --T-list must be nonempty");
      for (const auto& T : cfg.T_list) {
        auto rec = singular::count_singular(cfg.n, T, cfg.mode, cfg.primitive, cfg.budget, cfg.threads);
        io::Row row = count_row(rec, cfg.timings);
        row.command = "sweep";
        json extra;
        extra["primitive"] = rec.primitive_only;
        out.add(std::move(row), std::move(extra));
      }
      break;
    }
    case Command::lattice_report: {
      if (cfg.lambda.size() < 2) throw std::invalid_argument("lattice: --lambda needs dimension >= 2");
      IntVec lam{std::vector<Int>(cfg.lambda)};
      auto L = lattice::orthogonal_complement(lam);
      auto minima = lattice::successive_minima(L);
      Int N = counting::count_points(L, cfg.T, 1, cfg.budget.enum_box);
      Int P = counting::count_primitive_direct(L, cfg.T, cfg.budget.enum_box);
      io::Row row;
      row.command = "lattice";
      row.n = lam.dim();
      row.T = cfg.T.str();
      row.count = P;
      json extra;
      extra["lambda"] = cfg.lambda;
      extra["det_sq"] = L.det_sq();
      extra["minima_sq"] = minima;
      extra["points"] = N;
      extra["primitive_points"] = P;
      if (L.rank() == 2) {
        auto probe = counting::point_count_error_probe(L, cfg.T, cfg.budget.enum_box);
        row.main_term = probe.main_term;
        row.ratio = probe.main_term > 0 ? double(P) / probe.main_term : 0;
        extra["residual"] = probe.residual;
        extra["normalized_residual"] = probe.normalized_residual;
      }
      out.add(std::move(row), std::move(extra));
      break;
    }
    case Command::predict: {
      auto p = asymptotics::predict(cfg.formula, cfg.n, cfg.T_real);
      io::Row row;
      row.command = "predict";
      row.n = p.n;
      row.T = io::fmt_g12(p.T);
      row.mode = asymptotics::formula_name(p.formula);
      row.main_term = p.main_term;
      json extra;
      extra["u_n"] = p.u_n;
      extra["v_n"] = p.v_n;
      extra["v_n_minus_1"] = p.v_n_minus_1;
      extra["zeta_n"] = p.zeta_n;
      if (!std::isnan(p.zeta_n_minus_1)) extra["zeta_n_minus_1"] = p.zeta_n_minus_1;
      out.add(std::move(row), std::move(extra));
      break;
    }
    case Command::schmidt: {
      auto s = experiments::schmidt_distribution(cfg.det_max, cfg.a_values, cfg.budget.schmidt_D, cfg.threads);
      for (size_t i = 0; i < s.a_values.size(); ++i) {
        const auto& a = s.a_values[i];
        io::Row row;
        row.command = "schmidt";
        row.n = 3;
        row.T = std::to_string(s.det_max);
        row.mode = "a=" + std::to_string(a.num) + (a.den == 1 ? "" : "/" + std::to_string(a.den));
        row.count = s.counts[i];
        double main = s.fitted_const * std::asin(1.0 / (2.0 * a.value())) * std::pow(double(s.det_max), 3.0);
        row.main_term = main;
        if (main > 0) row.ratio = double(s.counts[i]) / main;
        row.planes_visited = s.total;
        json extra;
        extra["fitted_const"] = s.fitted_const;
        extra["total"] = s.total;
        extra["ratio_to_total"] = s.total > 0 ? double(s.counts[i]) / double(s.total) : 0.0;
        out.add(std::move(row), std::move(extra));
      }
      break;
    }
    case Command::partition: {
      auto rep = experiments::partition_diagnostic(cfg.T, cfg.A, cfg.B, cfg.budget.partition_T, cfg.threads);
      auto region_row = [&](const char* name, const experiments::RegionSums& r) {
        io::Row row;
        row.command = "partition";
        row.n = 3;
        row.T = rep.T.str();
        row.mode = name;
        row.count = r.sum_p_cubed;
        row.main_term = r.sum_c;
        if (r.sum_c > 0) row.ratio = double(r.sum_p_cubed) / r.sum_c;
        row.planes_visited = r.planes;
        json extra;
        extra["A"] = rep.A;
        extra["B"] = rep.B;
        if (std::string(name) == "good") extra["max_good_ratio"] = rep.max_good_ratio;
        out.add(std::move(row), std::move(extra));
      };
      region_row("big_det", rep.big_det);
      region_row("epicentric", rep.epicentric);
      region_row("good", rep.good);
      break;
    }
    case Command::primsum: {
      if (cfg.M_list.empty()) throw std::invalid_argument("primsum: --M must be given");
      for (Int M : cfg.M_list) {
        Int budget_M = cfg.n == 3 ? cfg.budget.primsum_n3_M : cfg.budget.primsum_n4_M;
        auto r = asymptotics::primitive_sum(M, cfg.n, budget_M, cfg.threads);
        io::Row row;
        row.command = "primsum";
        row.n = r.n;
        row.T = std::to_string(r.M);
        row.count = r.vectors;
        row.main_term = r.predicted;
        if (r.predicted > 0) row.ratio = r.sum / r.predicted;
        json extra;
        extra["sum"] = r.sum;
        extra["predicted"] = r.predicted;
        extra["residual"] = r.residual;
        out.add(std::move(row), std::move(extra));
      }
      break;
    }
  }
  return out;
}

inline json cache_key(const RunConfig& cfg) {
  json k;
  k["command"] = command_name(cfg.command);
  k["format"] = cfg.format == Format::csv ? "csv" : "json";
  switch (cfg.command) {
    case Command::count:
      k["n"] = cfg.n;
      k["T"] = cfg.T.str();
      k["mode"] = singular::mode_name(cfg.mode);
      k["primitive"] = cfg.primitive;
      break;
    case Command::sweep: {
      k["n"] = cfg.n;
      json ts = json::array();
      for (const auto& t : cfg.T_list) ts.push_back(t.str());
      k["T_list"] = ts;
      k["mode"] = singular::mode_name(cfg.mode);
      k["primitive"] = cfg.primitive;
      break;
    }
    case Command::lattice_report:
      k["lambda"] = cfg.lambda;
      k["T"] = cfg.T.str();
      break;
    case Command::predict:
      k["formula"] = asymptotics::formula_name(cfg.formula);
      k["n"] = cfg.n;
      k["T"] = io::fmt_g12(cfg.T_real);
      break;
    case Command::schmidt: {
      k["D"] = cfg.det_max;
      json as = json::array();
      for (const auto& a : cfg.a_values) as.push_back(std::to_string(a.num) + "/" + std::to_string(a.den));
      k["a_values"] = as;
      break;
    }
    case Command::partition:
      k["T"] = cfg.T.str();
      k["A"] = io::fmt_g12(cfg.A);
      k["B"] = io::fmt_g12(cfg.B);
      break;
    case Command::primsum:
      k["n"] = cfg.n;
      k["M_list"] = cfg.M_list;
      break;
  }
  k["budget_overrides"] = cfg.budget_overrides;
  return k;
}

inline std::string render(const Emitted& em, Format format) {
  std::string body;
  if (format == Format::csv) {
    body = std::string(io::kCsvHeader) + "\n";
    for (const auto& r : em.rows) body += io::csv_line(r);
  } else {
    for (const auto& j : em.records) body += j.dump() + "\n";
  }
  return body;
}

}  // namespace detail

// Validates, computes, and emits.  Output files are written only after the
// whole computation succeeded, so an invalid or failed run leaves no partial
// file behind.  Returns the process exit status.
inline int run(RunConfig cfg, std::ostream& os = std::cout, std::ostream& err = std::cerr) {
  try {
    detail::apply_overrides(cfg);
    std::string body;

    bool use_cache = !cfg.cache_path.empty() && !cfg.timings;
    if (use_cache) {
      cache::ResultCache rc(cfg.cache_path);
      json key = detail::cache_key(cfg);
      if (auto hit = rc.lookup(key)) {
        body = hit->get<std::string>();
      } else {
        body = detail::render(detail::execute(cfg), cfg.format);
        rc.store(key, json(body));
      }
    } else {
      body = detail::render(detail::execute(cfg), cfg.format);
    }

    if (cfg.out_path.empty()) {
      os << body;
    } else {
      std::ofstream f(cfg.out_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
      f << body;
    }
    return 0;
  } catch (const budget_error& e) {
    json j;
    j["error"] = {{"type", "budget"}, {"message", e.what()}};
    err << j.dump() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    json j;
    j["error"] = {{"type", "validation"}, {"message", e.what()}};
    err << j.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json j;
    j["error"] = {{"type", "internal"}, {"message", e.what()}};
    err << j.dump() << "\n";
    return 1;
  }
}

}  // namespace singmat::cli
