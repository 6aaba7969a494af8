#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "singmat/cli.hpp"

using namespace singmat;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"singmat: exact counting of singular integer matrices with primitive rows,\n"
               "lattice point statistics, and main-term predictions"};
  app.require_subcommand(1);
  app.fallthrough();

  cli::RunConfig cfg;
  std::string format = "csv";
  std::string cache_path;
  if (const char* env = std::getenv("SINGMAT_CACHE")) cache_path = env;
  std::vector<std::string> budgets;

  app.add_option("--out", cfg.out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv or json (JSON lines)")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  app.add_option("--seed", cfg.seed, "seed for randomized sampling");
  app.add_option("--cache", cache_path, "result cache file (or env SINGMAT_CACHE)");
  app.add_flag("--timings", cfg.timings, "include elapsed_ms in records (off by default so outputs are byte-reproducible)");
  app.add_option("--budget", budgets, "budget override key=value (repeatable)");

  // count
  auto* c_count = app.add_subcommand("count", "exact singular-matrix count");
  std::string count_T = "1", count_mode = "brute";
  c_count->add_option("--n", cfg.n, "matrix dimension (2, 3 or 4)")->required();
  c_count->add_option("--T", count_T, "row length bound, integer or p/q")->required();
  c_count->add_option("--mode", count_mode, "brute | pairs | decompose | closed2")->required();
  c_count->add_flag("--primitive", cfg.primitive, "restrict to primitive rows");

  // lattice
  auto* c_lat = app.add_subcommand("lattice", "per-normal plane report: points, primitive points, minima");
  std::string lat_lambda, lat_T = "1";
  c_lat->add_option("--lambda", lat_lambda, "primitive normal, e.g. 1,1,1")->required();
  c_lat->add_option("--T", lat_T, "radius, integer or p/q")->required();

  // predict
  auto* c_pred = app.add_subcommand("predict", "main-term prediction");
  std::string pred_formula = "primitive_n3";
  c_pred->add_option("--formula", pred_formula, "primitive_n2 | primitive_n3 | primitive_general | all_rows")
      ->required();
  c_pred->add_option("--n", cfg.n, "dimension")->required();
  c_pred->add_option("--T", cfg.T_real, "radius (real; scientific notation allowed)")->required();

  // sweep
  auto* c_sweep = app.add_subcommand("sweep", "count over a list of radii with prediction ratios");
  std::string sweep_T_list, sweep_mode = "decompose";
  c_sweep->add_option("--n", cfg.n, "dimension")->required();
  c_sweep->add_option("--T-list", sweep_T_list, "comma-separated radii")->required();
  c_sweep->add_option("--mode", sweep_mode, "brute | pairs | decompose | closed2")->required();
  c_sweep->add_flag("--primitive", cfg.primitive, "restrict to primitive rows");

  // schmidt
  auto* c_sch = app.add_subcommand("schmidt", "successive-minima ratio distribution over planes");
  std::string sch_a = "1.5,2,3";
  c_sch->add_option("--D", cfg.det_max, "determinant bound")->required();
  c_sch->add_option("--a-list", sch_a, "comma-separated ratio thresholds (default 1.5,2,3)");

  // partition
  auto* c_part = app.add_subcommand("partition", "big-det / epicentric / good region sums");
  std::string part_T = "10";
  c_part->add_option("--T", part_T, "radius, integer or p/q")->required();
  c_part->add_option("--A", cfg.A, "determinant cut exponent (default 6)");
  c_part->add_option("--B", cfg.B, "minima-ratio cut exponent (default 2)");

  // primsum
  auto* c_ps = app.add_subcommand("primsum", "exact primitive lattice sum vs its leading term");
  std::string ps_M;
  c_ps->add_option("--n", cfg.n, "dimension (3 or 4)")->required();
  c_ps->add_option("--M", ps_M, "radius bound M, or comma-separated list")->required();

  CLI11_PARSE(app, argc, argv);

  cfg.format = format == "csv" ? cli::Format::csv : cli::Format::jsonl;
  cfg.cache_path = cache_path;
  cfg.budget_overrides = budgets;

  try {
    if (app.got_subcommand(c_count)) {
      cfg.command = cli::Command::count;
      cfg.T = Radius::parse(count_T);
      cfg.mode = singular::parse_mode(count_mode);
    } else if (app.got_subcommand(c_lat)) {
      cfg.command = cli::Command::lattice_report;
      cfg.T = Radius::parse(lat_T);
      for (const auto& p : split_csv(lat_lambda)) cfg.lambda.push_back(std::stoll(p));
    } else if (app.got_subcommand(c_pred)) {
      cfg.command = cli::Command::predict;
      cfg.formula = asymptotics::parse_formula(pred_formula);
    } else if (app.got_subcommand(c_sweep)) {
      cfg.command = cli::Command::sweep;
      cfg.mode = singular::parse_mode(sweep_mode);
      for (const auto& p : split_csv(sweep_T_list)) cfg.T_list.push_back(Radius::parse(p));
    } else if (app.got_subcommand(c_sch)) {
      cfg.command = cli::Command::schmidt;
      for (const auto& p : split_csv(sch_a)) cfg.a_values.push_back(experiments::parse_ratio_threshold(p));
    } else if (app.got_subcommand(c_part)) {
      cfg.command = cli::Command::partition;
      cfg.T = Radius::parse(part_T);
    } else if (app.got_subcommand(c_ps)) {
      cfg.command = cli::Command::primsum;
      for (const auto& p : split_csv(ps_M)) cfg.M_list.push_back(std::stoll(p));
    }
  } catch (const std::exception& e) {
    nlohmann::json j;
    j["error"] = {{"type", "validation"}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 2;
  }

  return cli::run(cfg);
}
