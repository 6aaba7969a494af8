#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "singmat/cli.hpp"

using namespace singmat;
namespace fs = std::filesystem;

namespace {

std::string run_to_string(cli::RunConfig cfg, int expect_status = 0) {
  std::ostringstream out, err;
  int status = cli::run(std::move(cfg), out, err);
  CHECK(status == expect_status);
  return status == 0 ? out.str() : err.str();
}

cli::RunConfig count_cfg(int n, Int t, singular::CountMode m, bool prim) {
  cli::RunConfig cfg;
  cfg.command = cli::Command::count;
  cfg.n = n;
  cfg.T = Radius(t);
  cfg.mode = m;
  cfg.primitive = prim;
  return cfg;
}

}  // namespace

TEST_CASE("radius parsing") {
  CHECK(Radius::parse("12") == Radius(12));
  CHECK(Radius::parse("7/2") == Radius(7, 2));
  CHECK(Radius::parse("14/4") == Radius(7, 2));
  CHECK_THROWS_AS(Radius::parse("1e3"), std::invalid_argument);
  CHECK_THROWS_AS(Radius::parse("0"), std::invalid_argument);
  CHECK_THROWS_AS(Radius::parse("-3"), std::invalid_argument);
  CHECK_THROWS_AS(Radius::parse("x/y"), std::invalid_argument);
}

TEST_CASE("csv float formatting is 12 significant digits") {
  CHECK(io::fmt_g12(381.97186342054878) == "381.971863421");
  CHECK(io::fmt_g12(1.0) == "1");
  CHECK(io::fmt_g12(1e30) == "1e+30");
}

TEST_CASE("csv schema header and row shape") {
  std::string out = run_to_string(count_cfg(3, 2, singular::CountMode::decompose, true));
  auto nl = out.find('\n');
  CHECK(out.substr(0, nl) == io::kCsvHeader);
  std::string row = out.substr(nl + 1);
  CHECK(row.substr(0, 25) == "count,3,2,decompose,5768,");
  // exactly 8 commas per row
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
}

TEST_CASE("identical configs emit byte-identical output") {
  auto a = run_to_string(count_cfg(3, 3, singular::CountMode::pairs, true));
  auto b = run_to_string(count_cfg(3, 3, singular::CountMode::pairs, true));
  CHECK(a == b);
  auto cfg = count_cfg(3, 3, singular::CountMode::decompose, false);
  cfg.format = cli::Format::jsonl;
  CHECK(run_to_string(cfg) == run_to_string(cfg));
}

TEST_CASE("json records round-trip to the same bytes") {
  for (auto cmd : {cli::Command::count, cli::Command::predict, cli::Command::primsum}) {
    cli::RunConfig cfg;
    cfg.format = cli::Format::jsonl;
    cfg.command = cmd;
    cfg.n = 3;
    cfg.T = Radius(2);
    cfg.mode = singular::CountMode::brute;
    cfg.primitive = true;
    cfg.formula = asymptotics::Formula::primitive_n3;
    cfg.T_real = 123.5;
    cfg.M_list = {7};
    std::string out = run_to_string(cfg);
    std::istringstream lines(out);
    std::string line;
    while (std::getline(lines, line)) {
      auto parsed = nlohmann::json::parse(line);
      CHECK(parsed.dump() == line);
    }
  }
}

TEST_CASE("validation failures produce no output file") {
  fs::path p = fs::temp_directory_path() / "singmat_should_not_exist.csv";
  std::error_code ec;
  fs::remove(p, ec);
  cli::RunConfig cfg = count_cfg(4, 2, singular::CountMode::pairs, true);  // pairs needs n in {2,3}
  cfg.out_path = p.string();
  std::ostringstream out, err;
  CHECK(cli::run(cfg, out, err) == 2);
  CHECK_FALSE(fs::exists(p));
  auto j = nlohmann::json::parse(err.str());
  CHECK(j["error"]["type"] == "validation");
}

TEST_CASE("budget refusals surface as structured errors with status 3") {
  cli::RunConfig cfg = count_cfg(3, 40, singular::CountMode::decompose, true);
  std::ostringstream out, err;
  CHECK(cli::run(cfg, out, err) == 3);
  auto j = nlohmann::json::parse(err.str());
  CHECK(j["error"]["type"] == "budget");
  CHECK(out.str().empty());
}

TEST_CASE("budget overrides are applied") {
  cli::RunConfig cfg = count_cfg(3, 6, singular::CountMode::brute, true);
  std::ostringstream out, err;
  CHECK(cli::run(cfg, out, err) == 3);  // default brute limit is 5
  cfg.budget_overrides = {"brute_n3_T=6"};
  std::string ok = run_to_string(cfg);
  CHECK(ok.find("count,3,6,brute") != std::string::npos);
  cfg.budget_overrides = {"no_such_key=1"};
  std::ostringstream out2, err2;
  CHECK(cli::run(cfg, out2, err2) == 2);
}

TEST_CASE("result cache: hit is byte-identical and survives reload") {
  fs::path p = fs::temp_directory_path() / "singmat_cache_test.jsonl";
  std::error_code ec;
  fs::remove(p, ec);
  auto cfg = count_cfg(3, 3, singular::CountMode::decompose, true);
  cfg.cache_path = p.string();
  std::string first = run_to_string(cfg);
  CHECK(fs::exists(p));
  std::string second = run_to_string(cfg);  // hit
  CHECK(first == second);
  // the journal holds exactly one entry
  std::ifstream in(p);
  std::string line;
  int lines = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 1);
  // different parameters miss
  auto cfg2 = count_cfg(3, 2, singular::CountMode::decompose, true);
  cfg2.cache_path = p.string();
  run_to_string(cfg2);
  std::ifstream in2(p);
  lines = 0;
  while (std::getline(in2, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 2);
  fs::remove(p, ec);
}

TEST_CASE("count rows carry the matching prediction ratio") {
  std::string out = run_to_string(count_cfg(2, 20, singular::CountMode::closed2, true));
  // count / ((2 pi / zeta(2)) T^2) should be within a few percent at T = 20
  auto nl = out.find('\n');
  std::string row = out.substr(nl + 1);
  std::istringstream ss(row);
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  double ratio = std::stod(cells[6]);
  CHECK(ratio > 0.9);
  CHECK(ratio < 1.1);
}

TEST_CASE("output file is written atomically after success") {
  fs::path p = fs::temp_directory_path() / "singmat_out_test.csv";
  std::error_code ec;
  fs::remove(p, ec);
  auto cfg = count_cfg(2, 4, singular::CountMode::brute, true);
  cfg.out_path = p.string();
  std::ostringstream out, err;
  CHECK(cli::run(cfg, out, err) == 0);
  std::ifstream in(p);
  std::string head;
  std::getline(in, head);
  CHECK(head == io::kCsvHeader);
  fs::remove(p, ec);
}
