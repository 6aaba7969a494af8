#pragma once

#include <cstdio>
#include <optional>
#include <string>

#include "json.hpp"
#include "singmat/base.hpp"

namespace singmat::io {

using nlohmann::json;

// Fixed CSV float formatting: 12 significant digits, locale-independent.
inline std::string fmt_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline constexpr const char* kCsvHeader = "command,n,T,mode,count,main_term,ratio,planes_visited,elapsed_ms";

// One CSV row of the stable schema; absent fields print as empty cells.
struct Row {
  std::string command;
  std::optional<int> n;
  std::optional<std::string> T;
  std::optional<std::string> mode;
  std::optional<Int> count;
  std::optional<double> main_term;
  std::optional<double> ratio;
  std::optional<Int> planes_visited;
  std::optional<double> elapsed_ms;
};

inline std::string csv_line(const Row& r) {
  std::string s = r.command;
  s += ',';
  if (r.n) s += std::to_string(*r.n);
  s += ',';
  if (r.T) s += *r.T;
  s += ',';
  if (r.mode) s += *r.mode;
  s += ',';
  if (r.count) s += std::to_string(*r.count);
  s += ',';
  if (r.main_term) s += fmt_g12(*r.main_term);
  s += ',';
  if (r.ratio) s += fmt_g12(*r.ratio);
  s += ',';
  if (r.planes_visited) s += std::to_string(*r.planes_visited);
  s += ',';
  if (r.elapsed_ms) s += fmt_g12(*r.elapsed_ms);
  s += '\n';
  return s;
}

// The JSON record mirrors the row plus any command-specific extras the
// caller already placed in `extra`.
inline json row_to_json(const Row& r, json extra = json::object()) {
  json j = std::move(extra);
  j["command"] = r.command;
  if (r.n) j["n"] = *r.n;
  if (r.T) j["T"] = *r.T;
  if (r.mode) j["mode"] = *r.mode;
  if (r.count) j["count"] = *r.count;
  if (r.main_term) j["main_term"] = *r.main_term;
  if (r.ratio) j["ratio"] = *r.ratio;
  if (r.planes_visited) j["planes_visited"] = *r.planes_visited;
  if (r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
  return j;
}

}  // namespace singmat::io
