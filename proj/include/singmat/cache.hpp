#pragma once

#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "singmat/base.hpp"

namespace singmat::cache {

using nlohmann::json;

// Append-only JSON-lines journal of finished results, keyed by the canonical
// serialization of the run parameters.  A hit is only honored when the code
// version matches, so a cached value is always bit-identical to what a fresh
// run would produce.
class ResultCache {
 public:
  explicit ResultCache(std::string path) : path_(std::move(path)) { load(); }

  std::optional<json> lookup(const json& key) const {
    auto it = entries_.find(key.dump());
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void store(const json& key, const json& value) {
    std::string k = key.dump();
    if (entries_.count(k)) return;
    entries_.emplace(k, value);
    json line;
    line["key"] = key;
    line["value"] = value;
    line["code_version"] = kVersion;
    line["timestamp"] = now_iso();
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cache: cannot open '" + path_ + "' for append");
    out << line.dump() << "\n";
  }

  size_t size() const { return entries_.size(); }

 private:
  void load() {
    std::ifstream in(path_);
    if (!in) return;  // a fresh cache file is created on first store
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("key") || !j.contains("value")) continue;
      if (j.value("code_version", "") != kVersion) continue;
      entries_.emplace(j["key"].dump(), j["value"]);
    }
  }

  static std::string now_iso() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
  }

  std::string path_;
  std::map<std::string, json> entries_;
};

}  // namespace singmat::cache
