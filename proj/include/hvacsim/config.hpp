#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hvacsim::config {

// Scalar or single-line list value from a key/value config file.
struct Value {
  enum class Type { Bool, Number, String, List };
  Type type = Type::String;
  bool boolean = false;
  double number = 0.0;
  std::string text;
  std::vector<Value> items;
};

// Flat key/value configuration in a small TOML subset:
//
//   # comment
//   [section]
//   key = 1.5
//   name = "text"
//   flag = true
//   list = [0.05, 0.15, "x"]
//
// Keys inside a section are stored as "section.key".
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  // Override one entry from "key=value" text (value uses the file syntax;
  // bare words are taken as strings).
  void set(std::string_view assignment);

  bool has(std::string_view key) const { return entries_.find(key) != entries_.end(); }
  double get_double(std::string_view key, double fallback) const;
  std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::string get_string(std::string_view key, std::string_view fallback) const;
  std::vector<double> get_double_list(std::string_view key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_string_list(std::string_view key, const std::vector<std::string>& fallback) const;

  // Throws ConfigError naming the first key not in `known`.
  void reject_unknown(const std::set<std::string, std::less<>>& known) const;

  // Canonical one-line-per-key rendering, sorted by key; used for hashing.
  std::string canonical() const;
  const std::map<std::string, Value, std::less<>>& entries() const { return entries_; }

 private:
  const Value* find(std::string_view key) const;
  std::map<std::string, Value, std::less<>> entries_;
};

std::string render(const Value& v);

}  // namespace hvacsim::config
