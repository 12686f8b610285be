#include "hvacsim/config.hpp"

#include <charconv>
#include <cmath>

#include "hvacsim/csv.hpp"
#include "hvacsim/error.hpp"

namespace hvacsim::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::string_view where, std::string_view msg) {
  throw Error(ErrorKind::ConfigError, std::string(where) + ": " + std::string(msg));
}

// Drops a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

Value parse_scalar(std::string_view s, std::string_view where, bool bare_words_ok) {
  Value v;
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    v.type = Value::Type::String;
    v.text = std::string(s.substr(1, s.size() - 2));
    return v;
  }
  if (s == "true" || s == "false") {
    v.type = Value::Type::Bool;
    v.boolean = s == "true";
    return v;
  }
  double d = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), d);
  if (!s.empty() && res.ec == std::errc{} && res.ptr == s.data() + s.size()) {
    v.type = Value::Type::Number;
    v.number = d;
    return v;
  }
  if (bare_words_ok && !s.empty()) {
    v.type = Value::Type::String;
    v.text = std::string(s);
    return v;
  }
  fail(where, "cannot parse value '" + std::string(s) + "'");
}

Value parse_value(std::string_view s, std::string_view where, bool bare_words_ok) {
  s = trim(s);
  if (s.empty()) fail(where, "missing value");
  if (s.front() != '[') return parse_scalar(s, where, bare_words_ok);
  if (s.back() != ']') fail(where, "unterminated list");
  Value v;
  v.type = Value::Type::List;
  const auto body = trim(s.substr(1, s.size() - 2));
  if (body.empty()) return v;
  for (auto item : csv::split(body)) v.items.push_back(parse_scalar(trim(item), where, bare_words_ok));
  return v;
}

std::string type_name(Value::Type t) {
  switch (t) {
    case Value::Type::Bool: return "boolean";
    case Value::Type::Number: return "number";
    case Value::Type::String: return "string";
    case Value::Type::List: return "list";
  }
  return "?";
}

const Value& expect(const Value* v, Value::Type t, std::string_view key) {
  if (v->type != t) fail(key, "expected a " + type_name(t) + ", found a " + type_name(v->type));
  return *v;
}

}  // namespace

std::string render(const Value& v) {
  switch (v.type) {
    case Value::Type::Bool: return v.boolean ? "true" : "false";
    case Value::Type::Number: return csv::format_double(v.number);
    case Value::Type::String: return "\"" + v.text + "\"";
    case Value::Type::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += render(v.items[i]);
      }
      return out + "]";
    }
  }
  return "";
}

Config Config::parse(std::string_view text) {
  Config cfg;
  std::string section;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    const auto line = trim(strip_comment(text.substr(begin, end - begin)));
    begin = end + 1;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) fail(where, "bad section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(where, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) fail(where, "empty key");
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (cfg.entries_.count(full)) fail(where, "duplicate key '" + full + "'");
    cfg.entries_[full] = parse_value(line.substr(eq + 1), where, false);
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = csv::read_file(path);
  } catch (const Error&) {
    throw Error(ErrorKind::ConfigError, "cannot read config file " + path.string());
  }
  return parse(text);
}

void Config::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) fail(assignment, "override must look like key=value");
  const auto key = trim(assignment.substr(0, eq));
  if (key.empty()) fail(assignment, "empty key");
  entries_[std::string(key)] = parse_value(assignment.substr(eq + 1), assignment, true);
}

const Value* Config::find(std::string_view key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

double Config::get_double(std::string_view key, double fallback) const {
  const Value* v = find(key);
  return v ? expect(v, Value::Type::Number, key).number : fallback;
}

std::int64_t Config::get_int(std::string_view key, std::int64_t fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  const double d = expect(v, Value::Type::Number, key).number;
  if (d != std::floor(d) || std::abs(d) > 9.0e15) fail(key, "expected an integer");
  return static_cast<std::int64_t>(d);
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  const Value* v = find(key);
  return v ? expect(v, Value::Type::Bool, key).boolean : fallback;
}

std::string Config::get_string(std::string_view key, std::string_view fallback) const {
  const Value* v = find(key);
  return v ? expect(v, Value::Type::String, key).text : std::string(fallback);
}

std::vector<double> Config::get_double_list(std::string_view key, const std::vector<double>& fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : expect(v, Value::Type::List, key).items) {
    out.push_back(expect(&item, Value::Type::Number, key).number);
  }
  return out;
}

std::vector<std::string> Config::get_string_list(std::string_view key, const std::vector<std::string>& fallback) const {
  const Value* v = find(key);
  if (!v) return fallback;
  std::vector<std::string> out;
  for (const auto& item : expect(v, Value::Type::List, key).items) {
    out.push_back(expect(&item, Value::Type::String, key).text);
  }
  return out;
}

void Config::reject_unknown(const std::set<std::string, std::less<>>& known) const {
  for (const auto& [key, value] : entries_) {
    if (!known.count(key)) fail(key, "unknown configuration key");
  }
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, value] : entries_) out += key + " = " + render(value) + "\n";
  return out;
}

}  // namespace hvacsim::config
