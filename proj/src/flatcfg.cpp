#include "rollsim/flatcfg.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rollsim {

namespace {

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double FlatConfig::to_double(const std::string& text, const std::string& key, int line) {
  const std::string t = strip(text);
  if (t.empty()) throw ParseError("empty numeric value for field '" + key + "'", key, line);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw ParseError("malformed numeric value '" + t + "' for field '" + key + "'", key, line);
  return v;
}

FlatConfig FlatConfig::parse_text(const std::string& text, const std::string& source_name) {
  FlatConfig cfg;
  cfg.source_ = source_name;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(source_name + ":" + std::to_string(lineno) + ": expected 'key = value'",
                       "", lineno);
    Entry e;
    e.key = strip(line.substr(0, eq));
    e.value = strip(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty())
      throw ParseError(source_name + ":" + std::to_string(lineno) + ": empty key", "", lineno);
    for (const auto& prev : cfg.entries_) {
      if (prev.key == e.key)
        throw ParseError(source_name + ":" + std::to_string(lineno) + ": duplicate key '" +
                             e.key + "'",
                         e.key, lineno);
    }
    cfg.entries_.push_back(std::move(e));
  }
  return cfg;
}

FlatConfig FlatConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path, "", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

std::string FlatConfig::serialize() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e.key;
    out += " = ";
    out += e.value;
    out += '\n';
  }
  return out;
}

const FlatConfig::Entry* FlatConfig::find(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

bool FlatConfig::has(const std::string& key) const { return find(key) != nullptr; }

std::string FlatConfig::require_string(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) throw ParseError(source_ + ": missing required field '" + key + "'", key, 0);
  return e->value;
}

double FlatConfig::require_double(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) throw ParseError(source_ + ": missing required field '" + key + "'", key, 0);
  return to_double(e->value, key, e->line);
}

long FlatConfig::require_long(const std::string& key) const {
  const double v = require_double(key);
  const long l = static_cast<long>(v);
  if (static_cast<double>(l) != v)
    throw ParseError("field '" + key + "' must be an integer", key, find(key)->line);
  return l;
}

std::optional<std::string> FlatConfig::get_string(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  return e->value;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  return to_double(e->value, key, e->line);
}

long FlatConfig::get_long(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  return require_long(key);
}

std::vector<std::string> FlatConfig::require_tokens(const std::string& key) const {
  std::istringstream in(require_string(key));
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

std::vector<FlatConfig::Entry> FlatConfig::with_prefix(const std::string& prefix) const {
  std::vector<Entry> out;
  for (const auto& e : entries_) {
    if (e.key.rfind(prefix, 0) == 0) out.push_back(e);
  }
  return out;
}

void FlatConfig::set(const std::string& key, const std::string& value) {
  for (auto& e : entries_) {
    if (e.key == key) {
      e.value = value;
      return;
    }
  }
  entries_.push_back({key, value, 0});
}

void FlatConfig::set_double(const std::string& key, double value) {
  set(key, format_double(value));
}

void FlatConfig::set_long(const std::string& key, long value) { set(key, std::to_string(value)); }

}  // namespace rollsim
