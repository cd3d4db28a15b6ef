#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rollsim/errors.hpp"

namespace rollsim {

// Flat key-path text format: one `key = value` per line, `#` comments, blank
// lines ignored. Keys are dotted paths; values are free text (trailing/leading
// whitespace stripped). Insertion order is preserved so that serialize() is
// deterministic and parse/serialize round-trips are byte-stable once canonical.
class FlatConfig {
 public:
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };

  static FlatConfig parse_text(const std::string& text, const std::string& source_name = "");
  static FlatConfig parse_file(const std::string& path);

  std::string serialize() const;

  bool has(const std::string& key) const;
  // Lookup helpers; require_* throw ParseError naming the missing/bad field.
  std::string require_string(const std::string& key) const;
  double require_double(const std::string& key) const;
  long require_long(const std::string& key) const;
  std::optional<std::string> get_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;

  // Whitespace-separated tokens of a value.
  std::vector<std::string> require_tokens(const std::string& key) const;

  // All entries whose key starts with `prefix`, in file order.
  std::vector<Entry> with_prefix(const std::string& prefix) const;

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_long(const std::string& key, long value);

  const std::vector<Entry>& entries() const { return entries_; }
  const std::string& source_name() const { return source_; }

  // Parses a double with full diagnostics (used by typed getters).
  static double to_double(const std::string& text, const std::string& key, int line);

 private:
  const Entry* find(const std::string& key) const;
  std::vector<Entry> entries_;
  std::string source_;
};

// Canonical shortest round-trip formatting for doubles ("9.8" stays "9.8").
std::string format_double(double v);

}  // namespace rollsim
