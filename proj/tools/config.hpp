#pragma once

// Flat key-value scenario configs with dotted section prefixes:
//
//   subcommand = kernel
//   params.N = 1
//   params.c = 0.5
//   params.a = 0.5        # vectors are space-separated
//   solver.dt = 1e-4
//
// '#' starts a comment, blank lines are ignored, keys are unique. Reads are
// tracked so unknown keys can be reported as config errors.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace bheat::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scenario check failed (violations, tolerance breach): CLI exit code 3.
struct AcceptanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_vector(const std::string& key,
                                 const std::vector<double>& fallback) const;

  void override_value(const std::string& key, const std::string& value);

  /// Keys present in the file but never read by the scenario.
  std::vector<std::string> unread_keys() const;

  const std::string& text() const { return text_; }
  /// key = value lines of every read key, sorted (the effective config).
  std::string effective_text() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> read_;
  std::string text_;
};

}  // namespace bheat::cli
