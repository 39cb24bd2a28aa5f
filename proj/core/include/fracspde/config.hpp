#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fracspde::config {

// Flat key = value store parsed from a plain text file. '#' starts a comment;
// keys are unique; values keep interior whitespace.
class ConfigMap {
 public:
  ConfigMap() = default;
  explicit ConfigMap(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  static ConfigMap parse_file(const std::string& path);
  static ConfigMap parse_text(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string raw(const std::string& key) const;

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  // Schema gate: every present key must be allowed. Throws
  // std::invalid_argument naming the first offending key path.
  void require_known(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

  // FNV-1a hash of the canonical "key=value\n" listing (sorted keys).
  std::uint64_t canonical_hash() const;

 private:
  std::map<std::string, std::string> kv_;
  std::string origin_ = "<empty>";
};

// "m:re:im;m:re:im" (d=1) or "m1,m2:re:im;..." (d=2,3) mode lists.
struct ModeAmplitude {
  std::array<int, 3> mode{0, 0, 0};
  double re = 0.0;
  double im = 0.0;
};
std::vector<ModeAmplitude> parse_mode_list(const std::string& text, int dim);

// "a..b" or "a..b:step" inclusive numeric ranges for sweep flags.
std::vector<double> parse_range(const std::string& text, double default_step = 0.0);

} // namespace fracspde::config
