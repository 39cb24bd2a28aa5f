#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace fracspde::csv {

// Deterministic CSV emitter: a '#' provenance comment (version, config hash,
// seed), a header row, then rows formatted with %.17g. Identical inputs give
// byte-identical files apart from the version field.
class Writer {
 public:
  Writer(const std::string& path, const std::vector<std::string>& columns,
         std::uint64_t config_hash, std::uint64_t seed);

  void row(const std::vector<double>& values);
  void row_raw(const std::string& line); // pre-formatted (mixed-type rows)
  std::size_t rows_written() const { return rows_; }

  static std::string format(double v);

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::size_t rows_ = 0;
};

} // namespace fracspde::csv
