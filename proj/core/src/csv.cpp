#include "fracspde/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace fracspde::csv {

namespace {
constexpr const char* kVersion = "fracspde 0.1.0";
}

Writer::Writer(const std::string& path, const std::vector<std::string>& columns,
               std::uint64_t config_hash, std::uint64_t seed)
    : out_(path), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  char prov[160];
  std::snprintf(prov, sizeof prov, "# %s | config=%016llx | seed=%llu\n", kVersion,
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  out_ << prov;
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 == columns.size() ? "\n" : ",");
}

std::string Writer::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Writer::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw std::invalid_argument("csv: row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << format(values[i]) << (i + 1 == values.size() ? "\n" : ",");
  ++rows_;
}

void Writer::row_raw(const std::string& line) {
  out_ << line << "\n";
  ++rows_;
}

} // namespace fracspde::csv
