#include "fracspde/config.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracspde::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

} // namespace

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

ConfigMap ConfigMap::parse_text(const std::string& text, const std::string& origin) {
  ConfigMap cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!cfg.kv_.emplace(key, val).second)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
  }
  return cfg;
}

std::string ConfigMap::raw(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end())
    throw std::invalid_argument("config: missing required key '" + key + "'");
  return it->second;
}

double ConfigMap::get_double(const std::string& key) const {
  const std::string v = raw(key);
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "': not a number: '" + v + "'");
  }
  if (pos != v.size())
    throw std::invalid_argument("config: key '" + key + "': trailing garbage in '" + v + "'");
  return out;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int ConfigMap::get_int(const std::string& key) const {
  const double d = get_double(key);
  const int i = static_cast<int>(d);
  if (double(i) != d)
    throw std::invalid_argument("config: key '" + key + "': expected integer");
  return i;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string v = raw(key);
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "': not an unsigned integer");
  }
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

void ConfigMap::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [k, v] : kv_) {
    if (!allowed.count(k)) {
      throw std::invalid_argument("config: unknown key '" + k + "' in " + origin_);
    }
  }
}

std::uint64_t ConfigMap::canonical_hash() const {
  std::uint64_t h = 1469598103934665603ull; // FNV offset basis
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : kv_) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  return h;
}

std::vector<ModeAmplitude> parse_mode_list(const std::string& text, int dim) {
  std::vector<ModeAmplitude> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    // mode_part ':' re [':' im]
    std::vector<std::string> parts;
    std::istringstream is(item);
    std::string tok;
    while (std::getline(is, tok, ':')) parts.push_back(trim(tok));
    if (parts.size() < 2 || parts.size() > 3)
      throw std::invalid_argument("mode list: expected 'modes:re[:im]' in '" + item + "'");
    ModeAmplitude ma;
    std::istringstream ms(parts[0]);
    std::string comp;
    int d = 0;
    while (std::getline(ms, comp, ',')) {
      if (d >= dim) throw std::invalid_argument("mode list: too many components in '" + item + "'");
      ma.mode[d++] = std::stoi(trim(comp));
    }
    if (d != dim)
      throw std::invalid_argument("mode list: expected " + std::to_string(dim) +
                                  " mode components in '" + item + "'");
    ma.re = std::stod(parts[1]);
    ma.im = parts.size() == 3 ? std::stod(parts[2]) : 0.0;
    out.push_back(ma);
  }
  return out;
}

std::vector<double> parse_range(const std::string& text, double default_step) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {std::stod(text)};
  const std::string a_str = text.substr(0, dots);
  std::string rest = text.substr(dots + 2);
  double step = default_step;
  const auto colon = rest.find(':');
  if (colon != std::string::npos) {
    step = std::stod(rest.substr(colon + 1));
    rest = rest.substr(0, colon);
  }
  const double a = std::stod(a_str);
  const double b = std::stod(rest);
  if (step == 0.0) step = (b - a) / 100.0;
  if (!(step > 0.0) || b < a) throw std::invalid_argument("range: need a <= b and step > 0");
  std::vector<double> out;
  for (double x = a; x <= b + 1e-12 * std::max(1.0, std::abs(b)); x += step) out.push_back(x);
  return out;
}

} // namespace fracspde::config
