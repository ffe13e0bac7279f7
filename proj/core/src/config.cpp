#include "fsis/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace fsis {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

}  // namespace

std::map<std::string, std::map<std::string, std::string>> parse_toml(const std::string& text,
                                                                     const std::string& origin) {
  std::map<std::string, std::map<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      out[section];
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated string");
      value = value.substr(1, value.size() - 2);
    }
    out[section][key] = value;
  }
  return out;
}

namespace {

struct Reader {
  const std::map<std::string, std::map<std::string, std::string>>& t;
  std::vector<std::string> errors;
  std::vector<std::string> seen;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = t.find(sec);
    return s != t.end() && s->second.count(key) > 0;
  }
  template <typename F>
  void get(const std::string& sec, const std::string& key, F&& setter) {
    if (!has(sec, key)) return;
    seen.push_back(sec + "." + key);
    try {
      setter(t.at(sec).at(key));
    } catch (const std::exception&) {
      errors.push_back(sec + "." + key + ": malformed value '" + t.at(sec).at(key) + "'");
    }
  }
};

double to_double(const std::string& s) {
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw ConfigError("trailing characters");
  return v;
}
long long to_int(const std::string& s) {
  size_t pos = 0;
  long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw ConfigError("trailing characters");
  return v;
}

}  // namespace

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto table = parse_toml(buf.str(), path);

  Config cfg;
  Reader r{table, {}, {}};
  r.get("geometry", "kind", [&](const std::string& v) { cfg.geometry.kind = v; });
  r.get("geometry", "resolution",
        [&](const std::string& v) { cfg.geometry.resolution = static_cast<int>(to_int(v)); });
  r.get("material", "lambda", [&](const std::string& v) { cfg.material.lambda = to_double(v); });
  r.get("material", "mu", [&](const std::string& v) { cfg.material.mu = to_double(v); });
  r.get("pressure", "bc", [&](const std::string& v) { cfg.pressure_bc = v; });
  r.get("solver", "linear_tol", [&](const std::string& v) { cfg.solver.linear_tol = to_double(v); });
  r.get("solver", "null_tol", [&](const std::string& v) { cfg.solver.null_tol = to_double(v); });
  r.get("solver", "gap_tol", [&](const std::string& v) { cfg.solver.gap_tol = to_double(v); });
  r.get("solver", "assumption_tol",
        [&](const std::string& v) { cfg.solver.assumption_tol = to_double(v); });
  r.get("evolution", "T", [&](const std::string& v) { cfg.evolution.T = to_double(v); });
  r.get("evolution", "dt", [&](const std::string& v) { cfg.evolution.dt = to_double(v); });
  r.get("evolution", "scheme", [&](const std::string& v) { cfg.evolution.scheme = v; });
  r.get("output", "directory", [&](const std::string& v) { cfg.output.directory = v; });
  r.get("output", "formats", [&](const std::string& v) { cfg.output.formats = v; });
  r.get("random", "seed",
        [&](const std::string& v) { cfg.random.seed = static_cast<std::uint64_t>(to_int(v)); });

  // unknown keys are configuration mistakes; report them all
  for (const auto& [sec, kv] : table)
    for (const auto& [key, val] : kv) {
      std::string name = sec + "." + key;
      bool known = false;
      for (const auto& s : r.seen)
        if (s == name) { known = true; break; }
      if (!known) r.errors.push_back("unknown key " + name);
      (void)val;
    }
  if (!r.errors.empty()) {
    std::string msg = "invalid config " + path + ":";
    for (const auto& e : r.errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  cfg.validate();
  return cfg;
}

void Config::validate() const {
  std::vector<std::string> errors;
  if (geometry.kind != "annulus_disc" && geometry.kind != "box_in_box")
    errors.push_back("geometry.kind: must be annulus_disc or box_in_box, got '" + geometry.kind +
                     "'");
  if (geometry.resolution < 4)
    errors.push_back("geometry.resolution: must be >= 4, got " +
                     std::to_string(geometry.resolution));
  if (!(material.mu > 0)) errors.push_back("material.mu: must be > 0");
  if (material.lambda < 0) errors.push_back("material.lambda: must be >= 0");
  if (pressure_bc != "dirichlet" && pressure_bc != "robin")
    errors.push_back("pressure.bc: must be dirichlet or robin, got '" + pressure_bc + "'");
  if (!(solver.linear_tol > 0)) errors.push_back("solver.linear_tol: must be > 0");
  if (!(solver.null_tol > 0)) errors.push_back("solver.null_tol: must be > 0");
  if (!(solver.gap_tol > 0)) errors.push_back("solver.gap_tol: must be > 0");
  if (!(solver.assumption_tol > 0)) errors.push_back("solver.assumption_tol: must be > 0");
  if (!(evolution.dt > 0)) errors.push_back("evolution.dt: must be > 0");
  if (!(evolution.dt < evolution.T)) errors.push_back("evolution: dt must be < T");
  if (evolution.scheme != "midpoint" && evolution.scheme != "backward_euler")
    errors.push_back("evolution.scheme: must be midpoint or backward_euler, got '" +
                     evolution.scheme + "'");
  if (output.directory.empty()) errors.push_back("output.directory: must not be empty");
  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
}

std::string Config::canonical() const {
  char buf[1024];
  std::snprintf(buf, sizeof(buf),
                "[geometry]\nkind = \"%s\"\nresolution = %d\n"
                "[material]\nlambda = %.17g\nmu = %.17g\n"
                "[pressure]\nbc = \"%s\"\n"
                "[solver]\nlinear_tol = %.17g\nnull_tol = %.17g\ngap_tol = %.17g\n"
                "assumption_tol = %.17g\n"
                "[evolution]\nT = %.17g\ndt = %.17g\nscheme = \"%s\"\n"
                "[output]\ndirectory = \"%s\"\nformats = \"%s\"\n"
                "[random]\nseed = %llu\n",
                geometry.kind.c_str(), geometry.resolution, material.lambda, material.mu,
                pressure_bc.c_str(), solver.linear_tol, solver.null_tol, solver.gap_tol,
                solver.assumption_tol, evolution.T, evolution.dt, evolution.scheme.c_str(),
                output.directory.c_str(), output.formats.c_str(),
                static_cast<unsigned long long>(random.seed));
  return buf;
}

std::uint64_t Config::hash() const { return fnv1a(canonical()); }

void save_config(const Config& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("save_config: cannot open '" + path + "'");
  out << cfg.canonical();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace fsis
