#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "epicomp/experiments.hpp"
#include "epicomp/model.hpp"

namespace epicomp {

/// Configuration problem (unreadable file, syntax, unknown key, bad value).
/// Distinct from model-domain errors so the CLI can map them to exit 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg) {}
};

struct RunConfig {
  int k = 100;               // infection episodes per demographic episode
  std::uint64_t seed = 1;
  double tol = 1e-12;        // orbit step tolerance
  long max_iter = 1000000;
  int res_x = 200, res_y = 200;
  double match_tol = 1e-6;   // basin label matching radius
  int threads = 1;
  int k_max = 60;            // convergence certification horizon
  int grid_size = 100;       // certification grid cardinality
  double grid_span = 10.0;   // certification grid total bound
  std::array<double, 4> x0{1.0, 1.0, 1.0, 1.0};
  std::array<double, 2> x0_reduced{2.0, 2.0};
  bool has_x0_reduced = false;
  std::optional<double> nu;  // aggregate directly with this nu, bypassing beta/gamma
  std::vector<std::string> sweep;  // axis specs "name=lo:hi:step"
};

struct Config {
  DemographyParams demography;
  DiseaseParams disease;
  bool has_disease = false;
  bool homogeneous_declared = false;
  RunConfig run;
};

struct SweepSpec {
  std::string name;
  AxisSpec axis;
};

namespace detail {

struct ConfigEntry {
  std::string section, key;
  std::vector<std::string> tokens;  // array elements, or a single scalar token
  bool is_array = false;
  int line = 0;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& tok, int line) {
  const std::string t = trim(tok);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ConfigError("expected a number, got '" + t + "'", line);
  return v;
}

inline long long parse_int(const std::string& tok, int line) {
  const std::string t = trim(tok);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size())
    throw ConfigError("expected an integer, got '" + t + "'", line);
  return v;
}

inline bool parse_bool(const std::string& tok, int line) {
  const std::string t = trim(tok);
  if (t == "true") return true;
  if (t == "false") return false;
  throw ConfigError("expected true/false, got '" + t + "'", line);
}

inline std::string unquote(const std::string& tok, int line) {
  const std::string t = trim(tok);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
    return t.substr(1, t.size() - 2);
  throw ConfigError("expected a quoted string, got '" + t + "'", line);
}

inline std::vector<ConfigEntry> tokenize_config(const std::string& text) {
  std::vector<ConfigEntry> entries;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    // strip comments (respecting quotes)
    bool quoted = false;
    std::string stripped;
    for (char ch : raw) {
      if (ch == '"') quoted = !quoted;
      if (ch == '#' && !quoted) break;
      stripped.push_back(ch);
    }
    const std::string s = trim(stripped);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("malformed section header '" + s + "'", line);
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got '" + s + "'", line);
    if (section.empty())
      throw ConfigError("key outside any [section]", line);
    ConfigEntry e;
    e.section = section;
    e.key = trim(s.substr(0, eq));
    e.line = line;
    std::string val = trim(s.substr(eq + 1));
    if (e.key.empty() || val.empty())
      throw ConfigError("expected 'key = value', got '" + s + "'", line);
    if (val.front() == '[') {
      if (val.back() != ']')
        throw ConfigError("unterminated array value", line);
      e.is_array = true;
      std::string body = val.substr(1, val.size() - 2);
      std::string item;
      bool q = false;
      for (char ch : body) {
        if (ch == '"') q = !q;
        if (ch == ',' && !q) {
          e.tokens.push_back(trim(item));
          item.clear();
        } else {
          item.push_back(ch);
        }
      }
      if (!trim(item).empty()) e.tokens.push_back(trim(item));
    } else {
      e.tokens.push_back(val);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Parses the key/section config format.  Unknown sections or keys are
/// rejected with the offending line number.
inline Config parse_config(const std::string& text) {
  Config cfg;
  bool seen_c[2][2][2][2] = {};
  bool seen_bS = false, seen_bI = false, seen_beta = false, seen_gamma = false;

  for (const detail::ConfigEntry& e : detail::tokenize_config(text)) {
    const auto arity = [&](std::size_t n) {
      if (e.tokens.size() != n)
        throw ConfigError("key '" + e.key + "' expects " + std::to_string(n) +
                              " value(s), got " + std::to_string(e.tokens.size()),
                          e.line);
    };
    if (e.section == "demography") {
      if (e.key == "bS" || e.key == "bI") {
        arity(2);
        auto& dst = e.key == "bS" ? cfg.demography.bS : cfg.demography.bI;
        dst = {detail::parse_real(e.tokens[0], e.line), detail::parse_real(e.tokens[1], e.line)};
        (e.key == "bS" ? seen_bS : seen_bI) = true;
      } else if (e.key.rfind("c_", 0) == 0) {
        arity(1);
        DemographyParams probe{};
        if (!set_demography_param(probe, e.key, 1.0))
          throw ConfigError("unknown key '" + e.key + "' in [demography]", e.line);
        set_demography_param(cfg.demography, e.key, detail::parse_real(e.tokens[0], e.line));
        const int A = e.key[2] == 'S' ? 0 : 1, B = e.key[3] == 'S' ? 0 : 1;
        seen_c[e.key[5] - '1'][e.key[6] - '1'][A][B] = true;
      } else {
        throw ConfigError("unknown key '" + e.key + "' in [demography]", e.line);
      }
    } else if (e.section == "disease") {
      cfg.has_disease = true;
      if (e.key == "beta") {
        seen_beta = true;
        if (e.tokens.size() == 1) {
          const double b = detail::parse_real(e.tokens[0], e.line);
          cfg.disease.beta = {{{b, b}, {b, b}}};
        } else if (e.tokens.size() == 4) {
          cfg.disease.beta = {{{detail::parse_real(e.tokens[0], e.line),
                                detail::parse_real(e.tokens[1], e.line)},
                               {detail::parse_real(e.tokens[2], e.line),
                                detail::parse_real(e.tokens[3], e.line)}}};
        } else {
          throw ConfigError("beta expects a scalar or 4 row-major entries", e.line);
        }
      } else if (e.key == "gamma") {
        seen_gamma = true;
        if (e.tokens.size() == 1) {
          const double g = detail::parse_real(e.tokens[0], e.line);
          cfg.disease.gamma = {g, g};
        } else if (e.tokens.size() == 2) {
          cfg.disease.gamma = {detail::parse_real(e.tokens[0], e.line),
                               detail::parse_real(e.tokens[1], e.line)};
        } else {
          throw ConfigError("gamma expects a scalar or 2 entries", e.line);
        }
      } else if (e.key == "homogeneous") {
        arity(1);
        cfg.homogeneous_declared = detail::parse_bool(e.tokens[0], e.line);
      } else {
        throw ConfigError("unknown key '" + e.key + "' in [disease]", e.line);
      }
    } else if (e.section == "run") {
      RunConfig& r = cfg.run;
      if (e.key == "k") { arity(1); r.k = static_cast<int>(detail::parse_int(e.tokens[0], e.line)); }
      else if (e.key == "seed") { arity(1); r.seed = static_cast<std::uint64_t>(detail::parse_int(e.tokens[0], e.line)); }
      else if (e.key == "tol") { arity(1); r.tol = detail::parse_real(e.tokens[0], e.line); }
      else if (e.key == "max_iter") { arity(1); r.max_iter = static_cast<long>(detail::parse_int(e.tokens[0], e.line)); }
      else if (e.key == "resolution") {
        arity(2);
        r.res_x = static_cast<int>(detail::parse_int(e.tokens[0], e.line));
        r.res_y = static_cast<int>(detail::parse_int(e.tokens[1], e.line));
      }
      else if (e.key == "match_tol") { arity(1); r.match_tol = detail::parse_real(e.tokens[0], e.line); }
      else if (e.key == "threads") { arity(1); r.threads = static_cast<int>(detail::parse_int(e.tokens[0], e.line)); }
      else if (e.key == "k_max") { arity(1); r.k_max = static_cast<int>(detail::parse_int(e.tokens[0], e.line)); }
      else if (e.key == "grid_size") { arity(1); r.grid_size = static_cast<int>(detail::parse_int(e.tokens[0], e.line)); }
      else if (e.key == "grid_span") { arity(1); r.grid_span = detail::parse_real(e.tokens[0], e.line); }
      else if (e.key == "nu") { arity(1); r.nu = detail::parse_real(e.tokens[0], e.line); }
      else if (e.key == "x0") {
        arity(4);
        for (int c = 0; c < 4; ++c) r.x0[c] = detail::parse_real(e.tokens[c], e.line);
      }
      else if (e.key == "x0_reduced") {
        arity(2);
        r.x0_reduced = {detail::parse_real(e.tokens[0], e.line),
                        detail::parse_real(e.tokens[1], e.line)};
        r.has_x0_reduced = true;
      }
      else if (e.key == "sweep") {
        r.sweep.clear();
        for (const std::string& t : e.tokens) r.sweep.push_back(detail::unquote(t, e.line));
      }
      else throw ConfigError("unknown key '" + e.key + "' in [run]", e.line);
    } else {
      throw ConfigError("unknown section [" + e.section + "]", e.line);
    }
  }

  if (!seen_bS || !seen_bI)
    throw ConfigError("[demography] must define bS and bI");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int A = 0; A < 2; ++A)
        for (int B = 0; B < 2; ++B)
          if (!seen_c[i][j][A][B]) {
            const char st[] = {'S', 'I'};
            throw ConfigError(std::string("[demography] is missing c_") + st[A] + st[B] +
                              "_" + std::to_string(i + 1) + std::to_string(j + 1));
          }
  if (cfg.has_disease && (!seen_beta || !seen_gamma))
    throw ConfigError("[disease] must define both beta and gamma");

  try {
    cfg.demography.validate();
    if (cfg.has_disease) cfg.disease.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }
  if (cfg.homogeneous_declared && cfg.has_disease && !cfg.disease.homogeneous())
    throw ConfigError("disease declared homogeneous but beta/gamma entries differ");
  if (cfg.run.nu && !(*cfg.run.nu > 0.0 && *cfg.run.nu <= 1.0))
    throw ConfigError("run.nu must lie in (0,1]");
  if (!(cfg.run.tol > 0.0)) throw ConfigError("run.tol must be > 0");
  if (cfg.run.k < 0) throw ConfigError("run.k must be >= 0");
  if (cfg.run.max_iter <= 0) throw ConfigError("run.max_iter must be > 0");
  if (cfg.run.threads <= 0) throw ConfigError("run.threads must be > 0");
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Canonical text form; load(serialize(cfg)) reproduces every parameter
/// bit for bit (reals carry 17 significant digits).
inline std::string serialize_config(const Config& cfg) {
  using detail::fmt17;
  std::ostringstream out;
  out << "[demography]\n";
  out << "bS = [" << fmt17(cfg.demography.bS[0]) << ", " << fmt17(cfg.demography.bS[1]) << "]\n";
  out << "bI = [" << fmt17(cfg.demography.bI[0]) << ", " << fmt17(cfg.demography.bI[1]) << "]\n";
  const char st[] = {'S', 'I'};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int A = 0; A < 2; ++A)
        for (int B = 0; B < 2; ++B)
          out << "c_" << st[A] << st[B] << "_" << i + 1 << j + 1 << " = "
              << fmt17(cfg.demography.c[i][j][A][B]) << "\n";
  if (cfg.has_disease) {
    out << "\n[disease]\n";
    out << "beta = [" << fmt17(cfg.disease.beta[0][0]) << ", " << fmt17(cfg.disease.beta[0][1])
        << ", " << fmt17(cfg.disease.beta[1][0]) << ", " << fmt17(cfg.disease.beta[1][1]) << "]\n";
    out << "gamma = [" << fmt17(cfg.disease.gamma[0]) << ", " << fmt17(cfg.disease.gamma[1]) << "]\n";
    if (cfg.homogeneous_declared) out << "homogeneous = true\n";
  }
  const RunConfig& r = cfg.run;
  out << "\n[run]\n";
  out << "k = " << r.k << "\n";
  out << "seed = " << r.seed << "\n";
  out << "tol = " << fmt17(r.tol) << "\n";
  out << "max_iter = " << r.max_iter << "\n";
  out << "resolution = [" << r.res_x << ", " << r.res_y << "]\n";
  out << "match_tol = " << fmt17(r.match_tol) << "\n";
  out << "threads = " << r.threads << "\n";
  out << "k_max = " << r.k_max << "\n";
  out << "grid_size = " << r.grid_size << "\n";
  out << "grid_span = " << fmt17(r.grid_span) << "\n";
  out << "x0 = [" << fmt17(r.x0[0]) << ", " << fmt17(r.x0[1]) << ", " << fmt17(r.x0[2])
      << ", " << fmt17(r.x0[3]) << "]\n";
  if (r.has_x0_reduced)
    out << "x0_reduced = [" << fmt17(r.x0_reduced[0]) << ", " << fmt17(r.x0_reduced[1]) << "]\n";
  if (r.nu) out << "nu = " << fmt17(*r.nu) << "\n";
  if (!r.sweep.empty()) {
    out << "sweep = [";
    for (std::size_t s = 0; s < r.sweep.size(); ++s)
      out << (s ? ", " : "") << '"' << r.sweep[s] << '"';
    out << "]\n";
  }
  return out.str();
}

/// Parses "name=lo:hi:step" into a sweep axis.
inline SweepSpec parse_sweep_spec(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw ConfigError("sweep spec must look like name=lo:hi:step, got '" + spec + "'");
  SweepSpec s;
  s.name = detail::trim(spec.substr(0, eq));
  const std::string rest = spec.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (s.name.empty() || c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("sweep spec must look like name=lo:hi:step, got '" + spec + "'");
  s.axis.lo = detail::parse_real(rest.substr(0, c1), 0);
  s.axis.hi = detail::parse_real(rest.substr(c1 + 1, c2 - c1 - 1), 0);
  s.axis.step = detail::parse_real(rest.substr(c2 + 1), 0);
  if (!(s.axis.step > 0.0) || !(s.axis.hi >= s.axis.lo))
    throw ConfigError("sweep axis needs lo <= hi and step > 0, got '" + spec + "'");
  return s;
}

}  // namespace epicomp
