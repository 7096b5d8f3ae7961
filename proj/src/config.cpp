#include "gbq/config.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "gbq/error.hpp"
#include "gbq/ground_state.hpp"

namespace gbq {

double ExperimentConfig::resolved_omega() const { return omega_critical ? std::sqrt(p / 4.0) : omega; }

double ExperimentConfig::resolved_R() const { return cutoff_R > 0.0 ? cutoff_R : L / 4.0; }

namespace {

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  return v;
}

long to_long(const std::string& key, const std::string& s) {
  long v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError(key + ": expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": expected true/false, got '" + s + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(to_double(key, tok.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

struct Key {
  const char* name;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define GBQ_DOUBLE(name, field) \
  Key { name, [](ExperimentConfig& c, const std::string& s) { c.field = to_double(name, s); }, \
        [](const ExperimentConfig& c) { return fmt(c.field); } }

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      GBQ_DOUBLE("experiment.p", p),
      {"experiment.omega",
       [](ExperimentConfig& c, const std::string& s) {
         c.omega_critical = (s == "critical");
         if (!c.omega_critical) c.omega = to_double("experiment.omega", s);
       },
       [](const ExperimentConfig& c) { return c.omega_critical ? std::string("critical") : fmt(c.omega); }},
      GBQ_DOUBLE("experiment.a", a),
      GBQ_DOUBLE("experiment.a_max", a_max),
      GBQ_DOUBLE("grid.L", L),
      {"grid.N",
       [](ExperimentConfig& c, const std::string& s) {
         const long n = to_long("grid.N", s);
         if (n <= 0) throw ConfigError("grid.N must be positive");
         c.N = static_cast<std::size_t>(n);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.N); }},
      GBQ_DOUBLE("evolution.dt", evolution.dt),
      GBQ_DOUBLE("evolution.t_end", evolution.t_end),
      {"evolution.record_every",
       [](ExperimentConfig& c, const std::string& s) {
         c.evolution.record_every = static_cast<int>(to_long("evolution.record_every", s));
       },
       [](const ExperimentConfig& c) { return std::to_string(c.evolution.record_every); }},
      GBQ_DOUBLE("evolution.blowup_threshold", evolution.blowup_threshold),
      GBQ_DOUBLE("virial.R", cutoff_R),
      GBQ_DOUBLE("modulation.epsilon_exit", epsilon_exit),
      GBQ_DOUBLE("modulation.epsilon_valid", epsilon_valid),
      {"output.dir", [](ExperimentConfig& c, const std::string& s) { c.output_dir = s; },
       [](const ExperimentConfig& c) { return c.output_dir; }},
      {"output.prefix", [](ExperimentConfig& c, const std::string& s) { c.output_prefix = s; },
       [](const ExperimentConfig& c) { return c.output_prefix; }},
      {"output.plotscript",
       [](ExperimentConfig& c, const std::string& s) { c.plotscript = to_bool("output.plotscript", s); },
       [](const ExperimentConfig& c) { return std::string(c.plotscript ? "true" : "false"); }},
      {"sweep.p_values",
       [](ExperimentConfig& c, const std::string& s) { c.sweep.p_values = to_list("sweep.p_values", s); },
       [](const ExperimentConfig& c) {
         std::string out;
         for (double v : c.sweep.p_values) out += (out.empty() ? "" : ", ") + fmt(v);
         return out;
       }},
      GBQ_DOUBLE("sweep.omega_min", sweep.omega_min),
      GBQ_DOUBLE("sweep.omega_max", sweep.omega_max),
      GBQ_DOUBLE("sweep.omega_step", sweep.omega_step),
      GBQ_DOUBLE("sweep.t_end", sweep.t_end),
      {"sweep.record_every",
       [](ExperimentConfig& c, const std::string& s) {
         c.sweep.record_every = static_cast<int>(to_long("sweep.record_every", s));
       },
       [](const ExperimentConfig& c) { return std::to_string(c.sweep.record_every); }},
      GBQ_DOUBLE("sweep.dx", sweep.dx),
      GBQ_DOUBLE("sweep.decay_tol", sweep.decay_tol),
  };
  return k;
}

#undef GBQ_DOUBLE

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ConfigMap out;
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    if (it.parents.empty()) throw ConfigError("config key '" + it.name + "' is outside a [section]");
    std::string value;
    for (std::size_t i = 0; i < it.inputs.size(); ++i) value += (i ? ", " : "") + it.inputs[i];
    out[it.fullname()] = value;
  }
  return out;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_override(ConfigMap& map, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0 || assignment.find('.') > eq)
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  map[CLI::detail::trim_copy(assignment.substr(0, eq))] = CLI::detail::trim_copy(assignment.substr(eq + 1));
}

ExperimentConfig build_config(const ConfigMap& map) {
  ExperimentConfig cfg;
  for (const auto& [name, value] : map) {
    const Key* key = nullptr;
    for (const auto& k : keys())
      if (name == k.name) key = &k;
    if (!key) throw ConfigError("unknown config key: " + name);
    if (name != "sweep.p_values" && value.find(", ") != std::string::npos)
      throw ConfigError(name + ": expected a single value, got '" + value + "'");
    key->set(cfg, value);
  }
  return cfg;
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> warnings;
  if (!(cfg.p > 0.0)) throw ConfigError("experiment.p must be positive");
  const double w = cfg.resolved_omega();
  if (!(std::abs(w) < 1.0)) throw ConfigError("experiment.omega must satisfy |omega| < 1");
  if (!(cfg.a >= 0.0 && cfg.a < cfg.a_max))
    throw ConfigError("experiment.a must lie in [0, a_max) with a_max = " + fmt(cfg.a_max));
  if (!(cfg.L > 0.0)) throw ConfigError("grid.L must be positive");
  if (cfg.N < 16 || cfg.N % 2 != 0) throw ConfigError("grid.N must be even and >= 16");
  if (cfg.evolution.record_every < 1) throw ConfigError("evolution.record_every must be >= 1");
  if (!(cfg.evolution.dt > 0.0) || !(cfg.evolution.t_end > 0.0))
    throw ConfigError("evolution.dt and evolution.t_end must be positive");
  const double R = cfg.resolved_R();
  if (!(2.0 * R < cfg.L)) throw ConfigError("virial.R must satisfy 2R < L");
  if (cfg.cutoff_R < 0.0 || cfg.epsilon_exit < 0.0 || !(cfg.epsilon_valid > 0.0))
    throw ConfigError("virial.R, modulation.epsilon_exit must be >= 0 and epsilon_valid > 0");
  const double tail = required_half_length(cfg.p, w, kDefaultDecayTol);
  if (cfg.L < tail)
    throw ConfigError("grid.L = " + fmt(cfg.L) + " is too small for the soliton tail; need L >= " + fmt(tail));
  if (cfg.a > 0.0 && 1.0 / R > cfg.a * cfg.a)
    warnings.push_back("1/R = " + fmt(1.0 / R) + " exceeds a^2 = " + fmt(cfg.a * cfg.a) +
                       "; the cutoff term is not dominated by the perturbation");
  const auto& s = cfg.sweep;
  if (!(s.omega_step > 0.0) || !(s.omega_min <= s.omega_max) || !(std::abs(s.omega_min) < 1.0) ||
      !(std::abs(s.omega_max) < 1.0))
    throw ConfigError("sweep omega range must satisfy |omega| < 1, min <= max, step > 0");
  for (double p : s.p_values)
    if (!(p > 0.0)) throw ConfigError("sweep.p_values must be positive");
  if (!(s.dx > 0.0) || !(s.t_end > 0.0) || s.record_every < 1 || !(s.decay_tol > 0.0))
    throw ConfigError("sweep.dx, sweep.t_end, sweep.decay_tol must be positive and record_every >= 1");
  return warnings;
}

ConfigMap to_map(const ExperimentConfig& cfg) {
  ConfigMap m;
  for (const auto& k : keys()) m[k.name] = k.get(cfg);
  return m;
}

std::string default_config_text() {
  const ConfigMap m = to_map(ExperimentConfig{});
  std::ostringstream os;
  os << "; gbq configuration. Comments start with ';'. Override any key on the\n"
        "; command line with --set section.key=value.\n";
  std::string section;
  for (const auto& k : keys()) {
    const std::string name = k.name;
    const std::string sec = name.substr(0, name.find('.'));
    if (sec != section) {
      os << (section.empty() ? "" : "\n") << "[" << sec << "]\n";
      section = sec;
    }
    os << name.substr(name.find('.') + 1) << " = " << m.at(name) << "\n";
  }
  return os.str();
}

}  // namespace gbq
