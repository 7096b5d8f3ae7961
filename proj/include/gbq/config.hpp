#pragma once

// Experiment configuration: INI-style "key = value" sections, overridable by
// "section.key=value" strings. Every key has a default (see default_config_text).

#include <map>
#include <string>
#include <vector>

#include "gbq/evolution.hpp"

namespace gbq {

struct SweepConfig {
  std::vector<double> p_values{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
  double omega_min = 0.05;
  double omega_max = 0.95;
  double omega_step = 0.05;
  double t_end = 100.0;
  int record_every = 100;
  double dx = 0.08;          // grid spacing; L from the decay tolerance
  double decay_tol = 1e-11;  // soliton tail at the box edge
};

struct ExperimentConfig {
  double p = 2.0;
  bool omega_critical = true;  // omega = sqrt(p/4)
  double omega = 0.0;          // used when omega_critical is false
  double a = 0.01;             // u0 = (1 + a) Phi_omega
  double a_max = 0.02;
  double L = 40.0;
  std::size_t N = 1024;
  EvolutionConfig evolution{5e-3, 200.0, 20, 1e3};
  double cutoff_R = 0.0;       // 0: L/4
  double epsilon_exit = 0.0;   // 0: 0.5 ||Phi_omega||_{H1 x L2}
  double epsilon_valid = 0.25;
  std::string output_dir = ".";
  std::string output_prefix = "run";
  bool plotscript = true;
  SweepConfig sweep;

  double resolved_omega() const;
  double resolved_R() const;
};

using ConfigMap = std::map<std::string, std::string>;

/// Parses INI text into "section.key" -> value. Throws ConfigError.
ConfigMap parse_config_text(const std::string& text);
ConfigMap read_config_file(const std::string& path);

/// "section.key=value"
void apply_override(ConfigMap& map, const std::string& assignment);

/// Unknown keys and malformed values throw ConfigError.
ExperimentConfig build_config(const ConfigMap& map);

/// Throws ConfigError on unsatisfiable settings; returns warnings.
std::vector<std::string> validate(const ExperimentConfig& cfg);

/// Full key set with values at round-trip precision.
ConfigMap to_map(const ExperimentConfig& cfg);

/// Commented INI listing every key at its default.
std::string default_config_text();

}  // namespace gbq
