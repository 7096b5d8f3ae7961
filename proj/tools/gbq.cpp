// gbq: command-line driver. Exit codes: 0 success, 2 configuration error,
// 3 numerical or I/O failure, 4 inconclusive experiment.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "gbq/error.hpp"
#include "gbq/evolution.hpp"
#include "gbq/harness.hpp"
#include "gbq/modulation.hpp"
#include "gbq/report.hpp"
#include "gbq/spectrum.hpp"

using nlohmann::json;
using namespace gbq;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInconclusive = 4;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& sets) {
  ConfigMap map = path.empty() ? ConfigMap{} : read_config_file(path);
  for (const auto& s : sets) apply_override(map, s);
  return build_config(map);
}

void print_json(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_text_file(out, j.dump(2) + "\n");
  }
}

int cmd_ground_state(double p, double lambda, double L, std::size_t N, bool oracle, const std::string& out) {
  const Grid g = make_grid(L, N);
  const SolitonFamily s = soliton_profile({p, lambda}, g);
  json j;
  j["p"] = p;
  j["lambda"] = lambda;
  j["L"] = L;
  j["N"] = N;
  j["omega_c"] = std::sqrt(p / 4.0);
  j["norm_sq"] = s.norm_sq;
  j["norm_sq_quadrature"] = inner(s.profile, s.profile);
  j["elliptic_residual"] = s.elliptic_residual;
  j["momentum"] = momentum(s.pair);
  j["momentum_closed_form"] = momentum_curve(p, lambda).q;
  j["dq_dlambda"] = momentum_curve(p, lambda).dq_dlambda;
  j["energy"] = energy(s.pair, p);
  if (oracle) {
    const Field f = petviashvili_oracle({p, lambda}, g, 1e-13);
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - s.profile[i]));
    j["oracle_max_diff"] = m;
  }
  print_json(j, out);
  return 0;
}

int cmd_spectrum(double p, const std::string& omega_s, double L, std::size_t N, int k, bool coercivity,
                 const std::string& out) {
  const double w = omega_s == "critical" ? std::sqrt(p / 4.0) : std::stod(omega_s);
  const SpectralReport r = hessian_spectrum(p, w, make_grid(L, N), k, coercivity);
  json j;
  j["p"] = r.p;
  j["omega"] = r.omega;
  j["N"] = r.N;
  j["L"] = r.L;
  j["eigenvalues"] = r.eigenvalues;
  j["negative_count"] = r.negative_count;
  j["mu0_numeric"] = r.mu0_numeric;
  j["mu0_formula"] = r.mu0_formula;
  j["mu0_discrepancy"] = std::abs(r.mu0_numeric - r.mu0_formula);
  j["lambda_minus1"] = r.lambda_minus1;
  j["lambda_minus1_exact"] = r.lambda_minus1_exact;
  j["scalar_second"] = r.scalar_second;
  j["kernel_eig"] = r.kernel_eig;
  j["kernel_correlation"] = r.kernel_correlation;
  j["essential_edge"] = r.essential_edge;
  j["coercivity_min"] = num(r.coercivity_min);
  print_json(j, out);
  return 0;
}

int cmd_evolve(const ExperimentConfig& cfg, const std::string& from, const std::string& checkpoint_out) {
  for (const auto& w : validate(cfg)) std::cerr << "warning: " << w << "\n";
  const double w = cfg.resolved_omega();
  FieldPair u0;
  double t0 = 0.0;
  double p = cfg.p;
  if (from.empty()) {
    u0 = soliton_profile({p, w}, make_grid(cfg.L, cfg.N)).pair;
    u0 *= 1.0 + cfg.a;
  } else {
    Checkpoint cp = read_checkpoint(from);
    u0 = std::move(cp.state);
    t0 = cp.t;
    p = cp.p;
  }
  const Trajectory tr = evolve(u0, p, w, cfg.evolution, {}, t0);
  std::filesystem::create_directories(cfg.output_dir);
  const std::string base = (std::filesystem::path(cfg.output_dir) / cfg.output_prefix).string();
  std::string csv = "t,E,Q,S,sup_u\n";
  char buf[160];
  for (const auto& s : tr.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.conserved.energy, s.conserved.momentum,
                  s.conserved.action, s.sup_u);
    csv += buf;
  }
  write_text_file(base + "_conserved.csv", csv);
  const std::string cp_path = checkpoint_out.empty() ? base + "_final.csv" : checkpoint_out;
  write_checkpoint(cp_path, tr.final_time, p, tr.final_state);
  std::cout << "termination: " << to_string(tr.termination) << " at t = " << tr.final_time << "\n"
            << "wrote " << base << "_conserved.csv and " << cp_path << "\n";
  if (tr.termination == Termination::Blowup) {
    std::cerr << tr.message << "\n";
    return kExitNumerical;
  }
  return 0;
}

int cmd_modulate(const std::string& path, const std::string& omega_s, const std::string& out) {
  const Checkpoint cp = read_checkpoint(path);
  const double w = omega_s == "critical" ? std::sqrt(cp.p / 4.0) : std::stod(omega_s);
  const ModulationGuess g = cold_start_guess(cp.state, cp.p, w);
  const ModulationState m = decompose(cp.state, cp.p, w, g);
  const SolitonFamily s = soliton_profile({cp.p, w}, cp.state.grid());
  json j;
  j["t"] = cp.t;
  j["p"] = cp.p;
  j["omega"] = w;
  j["lambda"] = m.lambda;
  j["y"] = m.y;
  j["F1"] = m.F1;
  j["F2"] = m.F2;
  j["eta_H1L2"] = m.eta_norm;
  j["valid"] = m.valid;
  j["iterations"] = m.iterations;
  j["tube_dist"] = tube_distance(cp.state, s).distance;
  print_json(j, out);
  return 0;
}

int cmd_experiment(const ExperimentConfig& cfg) {
  ExperimentReport r = run_instability_experiment(cfg);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  const std::string csv = emit_report(r, ReportFormat::Csv, cfg.output_dir, cfg.output_prefix);
  const std::string js = emit_report(r, ReportFormat::Json, cfg.output_dir, cfg.output_prefix);
  std::cout << "verdict: " << to_string(r.verdict);
  if (r.exit_time) std::cout << " (exit at t = " << *r.exit_time << ")";
  if (r.blowup_time) std::cout << " (blowup at t = " << *r.blowup_time << ")";
  std::cout << "\nmax eta: " << r.max_eta << ", window end: " << r.window_end << ", min I': " << r.min_I_rate
            << ", rho_leading/4: " << 0.25 * r.rho_leading << "\nwrote " << csv << ", " << js;
  if (cfg.plotscript) std::cout << ", " << emit_report(r, ReportFormat::Plotscript, cfg.output_dir, cfg.output_prefix);
  std::cout << "\n";
  return r.verdict == Verdict::Inconclusive ? kExitInconclusive : 0;
}

int cmd_sweep(const ExperimentConfig& cfg) {
  const SweepResult s = run_stability_sweep(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  const std::string base = (std::filesystem::path(cfg.output_dir) / cfg.output_prefix).string();
  write_text_file(base + "_sweep.csv", sweep_csv(s));
  write_text_file(base + "_sweep_summary.csv", sweep_summary_csv(s));
  std::cout << sweep_summary_csv(s) << "wrote " << base << "_sweep.csv and " << base << "_sweep_summary.csv\n";
  return 0;
}

int cmd_report(const std::string& path, const std::string& format, const std::string& dir, const std::string& prefix) {
  const ExperimentReport r = report_from_json(read_text_file(path));
  const ReportFormat f = format == "csv" ? ReportFormat::Csv
                         : format == "json" ? ReportFormat::Json
                                            : ReportFormat::Plotscript;
  std::cout << "wrote " << emit_report(r, f, dir, prefix) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soliton stability experiments for u_t = v_x, v_t = (-u_xx + u - |u|^p u)_x"};
  app.set_version_flag("--version", std::string(GBQ_VERSION));
  app.require_subcommand(0, 1);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "Print every configuration key with its default");

  double p = 2.0, lambda = 0.0, L = 40.0;
  std::size_t N = 1024;
  int k = 8;
  bool oracle = false, coercivity = false;
  std::string out, omega_s = "critical", config_path, from, checkpoint_out, json_path, format = "csv";
  std::string dir = ".", prefix = "report";
  std::vector<std::string> sets;

  auto* gs = app.add_subcommand("ground-state", "Closed-form profile diagnostics as JSON");
  gs->add_option("--p", p, "Nonlinearity exponent")->capture_default_str();
  gs->add_option("--lambda", lambda, "Speed")->capture_default_str();
  gs->add_option("--L", L, "Half-length of the box")->capture_default_str();
  gs->add_option("--N", N, "Grid points")->capture_default_str();
  gs->add_flag("--oracle", oracle, "Also run the Petviashvili iteration");
  gs->add_option("-o,--out", out, "Output file (stdout if absent)");

  auto* sp = app.add_subcommand("spectrum", "Smallest Hessian eigenvalues and checks as JSON");
  sp->add_option("--p", p)->capture_default_str();
  sp->add_option("--omega", omega_s, "Speed or 'critical'")->capture_default_str();
  sp->add_option("--L", L)->capture_default_str();
  sp->add_option("--N", N)->capture_default_str();
  sp->add_option("--k", k, "Number of eigenvalues (>= 4)")->capture_default_str();
  sp->add_flag("--coercivity", coercivity, "Also compute the constrained minimum");
  sp->add_option("-o,--out", out);

  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "INI configuration file");
    sub->add_option("--set", sets, "Override, e.g. --set evolution.t_end=50");
  };
  auto* ev = app.add_subcommand("evolve", "Evolve (1+a) Phi_omega or a checkpoint");
  add_config(ev);
  ev->add_option("--from", from, "Start from a checkpoint CSV");
  ev->add_option("--checkpoint-out", checkpoint_out, "Final state checkpoint path");

  auto* mo = app.add_subcommand("modulate", "Decompose a checkpoint near Phi_omega");
  mo->add_option("--checkpoint", from, "Checkpoint CSV")->required();
  mo->add_option("--omega", omega_s, "Reference speed or 'critical'")->capture_default_str();
  mo->add_option("-o,--out", out);

  auto* ex = app.add_subcommand("experiment", "Perturbed-soliton run with modulation and virial tracking");
  add_config(ex);
  auto* sw = app.add_subcommand("sweep", "Stability map over (p, omega)");
  add_config(sw);

  auto* rp = app.add_subcommand("report", "Re-emit a JSON report as csv, json or plotscript");
  rp->add_option("--json", json_path, "Report JSON")->required();
  rp->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "plotscript"}))->capture_default_str();
  rp->add_option("--dir", dir)->capture_default_str();
  rp->add_option("--prefix", prefix)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (print_config) {
      std::cout << default_config_text();
      return 0;
    }
    if (*gs) return cmd_ground_state(p, lambda, L, N, oracle, out);
    if (*sp) return cmd_spectrum(p, omega_s, L, N, k, coercivity, out);
    if (*ev) return cmd_evolve(load_config(config_path, sets), from, checkpoint_out);
    if (*mo) return cmd_modulate(from, omega_s, out);
    if (*ex) return cmd_experiment(load_config(config_path, sets));
    if (*sw) return cmd_sweep(load_config(config_path, sets));
    if (*rp) return cmd_report(json_path, format, dir, prefix);
    std::cout << app.help();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid number: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
