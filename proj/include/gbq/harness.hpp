#pragma once

// Experiment drivers: a single perturbed-soliton run with modulation and
// virial tracking, and the (p, omega) stability sweep.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gbq/config.hpp"
#include "gbq/virial.hpp"

namespace gbq {

enum class Verdict { UnstableExit, StableRetained, Blowup, Inconclusive };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// One recorded time. Modulation and virial columns are NaN outside the
/// modulation window.
struct TrajectoryRow {
  double t = 0.0;
  double E = 0.0;
  double Q = 0.0;
  double lambda = 0.0;
  double y = 0.0;
  double eta_H1L2 = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
  double tube_dist = 0.0;
  double I1_rate = 0.0;
  double I2_rate = 0.0;
  double I_rate = 0.0;
  double Itilde = 0.0;
  double rho = 0.0;
  double h_lambda = 0.0;
  double Rtilde = 0.0;
  double crosscheck_gap = 0.0;
};

/// Extra per-row diagnostics kept in memory only.
struct RowDiagnostics {
  bool modulated = false;
  bool in_window = false;  // eta + |lambda - omega| <= epsilon_valid, prefix from t = 0
  double ydot = 0.0;
  double lambdadot = 0.0;
  double ydot_residual = 0.0;  // (ydot - lambda) - momentum prediction
  double ledger_gap = 0.0;
  double h1_lambda = 0.0;
  double R_remainder = 0.0;
};

struct ExperimentReport {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> exit_time;
  std::optional<double> blowup_time;
  std::optional<double> modulation_lost_time;
  double final_time = 0.0;
  double p = 0.0;
  double omega = 0.0;
  double a = 0.0;
  double epsilon_exit = 0.0;
  double epsilon_valid = 0.0;
  double cutoff_R = 0.0;
  double eta0 = 0.0;
  double max_eta = 0.0;        // over modulated rows
  double max_tube = 0.0;
  double window_end = 0.0;     // last time inside the validity window
  double min_I_rate = 0.0;     // over the window
  double rho_leading = 0.0;
  bool itilde_increasing = false;     // over the window
  bool virial_bound_holds = false;    // I' >= rho_leading / 4 over the window
  double max_ledger_gap = 0.0;
  double max_crosscheck_gap = 0.0;
  std::vector<std::string> warnings;
  std::string message;
  std::string version;
  std::string spectral_report;  // path of a spectrum report, if one was produced
  ConfigMap config;
  std::vector<TrajectoryRow> rows;
  std::vector<RowDiagnostics> diagnostics;  // not serialized
};

/// Runs u0 = (1 + a) Phi_omega. Numerical failures of a sample end the
/// modulation window; the verdict is taken on the translation-invariant tube
/// distance.
ExperimentReport run_instability_experiment(const ExperimentConfig& cfg);

struct SweepCell {
  double p = 0.0;
  double omega = 0.0;
  double L = 0.0;
  std::size_t N = 0;
  Verdict verdict = Verdict::Inconclusive;
  double exit_time = std::numeric_limits<double>::quiet_NaN();
  double max_tube = 0.0;
  std::string error;  // set when the cell failed; the sweep continues
};

struct SweepRowSummary {
  double p = 0.0;
  double omega_c = 0.0;
  double last_unstable = std::numeric_limits<double>::quiet_NaN();
  double first_stable = std::numeric_limits<double>::quiet_NaN();
  bool single_transition = false;
  bool brackets = false;  // boundary within one cell of omega_c
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<SweepRowSummary> rows;
};

/// Omega grid of the sweep: omega_min + k step up to omega_max.
std::vector<double> sweep_omegas(const SweepConfig& s);

/// Grid for one cell: L from the soliton decay, N from dx.
std::pair<double, std::size_t> sweep_grid(double p, double omega, const SweepConfig& s);

/// Cells run in parallel (dynamic schedule), results in row-major order.
SweepResult run_stability_sweep(const ExperimentConfig& cfg);

SweepRowSummary summarize_row(double p, const std::vector<SweepCell>& row, double step);

}  // namespace gbq
