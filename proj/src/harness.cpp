#include "gbq/harness.hpp"

#include <cmath>

#include "gbq/error.hpp"
#include "gbq/modulation.hpp"

namespace gbq {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::UnstableExit: return "unstable-exit";
    case Verdict::StableRetained: return "stable-retained";
    case Verdict::Blowup: return "blowup";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::UnstableExit, Verdict::StableRetained, Verdict::Blowup, Verdict::Inconclusive})
    if (to_string(v) == s) return v;
  throw ConfigError("unknown verdict: " + s);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Sample {
  TrajectoryRow row;
  bool modulated = false;
  double xi_sq = 0.0;
  double lam_xi_eta_sq = 0.0;
  VirialIntegrals vi;
};

}  // namespace

ExperimentReport run_instability_experiment(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.warnings = validate(cfg);
  rep.config = to_map(cfg);
  rep.version = GBQ_VERSION;

  const double p = cfg.p, w = cfg.resolved_omega();
  const Grid grid = make_grid(cfg.L, cfg.N);
  const SolitonFamily fam = soliton_profile({p, w}, grid);
  FieldPair u0 = fam.pair;
  u0 *= 1.0 + cfg.a;

  rep.p = p;
  rep.omega = w;
  rep.a = cfg.a;
  rep.cutoff_R = cfg.resolved_R();
  rep.epsilon_exit = cfg.epsilon_exit > 0.0 ? cfg.epsilon_exit : 0.5 * norm_h1l2(fam.pair);
  rep.epsilon_valid = cfg.epsilon_valid;
  rep.rho_leading = rho_leading(p, w, cfg.a);

  const CutoffProfile cutoff = cutoff_profile(rep.cutoff_R, grid);
  const ConservedValues c0 = conserved_quantities(u0, w, p);
  ModulationOptions mopts;
  mopts.epsilon_valid = cfg.epsilon_valid;

  std::vector<Sample> samples;
  ModulationGuess guess{w, 0.0};
  double t_prev = 0.0;
  bool modulating = true;

  const auto hook = [&](double t, const FieldPair& st) {
    Sample s;
    TrajectoryRow& r = s.row;
    r.t = t;
    const ConservedValues c = conserved_quantities(st, w, p);
    r.E = c.energy;
    r.Q = c.momentum;
    r.tube_dist = tube_distance(st, fam).distance;
    if (modulating) {
      guess.y += guess.lambda * (t - t_prev);
      try {
        const ModulationState m = decompose(st, p, w, guess, mopts);
        guess = {m.lambda, m.y};
        s.modulated = true;
        r.lambda = m.lambda;
        r.y = m.y;
        r.eta_H1L2 = m.eta_norm;
        r.F1 = m.F1;
        r.F2 = m.F2;
        s.xi_sq = inner(m.eta.first, m.eta.first);
        s.lam_xi_eta_sq = norm_l2(m.lambda * m.eta.first + m.eta.second);
        s.lam_xi_eta_sq *= s.lam_xi_eta_sq;
        s.vi = virial_integrals(st, p, m.y, cutoff);
      } catch (const ConvergenceError& e) {
        modulating = false;
        rep.modulation_lost_time = t;
        rep.message = e.what();
      }
    }
    t_prev = t;
    samples.push_back(s);
    if (r.tube_dist > rep.epsilon_exit) {
      rep.exit_time = t;
      return false;
    }
    return true;
  };

  const Trajectory traj = evolve(u0, p, w, cfg.evolution, hook);
  rep.final_time = traj.final_time;
  if (traj.termination == Termination::Blowup) {
    rep.blowup_time = traj.final_time;
    rep.message = traj.message;
  }

  // Modulated prefix: rates by differencing, then virial rows.
  std::size_t m = 0;
  while (m < samples.size() && samples[m].modulated) ++m;
  rep.rows.resize(samples.size());
  rep.diagnostics.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    rep.rows[i] = samples[i].row;
    if (i >= m) {
      TrajectoryRow& r = rep.rows[i];
      r.lambda = r.y = r.eta_H1L2 = r.F1 = r.F2 = kNaN;
      r.I1_rate = r.I2_rate = r.I_rate = r.Itilde = r.rho = r.h_lambda = r.Rtilde = r.crosscheck_gap = kNaN;
    }
  }
  if (m >= 3) {
    std::vector<double> t(m), lam(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
      t[i] = samples[i].row.t;
      lam[i] = samples[i].row.lambda;
      y[i] = samples[i].row.y;
    }
    const std::vector<RateSample> rates = parameter_rates(t, lam, y, c0.momentum, p, w);
    const VirialInputs in{p, w, c0.energy, c0.momentum};
    std::vector<VirialRow> vrows(m);
    for (std::size_t i = 0; i < m; ++i) {
      const ModulationScalars ms{lam[i], rates[i].ydot, samples[i].xi_sq, samples[i].lam_xi_eta_sq};
      vrows[i] = virial_row(t[i], samples[i].vi, ms, in);
    }
    accumulate_itilde(vrows);
    for (std::size_t i = 0; i < m; ++i) {
      TrajectoryRow& r = rep.rows[i];
      const VirialRow& v = vrows[i];
      r.I1_rate = v.I1_rate;
      r.I2_rate = v.I2_rate;
      r.I_rate = v.I_rate;
      r.Itilde = v.Itilde;
      r.rho = v.rho;
      r.h_lambda = v.h_lambda;
      r.Rtilde = v.Rtilde;
      r.crosscheck_gap = v.crosscheck_gap;
      RowDiagnostics& d = rep.diagnostics[i];
      d.modulated = true;
      d.ydot = rates[i].ydot;
      d.lambdadot = rates[i].lambdadot;
      d.ydot_residual = rates[i].residual;
      d.ledger_gap = v.ledger_gap;
      d.h1_lambda = v.h1_lambda;
      d.R_remainder = v.R_remainder;
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      TrajectoryRow& r = rep.rows[i];
      r.I1_rate = r.I2_rate = r.I_rate = r.Itilde = r.rho = r.h_lambda = r.Rtilde = r.crosscheck_gap = kNaN;
      rep.diagnostics[i].modulated = true;
    }
  }

  // Validity window: the prefix with eta + |lambda - omega| <= epsilon_valid.
  std::size_t win = 0;
  while (win < m && rep.rows[win].eta_H1L2 + std::abs(rep.rows[win].lambda - w) <= cfg.epsilon_valid) {
    rep.diagnostics[win].in_window = true;
    ++win;
  }
  rep.eta0 = m > 0 ? rep.rows[0].eta_H1L2 : kNaN;
  rep.max_eta = 0.0;
  for (std::size_t i = 0; i < m; ++i) rep.max_eta = std::max(rep.max_eta, rep.rows[i].eta_H1L2);
  for (const auto& r : rep.rows) rep.max_tube = std::max(rep.max_tube, r.tube_dist);

  rep.min_I_rate = kNaN;
  rep.itilde_increasing = false;
  rep.virial_bound_holds = false;
  if (win > 0 && m >= 3) {
    rep.window_end = rep.rows[win - 1].t;
    rep.min_I_rate = rep.rows[0].I_rate;
    rep.itilde_increasing = win >= 2;
    for (std::size_t i = 0; i < win; ++i) {
      const TrajectoryRow& r = rep.rows[i];
      rep.min_I_rate = std::min(rep.min_I_rate, r.I_rate);
      if (i > 0 && !(r.Itilde > rep.rows[i - 1].Itilde)) rep.itilde_increasing = false;
      rep.max_ledger_gap = std::max(rep.max_ledger_gap, rep.diagnostics[i].ledger_gap);
      rep.max_crosscheck_gap = std::max(rep.max_crosscheck_gap, r.crosscheck_gap);
    }
    rep.virial_bound_holds = cfg.a > 0.0 && rep.min_I_rate >= 0.25 * rep.rho_leading;
  }

  if (rep.blowup_time) {
    rep.verdict = Verdict::Blowup;
  } else if (rep.exit_time) {
    rep.verdict = Verdict::UnstableExit;
  } else {
    // Still inside the tube at t_end. In the regime where the virial argument
    // predicts growth, a non-positive I' means the run cannot decide.
    const bool predicted_unstable = cfg.a > 0.0 && w * w <= p / 4.0 + 1e-12;
    const bool nonpositive = !(rep.min_I_rate > 0.0);
    rep.verdict = (predicted_unstable && nonpositive) ? Verdict::Inconclusive : Verdict::StableRetained;
  }
  return rep;
}

std::vector<double> sweep_omegas(const SweepConfig& s) {
  std::vector<double> out;
  const long n = std::lround((s.omega_max - s.omega_min) / s.omega_step);
  for (long k = 0; k <= n; ++k) out.push_back(s.omega_min + static_cast<double>(k) * s.omega_step);
  return out;
}

std::pair<double, std::size_t> sweep_grid(double p, double omega, const SweepConfig& s) {
  const double L = std::ceil(required_half_length(p, omega, std::min(s.decay_tol, kDefaultDecayTol))) + 1.0;
  std::size_t N = static_cast<std::size_t>(std::ceil(2.0 * L / s.dx));
  N = (N + 15) / 16 * 16;
  return {L, N};
}

SweepRowSummary summarize_row(double p, const std::vector<SweepCell>& row, double step) {
  SweepRowSummary s;
  s.p = p;
  s.omega_c = std::sqrt(p / 4.0);
  const auto unstable = [](Verdict v) { return v == Verdict::UnstableExit || v == Verdict::Blowup; };
  double lu = -std::numeric_limits<double>::infinity(), fs = std::numeric_limits<double>::infinity();
  for (const auto& c : row) {
    if (!c.error.empty()) continue;
    if (unstable(c.verdict)) lu = std::max(lu, c.omega);
    if (c.verdict == Verdict::StableRetained) fs = std::min(fs, c.omega);
  }
  s.last_unstable = std::isfinite(lu) ? lu : std::numeric_limits<double>::quiet_NaN();
  s.first_stable = std::isfinite(fs) ? fs : std::numeric_limits<double>::quiet_NaN();
  // One transition: unstable below, stable above, at most one undecided cell between.
  int undecided = 0;
  bool ordered = lu < fs;
  for (const auto& c : row) {
    const bool u = c.error.empty() && unstable(c.verdict);
    const bool st = c.error.empty() && c.verdict == Verdict::StableRetained;
    if (c.omega < lu && !u) ordered = false;
    if (c.omega > fs && !st) ordered = false;
    if (!u && !st) ++undecided;
  }
  s.single_transition = ordered && undecided <= 1;
  // Missing sides stand one cell outside the scanned range.
  const double lo = std::isfinite(lu) ? lu : row.front().omega - step;
  const double hi = std::isfinite(fs) ? fs : row.back().omega + step;
  const double slack = step * (1.0 + 1e-9);
  s.brackets = s.omega_c >= lo - slack && s.omega_c <= hi + slack && (hi - lo) <= 2.0 * slack;
  return s;
}

SweepResult run_stability_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::vector<double> omegas = sweep_omegas(cfg.sweep);
  const auto& ps = cfg.sweep.p_values;
  SweepResult res;
  res.cells.resize(ps.size() * omegas.size());
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = 0; j < omegas.size(); ++j) {
      SweepCell& c = res.cells[i * omegas.size() + j];
      c.p = ps[i];
      c.omega = omegas[j];
    }

  const long ncell = static_cast<long>(res.cells.size());
#pragma omp parallel for schedule(dynamic)
  for (long idx = 0; idx < ncell; ++idx) {
    SweepCell& c = res.cells[static_cast<std::size_t>(idx)];
    try {
      const auto [L, N] = sweep_grid(c.p, c.omega, cfg.sweep);
      c.L = L;
      c.N = N;
      ExperimentConfig cell = cfg;
      cell.p = c.p;
      cell.omega_critical = false;
      cell.omega = c.omega;
      cell.L = L;
      cell.N = N;
      cell.cutoff_R = 0.0;
      cell.epsilon_exit = 0.0;
      cell.evolution.t_end = cfg.sweep.t_end;
      cell.evolution.record_every = cfg.sweep.record_every;
      const ExperimentReport r = run_instability_experiment(cell);
      c.verdict = r.verdict;
      if (r.exit_time) c.exit_time = *r.exit_time;
      if (r.blowup_time) c.exit_time = *r.blowup_time;
      c.max_tube = r.max_tube;
    } catch (const std::exception& e) {
      c.error = e.what();
      c.verdict = Verdict::Inconclusive;
    }
  }

  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::vector<SweepCell> row(res.cells.begin() + static_cast<long>(i * omegas.size()),
                                     res.cells.begin() + static_cast<long>((i + 1) * omegas.size()));
    res.rows.push_back(summarize_row(ps[i], row, cfg.sweep.omega_step));
  }
  return res;
}

}  // namespace gbq
