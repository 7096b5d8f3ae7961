#pragma once

// Decomposition u(. + y) = Phi_lambda + eta with eta orthogonal to
// Gamma_lambda = (gamma_lambda, 0) and Psi_lambda = (phi_lambda, 0), and the
// rate diagnostics built on a time series of such decompositions.

#include <span>
#include <vector>

#include "gbq/evolution.hpp"
#include "gbq/ground_state.hpp"

namespace gbq {

struct ModulationState {
  double lambda = 0.0;
  double y = 0.0;
  FieldPair eta;  // (xi, eta) = u(. + y) - Phi_lambda
  double F1 = 0.0;
  double F2 = 0.0;
  double eta_norm = 0.0;  // H1 x L2
  bool valid = false;     // eta_norm + |lambda - omega| <= epsilon_valid
  int iterations = 0;
};

struct OrthogonalityResiduals {
  double F1;
  double F2;
};

/// F1 = <u(. + y) - Phi_lambda, Gamma_lambda>, F2 = <., Psi_lambda>.
OrthogonalityResiduals orthogonality_residuals(const FieldPair& state, double lambda, double y, double p);

/// [[dF1/dlambda, dF1/dy], [dF2/dlambda, dF2/dy]] at (lambda, y).
Mat2 modulation_jacobian(const FieldPair& state, double lambda, double y, double p);

struct ModulationGuess {
  double lambda;
  double y;
};

struct ModulationOptions {
  int max_iter = 40;
  double tol = 1e-12;            // on |F| / ||phi_lambda||^2
  double epsilon_valid = 0.25;   // window on ||eta|| + |lambda - omega|
  double decay_tol = 1e-6;       // soliton decay check for trial speeds
};

/// Newton on (F1, F2) from the guess. Throws ConvergenceError when the
/// iteration stalls, leaves |lambda| < 1 or the trial soliton no longer fits
/// the box.
ModulationState decompose(const FieldPair& state, double p, double omega, const ModulationGuess& guess,
                          const ModulationOptions& opts = {});

/// (omega, y*) with y* maximizing the L2 correlation of u with phi_omega(. - y).
ModulationGuess cold_start_guess(const FieldPair& state, double p, double omega);

struct TubeDistance {
  double distance;  // inf_y ||u(. + y) - Phi_omega||_{H1 x L2}
  double y;
};

TubeDistance tube_distance(const FieldPair& state, const SolitonFamily& background);

struct RateSample {
  double t;
  double ydot;
  double lambdadot;
  double ydot_minus_lambda;
  double prediction;  // ||phi||^-2 [Q(Phi_lambda) - Q(Phi_w)] - ||phi||^-2 [Q0 - Q(Phi_w)]
  double residual;    // ydot_minus_lambda - prediction
};

/// Three-point derivative of a nonuniform series: centered inside, second
/// order one-sided at the ends. Needs at least 3 samples.
std::vector<double> series_derivative(std::span<const double> t, std::span<const double> f);

/// Rates from a series of decompositions; q0 = Q(u0).
std::vector<RateSample> parameter_rates(std::span<const double> t, std::span<const double> lambda,
                                        std::span<const double> y, double q0, double p, double omega);

}  // namespace gbq
