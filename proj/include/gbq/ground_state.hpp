#pragma once

// Solitary-wave family phi_lambda of -phi'' + (1 - lambda^2) phi = phi^{p+1},
// its derivatives, the direction vectors used by the modulation and
// coercivity code, and the momentum curve Q(Phi_lambda).

#include <optional>

#include "gbq/grid.hpp"

namespace gbq {

/// Largest |phi_lambda(L)| accepted before the box is declared too small.
inline constexpr double kDefaultDecayTol = 1e-11;

struct SolitonParams {
  double p = 2.0;
  double lambda = 0.0;
  double omega_c() const;
};

struct SolitonFamily {
  SolitonParams params;
  Field profile;            // phi_lambda
  Field x_derivative;       // phi_lambda'
  Field xx_derivative;      // phi_lambda''
  Field lambda_derivative;  // d phi_lambda / d lambda
  Field gamma;              // odd primitive of phi_lambda
  Field gamma_lambda_derivative;
  FieldPair pair;        // (phi, -lambda phi)
  FieldPair psi;         // (phi, 0)
  FieldPair gamma_pair;  // (gamma, 0)
  /// (1/2w)(d phi, -w d phi) with w = lambda; absent at lambda = 0.
  std::optional<FieldPair> negdir;
  double norm_sq = 0.0;  // ||phi_lambda||^2 (closed form)
  double elliptic_residual = 0.0;

  const Grid& grid() const { return profile.grid; }
  double p() const { return params.p; }
  double lambda() const { return params.lambda; }
};

/// Closed-form profile on the grid. Throws PreconditionError for |lambda| >= 1
/// or p <= 0, DomainTooSmall when phi(+-L) exceeds decay_tol.
SolitonFamily soliton_profile(const SolitonParams& params, const Grid& grid,
                              double decay_tol = kDefaultDecayTol);

/// Pointwise closed forms.
double soliton_value(double p, double lambda, double x);
double soliton_slope(double p, double lambda, double x);

/// Normalized fixed-point iteration for the profile, independent of the
/// closed form. Throws ConvergenceError after max_iter sweeps.
Field petviashvili_oracle(const SolitonParams& params, const Grid& grid, double tol,
                          int max_iter = 1000, double decay_tol = kDefaultDecayTol);

/// sup |-phi'' + (1 - lambda^2) phi - |phi|^p phi| with a spectral phi''.
double elliptic_residual(const Field& phi, double p, double lambda);

/// ||phi_0||^2 for the exponent p (quadrature, cached).
double ground_norm_sq(double p);
double profile_norm_sq(double p, double lambda);
double profile_norm_sq_dlambda(double p, double lambda);

struct MomentumPoint {
  double q;
  double dq_dlambda;
};

/// Q(Phi_lambda) and its lambda-derivative.
MomentumPoint momentum_curve(double p, double lambda);

/// Positive root of dQ/dlambda on (0, 1) by bisection. Requires 0 < p < 4.
double critical_frequency_root(double p);

/// Half-length at which phi_lambda has decayed to tol.
double required_half_length(double p, double lambda, double tol = kDefaultDecayTol);

}  // namespace gbq
