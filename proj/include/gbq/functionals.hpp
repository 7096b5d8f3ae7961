#pragma once

// Energy, momentum, the action S_w = E + wQ, its gradient and the Hessian
// at a soliton background.

#include "gbq/ground_state.hpp"

namespace gbq {

struct ConservedValues {
  double energy = 0.0;
  double momentum = 0.0;
  double action = 0.0;
};

double energy(const FieldPair& state, double p);
double momentum(const FieldPair& state);
ConservedValues conserved_quantities(const FieldPair& state, double omega, double p);

/// S_w'(u, v) = (-u_xx + u - |u|^p u + w v, v + w u).
FieldPair action_gradient(const FieldPair& state, double omega, double p);

/// Q'(u, v) = (v, u).
FieldPair momentum_gradient(const FieldPair& state);

/// S_w''(Phi_w) (f, g) = (-f'' + f - (p+1) phi^p f + w g, g + w f).
/// The background must have been built at lambda = omega and the same p.
FieldPair hessian_apply(const FieldPair& f, double omega, double p, const SolitonFamily& background);

/// <S_w'' a, b>
double hessian_form(const FieldPair& a, const FieldPair& b, double omega, double p,
                    const SolitonFamily& background);

/// d Phi_w / d w = (d phi, -phi - w d phi).
FieldPair omega_derivative_pair(const SolitonFamily& background);

/// L2 x L2 norm of S_w''(Phi_w) dPhi_w/dw + Q'(Phi_w).
double hessian_omega_derivative_identity(double omega, double p, const Grid& grid);

}  // namespace gbq
