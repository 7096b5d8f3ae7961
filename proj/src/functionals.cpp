#include "gbq/functionals.hpp"

#include <cmath>

#include "gbq/error.hpp"
#include "gbq/kernels.hpp"

namespace gbq {

double energy(const FieldPair& state, double p) {
  const Field& u = state.first;
  const Field& v = state.second;
  const Field ux = spectral_derivative(u, 1);
  const double dx = u.grid.dx();
  const double quad = inner(ux, ux) + inner(u, u) + inner(v, v);
  const double pot = dx * kernels::parallel::abs_power_sum(u.values, p + 2.0);
  return 0.5 * quad - pot / (p + 2.0);
}

double momentum(const FieldPair& state) { return inner(state.first, state.second); }

ConservedValues conserved_quantities(const FieldPair& state, double omega, double p) {
  ConservedValues c;
  c.energy = energy(state, p);
  c.momentum = momentum(state);
  c.action = c.energy + omega * c.momentum;
  return c;
}

FieldPair action_gradient(const FieldPair& state, double omega, double p) {
  const Field& u = state.first;
  const Field& v = state.second;
  const Field uxx = spectral_derivative(u, 2);
  Field nl(u.grid);
  kernels::parallel::power_nonlinearity(u.values, p, nl.values);
  FieldPair out(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.first[i] = -uxx[i] + u[i] - nl[i] + omega * v[i];
    out.second[i] = v[i] + omega * u[i];
  }
  return out;
}

FieldPair momentum_gradient(const FieldPair& state) { return FieldPair(state.second, state.first); }

FieldPair hessian_apply(const FieldPair& f, double omega, double p, const SolitonFamily& background) {
  if (background.p() != p || background.lambda() != omega)
    throw PreconditionError("Hessian background was built for different (p, lambda)");
  if (!background.grid().same_as(f.grid())) throw PreconditionError("Hessian background grid mismatch");
  const Field& a = f.first;
  const Field& b = f.second;
  const Field axx = spectral_derivative(a, 2);
  Field pot(a.grid);
  kernels::parallel::abs_power(background.profile.values, p, pot.values);
  FieldPair out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.first[i] = -axx[i] + a[i] - (p + 1.0) * pot[i] * a[i] + omega * b[i];
    out.second[i] = b[i] + omega * a[i];
  }
  return out;
}

double hessian_form(const FieldPair& a, const FieldPair& b, double omega, double p,
                    const SolitonFamily& background) {
  return inner(hessian_apply(a, omega, p, background), b);
}

FieldPair omega_derivative_pair(const SolitonFamily& background) {
  const double w = background.lambda();
  const Field& dphi = background.lambda_derivative;
  return FieldPair(dphi, -1.0 * background.profile - w * dphi);
}

double hessian_omega_derivative_identity(double omega, double p, const Grid& grid) {
  const SolitonFamily bg = soliton_profile({p, omega}, grid);
  FieldPair r = hessian_apply(omega_derivative_pair(bg), omega, p, bg);
  r += momentum_gradient(bg.pair);
  return std::sqrt(inner(r, r));
}

}  // namespace gbq
