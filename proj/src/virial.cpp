#include "gbq/virial.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gbq/error.hpp"
#include "gbq/ground_state.hpp"
#include "gbq/kernels.hpp"

namespace gbq {

namespace {

// (1 - s)^4 (1 + 5s + 14s^2 + 30s^3) expanded.
constexpr std::array<double, 8> kBridge{1.0, 1.0, 0.0, 0.0, -55.0, 129.0, -106.0, 30.0};

double bridge(int order, double s) {
  double acc = 0.0;
  for (int n = 7; n >= order; --n) {
    double c = kBridge[static_cast<std::size_t>(n)];
    for (int m = 0; m < order; ++m) c *= n - m;
    acc = acc * s + c;
  }
  return acc;
}

// Odd extension: value odd, first and third derivative even.
template <int Order>
double cutoff_eval(double R, double x) {
  const double a = std::abs(x);
  double v;
  if (a <= R) {
    v = Order == 0 ? a : (Order == 1 ? 1.0 : 0.0);
  } else if (a >= 2.0 * R) {
    v = 0.0;
  } else {
    const double s = (a - R) / R;
    v = bridge(Order, s) * std::pow(R, 1 - Order);
  }
  return (Order == 0 && x < 0) ? -v : v;
}

double sq_integral(const Field& f) { return inner(f, f); }

}  // namespace

double cutoff_value(double R, double x) { return cutoff_eval<0>(R, x); }
double cutoff_slope(double R, double x) { return cutoff_eval<1>(R, x); }
double cutoff_third(double R, double x) { return cutoff_eval<3>(R, x); }

CutoffProfile cutoff_profile(double R, const Grid& grid) {
  if (!(R > 0.0) || !(2.0 * R < grid.half_length()))
    throw PreconditionError("cutoff radius needs 0 < 2R < L");
  CutoffProfile c;
  c.R = R;
  c.values = sample(grid, [R](double x) { return cutoff_value(R, x); });
  c.first = sample(grid, [R](double x) { return cutoff_slope(R, x); });
  c.third = sample(grid, [R](double x) { return cutoff_third(R, x); });
  // Bounds of the bridge itself, on a fine grid of s.
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double s = i / 4000.0;
    lo = std::min(lo, bridge(1, s));
    hi = std::max(hi, std::abs(bridge(3, s)));
  }
  c.min_slope = lo;
  c.third_bound = hi;
  return c;
}

ShiftedCutoff shift_cutoff(const CutoffProfile& c, double y) {
  const Grid& g = c.values.grid;
  const double L = g.half_length(), R = c.R;
  return {sample(g, [&](double x) { return cutoff_slope(R, wrap_to_box(x - y, L)); }),
          sample(g, [&](double x) { return cutoff_third(R, wrap_to_box(x - y, L)); })};
}

double I1_rate(const FieldPair& state, double p) {
  const Field& u = state.first;
  const Field ux = spectral_derivative(u, 1);
  const double lp = state.grid().dx() * kernels::parallel::abs_power_sum(u.values, p + 2.0);
  return sq_integral(state.second) - sq_integral(u) - sq_integral(ux) + lp;
}

VirialIntegrals virial_integrals(const FieldPair& state, double p, double y, const CutoffProfile& cutoff) {
  const Grid& g = state.grid();
  if (!g.same_as(cutoff.values.grid)) throw PreconditionError("cutoff built on a different grid");
  const Field& u = state.first;
  const Field& v = state.second;
  const Field ux = spectral_derivative(u, 1);
  const ShiftedCutoff sc = shift_cutoff(cutoff, y);
  const double L = g.half_length(), R = cutoff.R;
  const Field phi = sample(g, [&](double x) { return cutoff_value(R, wrap_to_box(x - y, L)); });

  Field apow(g);
  kernels::parallel::abs_power(u.values, p + 2.0, apow.values);
  const double kq = 2.0 * (p + 1.0) / (p + 2.0);
  Field uv(g), d(g), u2(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    uv[i] = u[i] * v[i];
    u2[i] = u[i] * u[i];
    d[i] = 3.0 * ux[i] * ux[i] + v[i] * v[i] + u2[i] - kq * apow[i];
  }
  VirialIntegrals vi;
  vi.I1_rate = sq_integral(v) - sq_integral(u) - sq_integral(ux) + quadrature_integrate(apow);
  vi.I2 = inner(phi, uv);
  vi.uv_total = quadrature_integrate(uv);
  vi.uv_local = inner(sc.first, uv);
  vi.d_total = quadrature_integrate(d);
  vi.d_local = inner(sc.first, d);
  vi.third_local = inner(sc.third, u2);
  return vi;
}

double I2_rate(const VirialIntegrals& vi, double ydot) {
  return -ydot * vi.uv_local - 0.5 * vi.d_local + 0.5 * vi.third_local;
}

double I2_rate(const FieldPair& state, double p, double y, double ydot, const CutoffProfile& cutoff) {
  return I2_rate(virial_integrals(state, p, y, cutoff), ydot);
}

double remainder_R(const VirialIntegrals& vi, double ydot) {
  return 2.0 * ydot * (vi.uv_total - vi.uv_local) + (vi.d_total - vi.d_local) + vi.third_local;
}

double soliton_energy(double p, double lambda) {
  // Pohozaev: ||phi'||^2 = c p/(p+4) ||phi||^2, int phi^{p+2} = 2c(p+2)/(p+4) ||phi||^2.
  const double c = 1.0 - lambda * lambda;
  return 0.5 * profile_norm_sq(p, lambda) * (1.0 + lambda * lambda + c * (p - 4.0) / (p + 4.0));
}

double action_gap(double p, double omega, double lambda) {
  const double el = soliton_energy(p, lambda), ew = soliton_energy(p, omega);
  const double ql = momentum_curve(p, lambda).q, qw = momentum_curve(p, omega).q;
  return (el + lambda * ql) - (ew + lambda * qw);
}

double rho(double p, double omega, double lambda, double e0, double q0) {
  const double k = (4.0 - p) / p;
  const double ew = soliton_energy(p, omega), qw = momentum_curve(p, omega).q;
  return -2.0 * (4.0 / p + 1.0) * (e0 - ew) - 2.0 * lambda * (2.0 * k + 1.0) * (q0 - qw) +
         2.0 / profile_norm_sq(p, lambda) * q0 * (q0 - qw);
}

double rho_leading(double p, double omega, double a) {
  return 4.0 * a * omega * omega * (4.0 - p) / p * profile_norm_sq(p, omega);
}

namespace {

double h_common(double p, double omega, double lambda) {
  const double k = (4.0 - p) / p;
  return -2.0 * (4.0 / p + 1.0) * soliton_energy(p, omega) -
         2.0 * lambda * (2.0 * k + 1.0) * momentum_curve(p, omega).q +
         2.0 * (1.0 - lambda * lambda * k) * profile_norm_sq(p, lambda);
}

}  // namespace

double h_lambda(double p, double omega, double lambda, double q0) {
  const double dq = momentum_curve(p, lambda).q - momentum_curve(p, omega).q;
  return h_common(p, omega, lambda) - 2.0 / profile_norm_sq(p, lambda) * q0 * dq;
}

double h1_lambda(double p, double omega, double lambda) {
  const double dq = momentum_curve(p, lambda).q - momentum_curve(p, omega).q;
  return h_common(p, omega, lambda) + 2.0 * omega * dq;
}

VirialRow virial_row(double t, const VirialIntegrals& vi, const ModulationScalars& m, const VirialInputs& in) {
  const double p = in.p, l = m.lambda, k = (4.0 - p) / p;
  const double n2 = profile_norm_sq(p, l);
  const double ql = momentum_curve(p, l).q, qw = momentum_curve(p, in.omega).q;

  VirialRow r;
  r.t = t;
  r.I2 = vi.I2;
  r.I1_rate = vi.I1_rate;
  r.I2_rate = I2_rate(vi, m.ydot);
  r.I_rate = (4.0 / p - 2.0) * r.I1_rate + 2.0 * r.I2_rate;
  r.R_remainder = remainder_R(vi, m.ydot);
  r.I_rate_structured = -2.0 * (4.0 / p + 1.0) * in.e0 - (4.0 * l * k + 2.0 * l) * in.q0 +
                        (2.0 - 2.0 * l * l * k) * n2 - 2.0 * (m.ydot - l) * in.q0 +
                        (2.0 - 2.0 * l * l * k) * m.xi_sq + 2.0 * k * m.lam_xi_eta_sq + r.R_remainder;
  r.rho = rho(p, in.omega, l, in.e0, in.q0);
  r.h_lambda = h_lambda(p, in.omega, l, in.q0);
  r.h1_lambda = h1_lambda(p, in.omega, l);
  r.Rtilde = r.R_remainder + 2.0 * (1.0 - l * l * k) * m.xi_sq + 2.0 * k * m.lam_xi_eta_sq -
             2.0 * in.q0 * ((m.ydot - l) - (ql - qw) / n2 + (in.q0 - qw) / n2);
  r.crosscheck_gap = std::abs(r.I_rate - r.I_rate_structured);
  r.ledger_gap = std::abs(r.I_rate_structured - r.rho - r.h_lambda - r.Rtilde);
  return r;
}

void accumulate_itilde(std::vector<VirialRow>& rows) {
  if (rows.empty()) return;
  rows[0].Itilde = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    rows[i].Itilde = rows[i - 1].Itilde + 0.5 * (rows[i].t - rows[i - 1].t) * (rows[i].I_rate + rows[i - 1].I_rate);
}

}  // namespace gbq
