#pragma once

// Localized virial rates I1', I2', I' = (4/p - 2) I1' + 2 I2', the remainder
// R(u), and the split I' = rho(u0) + h(lambda) + Rtilde(u).

#include <vector>

#include "gbq/functionals.hpp"
#include "gbq/grid.hpp"

namespace gbq {

/// Odd cutoff: x on |x| <= R, a degree-7 C^3 bridge R P((|x| - R) / R) on
/// R < |x| < 2R, zero beyond. P(s) = (1 - s)^4 (1 + 5s + 14s^2 + 30s^3).
double cutoff_value(double R, double x);
double cutoff_slope(double R, double x);
double cutoff_third(double R, double x);

struct CutoffProfile {
  double R = 0.0;
  Field values;  // at x (y = 0)
  Field first;
  Field third;
  double min_slope = 0.0;    // the bridge dips below 0
  double third_bound = 0.0;  // max |phi'''| R^2
};

/// Throws PreconditionError unless 0 < 2R < L.
CutoffProfile cutoff_profile(double R, const Grid& grid);

/// Samples phi'(x - y), phi'''(x - y) with x - y wrapped into the box.
struct ShiftedCutoff {
  Field first;
  Field third;
};
ShiftedCutoff shift_cutoff(const CutoffProfile& c, double y);

/// ||v||^2 - ||u||^2 - ||u_x||^2 + ||u||_{p+2}^{p+2}
double I1_rate(const FieldPair& state, double p);

/// -ydot int phi'(x-y) uv - 1/2 int phi'(x-y)(3u_x^2 + v^2 + u^2 - 2(p+1)/(p+2)|u|^{p+2})
/// + 1/2 int phi'''(x-y) u^2
double I2_rate(const FieldPair& state, double p, double y, double ydot, const CutoffProfile& cutoff);

/// Pieces of I2' and R(u) that do not depend on ydot. With
/// d = 3u_x^2 + u^2 + v^2 - 2(p+1)/(p+2)|u|^{p+2}:
struct VirialIntegrals {
  double I1_rate = 0.0;
  double I2 = 0.0;           // int phi(x-y) uv
  double uv_total = 0.0;     // int uv
  double uv_local = 0.0;     // int phi'(x-y) uv
  double d_total = 0.0;      // int d
  double d_local = 0.0;      // int phi'(x-y) d
  double third_local = 0.0;  // int phi'''(x-y) u^2
};
VirialIntegrals virial_integrals(const FieldPair& state, double p, double y, const CutoffProfile& cutoff);

double I2_rate(const VirialIntegrals& vi, double ydot);
double remainder_R(const VirialIntegrals& vi, double ydot);

/// Closed forms on the soliton family.
double soliton_energy(double p, double lambda);
double action_gap(double p, double omega, double lambda);  // S_l(Phi_l) - S_l(Phi_w)

double rho(double p, double omega, double lambda, double e0, double q0);
double rho_leading(double p, double omega, double a);
double h_lambda(double p, double omega, double lambda, double q0);
double h1_lambda(double p, double omega, double lambda);

struct VirialInputs {
  double p;
  double omega;
  double e0;  // E(u0)
  double q0;  // Q(u0)
};

/// Modulation quantities the structured form needs.
struct ModulationScalars {
  double lambda;
  double ydot;
  double xi_sq;          // ||xi||^2
  double lam_xi_eta_sq;  // ||lambda xi + eta||^2
};

struct VirialRow {
  double t = 0.0;
  double I2 = 0.0;
  double I1_rate = 0.0;
  double I2_rate = 0.0;
  double I_rate = 0.0;             // (4/p - 2) I1' + 2 I2'
  double I_rate_structured = 0.0;  // expansion around Phi_lambda
  double R_remainder = 0.0;
  double rho = 0.0;
  double h_lambda = 0.0;
  double h1_lambda = 0.0;
  double Rtilde = 0.0;
  double Itilde = 0.0;          // filled by accumulate_itilde
  double crosscheck_gap = 0.0;  // |I_rate - I_rate_structured|
  double ledger_gap = 0.0;      // |I_rate_structured - rho - h - Rtilde|
};

VirialRow virial_row(double t, const VirialIntegrals& vi, const ModulationScalars& m, const VirialInputs& in);

/// Itilde(t) = int_0^t I'(s) ds by the trapezoid rule over the rows.
void accumulate_itilde(std::vector<VirialRow>& rows);

}  // namespace gbq
