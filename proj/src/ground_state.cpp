#include "gbq/ground_state.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "gbq/error.hpp"
#include "gbq/kernels.hpp"

namespace gbq {

namespace {

void check_params(double p, double lambda) {
  if (!(p > 0.0) || !std::isfinite(p)) throw PreconditionError("exponent p must be positive");
  if (!(std::abs(lambda) < 1.0)) throw PreconditionError("wave speed must satisfy |lambda| < 1");
}

struct Shape {
  double c;  // 1 - lambda^2
  double A;  // amplitude
  double b;  // sech argument scale
};

Shape shape(double p, double lambda) {
  const double c = 1.0 - lambda * lambda;
  return {c, std::pow(c * (p + 2.0) / 2.0, 1.0 / p), p * std::sqrt(c) / 2.0};
}

double sech(double z) {
  const double a = std::abs(z);
  if (a > 700.0) return 0.0;
  return 1.0 / std::cosh(a);
}

}  // namespace

double SolitonParams::omega_c() const { return std::sqrt(p / 4.0); }

double soliton_value(double p, double lambda, double x) {
  const Shape s = shape(p, lambda);
  return s.A * std::pow(sech(s.b * x), 2.0 / p);
}

double soliton_slope(double p, double lambda, double x) {
  const Shape s = shape(p, lambda);
  return -(2.0 * s.b / p) * std::tanh(s.b * x) * soliton_value(p, lambda, x);
}

double required_half_length(double p, double lambda, double tol) {
  check_params(p, lambda);
  const Shape s = shape(p, lambda);
  if (s.A <= tol) return 0.0;
  // A sech^{2/p}(bL) = tol, with sech z <= 2 e^{-z}.
  return (std::log(2.0) + 0.5 * p * std::log(s.A / tol)) / s.b;
}

double ground_norm_sq(double p) {
  static std::mutex m;
  static std::map<double, double> cache;
  {
    std::lock_guard lock(m);
    if (auto it = cache.find(p); it != cache.end()) return it->second;
  }
  // phi_0^2 = K sech^{4/p}(z) with z = p x / 2; the trapezoid rule converges
  // geometrically for this integrand, h = 0.02 is far past roundoff.
  const double q = 4.0 / p;
  const double Z = (40.0 + q * std::log(2.0)) / q + 1.0;
  const double h = 0.02;
  const long n = static_cast<long>(std::ceil(Z / h));
  double s = 0.0;
  for (long i = -n; i <= n; ++i) s += std::pow(sech(h * static_cast<double>(i)), q);
  const double K = std::pow((p + 2.0) / 2.0, 2.0 / p);
  const double value = K * (2.0 / p) * h * s;
  std::lock_guard lock(m);
  cache.emplace(p, value);
  return value;
}

double profile_norm_sq(double p, double lambda) {
  check_params(p, lambda);
  const double c = 1.0 - lambda * lambda;
  return std::pow(c, 2.0 / p - 0.5) * ground_norm_sq(p);
}

double profile_norm_sq_dlambda(double p, double lambda) {
  check_params(p, lambda);
  const double c = 1.0 - lambda * lambda;
  return (2.0 / p - 0.5) * std::pow(c, 2.0 / p - 1.5) * (-2.0 * lambda) * ground_norm_sq(p);
}

MomentumPoint momentum_curve(double p, double lambda) {
  check_params(p, lambda);
  const double c = 1.0 - lambda * lambda;
  const double n0 = ground_norm_sq(p);
  return {-lambda * std::pow(c, 2.0 / p - 0.5) * n0,
          -std::pow(c, 2.0 / p - 1.5) * (1.0 - 4.0 * lambda * lambda / p) * n0};
}

double critical_frequency_root(double p) {
  if (!(p > 0.0)) throw PreconditionError("exponent p must be positive");
  if (p >= 4.0) throw PreconditionError("dQ/dlambda has no root with |lambda| < 1 when p >= 4");
  // dQ/dlambda < 0 at lambda = 0 and > 0 just below lambda = 1.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (momentum_curve(p, mid).dq_dlambda < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double elliptic_residual(const Field& phi, double p, double lambda) {
  const double c = 1.0 - lambda * lambda;
  const Field phixx = spectral_derivative(phi, 2);
  Field nl(phi.grid);
  kernels::parallel::power_nonlinearity(phi.values, p, nl.values);
  double r = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i)
    r = std::max(r, std::abs(-phixx[i] + c * phi[i] - nl[i]));
  return r;
}

namespace {

void check_decay(double p, double lambda, const Grid& grid, double decay_tol) {
  const double tail = soliton_value(p, lambda, grid.half_length());
  if (tail > decay_tol) {
    std::ostringstream os;
    os << "profile p=" << p << " lambda=" << lambda << " is " << tail << " at x=L="
       << grid.half_length() << "; need L >= " << required_half_length(p, lambda, decay_tol);
    throw DomainTooSmall(os.str());
  }
}

}  // namespace

SolitonFamily soliton_profile(const SolitonParams& params, const Grid& grid, double decay_tol) {
  const double p = params.p, lambda = params.lambda;
  check_params(p, lambda);
  check_decay(p, lambda, grid, decay_tol);

  const Shape s = shape(p, lambda);
  const auto x = grid.nodes();
  const std::size_t N = grid.size();

  SolitonFamily fam;
  fam.params = params;
  fam.profile = Field(grid);
  fam.x_derivative = Field(grid);
  fam.xx_derivative = Field(grid);
  fam.lambda_derivative = Field(grid);
  const double k1 = 2.0 * s.b / p;
  for (std::size_t i = 0; i < N; ++i) {
    const double z = s.b * x[i];
    const double sh = sech(z), th = std::tanh(z);
    const double phi = s.A * std::pow(sh, 2.0 / p);
    const double phix = -k1 * th * phi;
    fam.profile[i] = phi;
    fam.x_derivative[i] = phix;
    fam.xx_derivative[i] = (-k1 * s.b * sh * sh + k1 * k1 * th * th) * phi;
    fam.lambda_derivative[i] = -2.0 * lambda / (p * s.c) * phi - lambda / s.c * x[i] * phix;
  }
  fam.gamma = odd_primitive(fam.profile);
  fam.gamma_lambda_derivative = odd_primitive(fam.lambda_derivative);
  fam.pair = FieldPair(fam.profile, -lambda * fam.profile);
  fam.psi = FieldPair(fam.profile, Field(grid));
  fam.gamma_pair = FieldPair(fam.gamma, Field(grid));
  if (lambda != 0.0) {
    const double w = 1.0 / (2.0 * lambda);
    fam.negdir = FieldPair(w * fam.lambda_derivative, (-lambda * w) * fam.lambda_derivative);
  }
  fam.norm_sq = profile_norm_sq(p, lambda);
  fam.elliptic_residual = elliptic_residual(fam.profile, p, lambda);
  return fam;
}

Field petviashvili_oracle(const SolitonParams& params, const Grid& grid, double tol, int max_iter,
                          double decay_tol) {
  const double p = params.p, lambda = params.lambda;
  check_params(p, lambda);
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  check_decay(p, lambda, grid, decay_tol);

  const double c = 1.0 - lambda * lambda;
  const double gamma = (p + 1.0) / p;
  const auto k = grid.wavenumbers();
  const std::size_t M = grid.spectrum_size();

  // Even start with roughly the right width and height.
  Field phi = sample(grid, [&](double x) { return 1.5 * std::exp(-0.5 * c * x * x); });
  Field nl(grid), next(grid);
  std::vector<cplx> ph(M), nh(M);
  for (int it = 0; it < max_iter; ++it) {
    kernels::parallel::power_nonlinearity(phi.values, p, nl.values);
    grid.forward(phi.values, ph);
    grid.forward(nl.values, nh);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      const double w = (j == 0 || j == M - 1) ? 1.0 : 2.0;
      num += w * (k[j] * k[j] + c) * std::norm(ph[j]);
      den += w * std::real(nh[j] * std::conj(ph[j]));
    }
    if (!(den > 0.0)) throw ConvergenceError("Petviashvili iteration collapsed to zero");
    const double Mstab = num / den;
    const double scale = std::pow(Mstab, gamma);
    for (std::size_t j = 0; j < M; ++j) nh[j] *= scale / (k[j] * k[j] + c);
    grid.inverse(nh, next.values);
    double diff = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) diff = std::max(diff, std::abs(next[i] - phi[i]));
    phi = next;
    if (diff < tol && std::abs(Mstab - 1.0) < tol) return phi;
  }
  throw ConvergenceError("Petviashvili iteration did not converge");
}

}  // namespace gbq
