#include "gbq/modulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "gbq/error.hpp"

namespace gbq {

namespace {

struct Frame {
  SolitonFamily fam;
  Field xi;   // u(. + y) - phi
  Field uxs;  // u_x(. + y)
  double F1;
  double F2;
};

Frame frame_at(const Field& u, const Field& ux, double p, double lambda, double y, double decay_tol) {
  Frame f{soliton_profile({p, lambda}, u.grid, decay_tol), translate(u, y), translate(ux, y), 0.0, 0.0};
  f.xi -= f.fam.profile;
  f.F1 = inner(f.xi, f.fam.gamma);
  f.F2 = inner(f.xi, f.fam.profile);
  return f;
}

Mat2 jacobian_of(const Frame& f) {
  const SolitonFamily& s = f.fam;
  return {{{inner(f.xi, s.gamma_lambda_derivative) - inner(s.lambda_derivative, s.gamma), inner(f.uxs, s.gamma)},
           {inner(f.xi, s.lambda_derivative) - inner(s.lambda_derivative, s.profile), inner(f.uxs, s.profile)}}};
}

// C(y) = <u(. + y), Phi>_{H1 x L2} from the cross spectrum c_j, and its first
// two derivatives in y. Nyquist enters the value only.
struct Correlation {
  std::vector<cplx> c;
  std::vector<double> k;
  double scale;

  std::array<double, 3> eval(double y) const {
    std::array<double, 3> out{c[0].real(), 0.0, 0.0};
    const std::size_t M = c.size();
    for (std::size_t j = 1; j + 1 < M; ++j) {
      const cplx z = c[j] * std::polar(1.0, k[j] * y);
      out[0] += 2.0 * z.real();
      out[1] += -2.0 * k[j] * z.imag();
      out[2] += -2.0 * k[j] * k[j] * z.real();
    }
    out[0] += c[M - 1].real() * std::cos(k[M - 1] * y);
    for (double& v : out) v *= scale;
    return out;
  }
};

}  // namespace

OrthogonalityResiduals orthogonality_residuals(const FieldPair& state, double lambda, double y, double p) {
  const SolitonFamily s = soliton_profile({p, lambda}, state.grid());
  Field xi = translate(state.first, y);
  xi -= s.profile;
  return {inner(xi, s.gamma), inner(xi, s.profile)};
}

Mat2 modulation_jacobian(const FieldPair& state, double lambda, double y, double p) {
  const Field& u = state.first;
  return jacobian_of(frame_at(u, spectral_derivative(u, 1), p, lambda, y, kDefaultDecayTol));
}

TubeDistance tube_distance(const FieldPair& state, const SolitonFamily& background) {
  const Grid& g = state.grid();
  const std::size_t M = g.spectrum_size();
  const auto k = g.wavenumbers();
  std::vector<cplx> uh(M), vh(M), ph(M), qh(M);
  g.forward(state.first.values, uh);
  g.forward(state.second.values, vh);
  g.forward(background.pair.first.values, ph);
  g.forward(background.pair.second.values, qh);

  Correlation corr{std::vector<cplx>(M), std::vector<double>(k.begin(), k.end()),
                   g.dx() / static_cast<double>(g.size())};
  for (std::size_t j = 0; j < M; ++j)
    corr.c[j] = (1.0 + k[j] * k[j]) * uh[j] * std::conj(ph[j]) + vh[j] * std::conj(qh[j]);

  // Coarse search over grid shifts, then Newton on C'(y) = 0.
  std::vector<double> on_grid(g.size());
  g.inverse(corr.c, on_grid);
  std::size_t best = 0;
  for (std::size_t m = 1; m < on_grid.size(); ++m)
    if (on_grid[m] > on_grid[best]) best = m;
  double y = static_cast<double>(best) * g.dx();
  if (best >= g.size() / 2) y -= 2.0 * g.half_length();
  for (int it = 0; it < 20; ++it) {
    const auto d = corr.eval(y);
    if (!(d[2] < 0.0)) break;
    const double step = -d[1] / d[2];
    y += std::clamp(step, -g.dx(), g.dx());
    if (std::abs(step) < 1e-13) break;
  }
  const FieldPair diff = translate(state, y) - background.pair;
  return {norm_h1l2(diff), y};
}

ModulationGuess cold_start_guess(const FieldPair& state, double p, double omega) {
  const SolitonFamily s = soliton_profile({p, omega}, state.grid());
  return {omega, tube_distance(state, s).y};
}

ModulationState decompose(const FieldPair& state, double p, double omega, const ModulationGuess& guess,
                          const ModulationOptions& opts) {
  const Field& u = state.first;
  const Field ux = spectral_derivative(u, 1);
  double lambda = guess.lambda, y = guess.y;

  const auto frame = [&](double l, double yy) {
    if (!(std::abs(l) < 1.0)) throw ConvergenceError("modulation speed left (-1, 1)");
    try {
      return frame_at(u, ux, p, l, yy, opts.decay_tol);
    } catch (const DomainTooSmall& e) {
      throw ConvergenceError(std::string("modulation lost: ") + e.what());
    }
  };

  Frame f = frame(lambda, y);
  for (int it = 0; it <= opts.max_iter; ++it) {
    const double scale = f.fam.norm_sq;
    if (std::abs(f.F1) < opts.tol * scale && std::abs(f.F2) < opts.tol * scale) {
      ModulationState out;
      out.lambda = lambda;
      out.y = y;
      out.F1 = f.F1;
      out.F2 = f.F2;
      out.eta = translate(state, y) - f.fam.pair;
      out.eta_norm = norm_h1l2(out.eta);
      out.valid = out.eta_norm + std::abs(lambda - omega) <= opts.epsilon_valid;
      out.iterations = it;
      return out;
    }
    if (it == opts.max_iter) break;
    const Mat2 J = jacobian_of(f);
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (!(std::abs(det) > 1e-14 * scale * scale)) throw ConvergenceError("singular modulation Jacobian");
    const double dl = -(J[1][1] * f.F1 - J[0][1] * f.F2) / det;
    const double dy = -(-J[1][0] * f.F1 + J[0][0] * f.F2) / det;
    // Backtrack on the residual size so a poor guess cannot run away.
    const double r0 = std::hypot(f.F1, f.F2);
    double t = 1.0;
    for (;; t *= 0.5) {
      if (t < 1e-3) throw ConvergenceError("modulation Newton step failed to reduce the residual");
      if (!(std::abs(lambda + t * dl) < 1.0)) continue;
      Frame trial = frame(lambda + t * dl, y + t * dy);
      if (std::hypot(trial.F1, trial.F2) < r0 || r0 < 1e-13 * scale) {
        f = std::move(trial);
        break;
      }
    }
    lambda += t * dl;
    y += t * dy;
  }
  std::ostringstream os;
  os << "modulation Newton did not converge in " << opts.max_iter << " iterations (F1 = " << f.F1
     << ", F2 = " << f.F2 << ")";
  throw ConvergenceError(os.str());
}

std::vector<double> series_derivative(std::span<const double> t, std::span<const double> f) {
  const std::size_t n = t.size();
  if (n < 3 || f.size() != n) throw PreconditionError("series derivative needs >= 3 matching samples");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] + h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  {
    const double h1 = t[1] - t[0], h2 = t[2] - t[1];
    d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] - h1 / (h2 * (h1 + h2)) * f[2];
  }
  {
    const double h1 = t[n - 2] - t[n - 3], h2 = t[n - 1] - t[n - 2];
    d[n - 1] = h2 / (h1 * (h1 + h2)) * f[n - 3] - (h1 + h2) / (h1 * h2) * f[n - 2] +
               (2 * h2 + h1) / (h2 * (h1 + h2)) * f[n - 1];
  }
  return d;
}

std::vector<RateSample> parameter_rates(std::span<const double> t, std::span<const double> lambda,
                                        std::span<const double> y, double q0, double p, double omega) {
  if (lambda.size() != t.size() || y.size() != t.size())
    throw PreconditionError("parameter_rates: series lengths differ");
  const std::vector<double> yd = series_derivative(t, y);
  const std::vector<double> ld = series_derivative(t, lambda);
  const double qw = momentum_curve(p, omega).q;
  std::vector<RateSample> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double n2 = profile_norm_sq(p, lambda[i]);
    const double ql = momentum_curve(p, lambda[i]).q;
    RateSample& r = out[i];
    r.t = t[i];
    r.ydot = yd[i];
    r.lambdadot = ld[i];
    r.ydot_minus_lambda = yd[i] - lambda[i];
    r.prediction = (ql - qw) / n2 - (q0 - qw) / n2;
    r.residual = r.ydot_minus_lambda - r.prediction;
  }
  return out;
}

}  // namespace gbq
