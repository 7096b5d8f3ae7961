#include <doctest.h>

#include <cmath>
#include <random>

#include "gbq/error.hpp"
#include "gbq/functionals.hpp"

using namespace gbq;

namespace {

Grid fitted_grid(double p, double lambda, double dx = 0.05) {
  const double L = std::ceil(required_half_length(p, lambda, 1e-14)) + 1.0;
  std::size_t N = static_cast<std::size_t>(std::ceil(2.0 * L / dx));
  N = (N + 15) / 16 * 16;
  return make_grid(L, N);
}

// Smooth localized random pair.
FieldPair random_pair(const Grid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  double c[8];
  for (double& v : c) v = ud(rng);
  const Field u = sample(g, [&](double x) {
    return std::exp(-0.1 * x * x) * (c[0] + c[1] * x + c[2] * std::sin(c[3] * x));
  });
  const Field v = sample(g, [&](double x) {
    return std::exp(-0.2 * (x - c[4]) * (x - c[4])) * (c[5] + c[6] * std::cos(2 * x + c[7]));
  });
  return FieldPair(u, v);
}

}  // namespace

TEST_CASE("conserved quantities of the critical p = 2 soliton") {
  const double w = 1.0 / std::sqrt(2.0);
  const Grid g = make_grid(40, 1024);
  const SolitonFamily fam = soliton_profile({2.0, w}, g);
  // phi = sech(x / sqrt2): int phi^2 = 2 sqrt2, int phi'^2 = sqrt2 / 3, int phi^4 = 4 sqrt2 / 3.
  const double s2 = std::sqrt(2.0);
  const double e_oracle = 0.5 * (s2 / 3.0 + (1.0 + w * w) * 2.0 * s2) - 0.25 * 4.0 * s2 / 3.0;
  const ConservedValues cv = conserved_quantities(fam.pair, w, 2.0);
  CHECK(cv.energy == doctest::Approx(e_oracle).epsilon(1e-12));
  CHECK(cv.energy == doctest::Approx(4.0 * s2 / 3.0).epsilon(1e-12));
  CHECK(cv.momentum == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(cv.action == cv.energy + w * cv.momentum);

  const ConservedValues zero = conserved_quantities(FieldPair(g), w, 2.0);
  CHECK(zero.energy == 0.0);
  CHECK(zero.momentum == 0.0);
  CHECK(zero.action == 0.0);
  CHECK(momentum(fam.psi) == 0.0);
}

TEST_CASE("the soliton is a critical point of the action") {
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    for (double w : {0.0, 0.3, std::sqrt(p / 4.0), -0.5}) {
      const Grid g = fitted_grid(p, w);
      const SolitonFamily fam = soliton_profile({p, w}, g);
      const FieldPair grad = action_gradient(fam.pair, w, p);
      CAPTURE(p);
      CAPTURE(w);
      CHECK(std::max(max_abs(grad.first), max_abs(grad.second)) < 1e-8);
    }
  }
  const Grid g = make_grid(20, 128);
  const FieldPair z = action_gradient(FieldPair(g), 0.4, 2.0);
  CHECK(max_abs(z.first) == 0.0);
  CHECK(max_abs(z.second) == 0.0);
}

TEST_CASE("Hessian kernel and negative direction") {
  const double p = 2.0, w = 1.0 / std::sqrt(2.0);
  const Grid g = make_grid(40, 1024);
  const SolitonFamily fam = soliton_profile({p, w}, g);

  const FieldPair dx_pair(fam.x_derivative, -w * fam.x_derivative);
  const FieldPair k = hessian_apply(dx_pair, w, p, fam);
  CHECK(std::max(max_abs(k.first), max_abs(k.second)) < 1e-8);

  const FieldPair h = hessian_apply(*fam.negdir, w, p, fam);
  CHECK(max_abs(h.first - fam.psi.first) < 1e-8);
  CHECK(max_abs(h.second) < 1e-8);

  CHECK(hessian_form(fam.pair, fam.pair, w, p, fam) ==
        doctest::Approx(-8.0 * std::sqrt(2.0) / 3.0).epsilon(1e-10));

  CHECK_THROWS_AS(hessian_apply(dx_pair, 0.5, p, fam), PreconditionError);
}

TEST_CASE("quadratic form along the negative direction") {
  const double p = 1.0, w = 0.5;
  const Grid g = fitted_grid(p, w);
  const SolitonFamily fam = soliton_profile({p, w}, g);
  const double oracle = -6.0 * std::pow(0.75, 1.5) / (4.0 * w * w);
  CHECK(oracle == doctest::Approx(-3.89711).epsilon(1e-5));
  CHECK(hessian_form(*fam.negdir, *fam.negdir, w, p, fam) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("<S'' Phi, Phi> = -p ||phi||_{p+2}^{p+2}") {
  for (double p : {0.5, 1.5, 3.0}) {
    const double w = 0.4;
    const Grid g = fitted_grid(p, w);
    const SolitonFamily fam = soliton_profile({p, w}, g);
    double s = 0.0;
    for (double v : fam.profile.values) s += std::pow(v, p + 2.0);
    s *= g.dx();
    CHECK(hessian_form(fam.pair, fam.pair, w, p, fam) == doctest::Approx(-p * s).epsilon(1e-9));
  }
}

TEST_CASE("S'' dPhi/dw = -Q'(Phi)") {
  CHECK(hessian_omega_derivative_identity(1.0 / std::sqrt(2.0), 2.0, make_grid(40, 1024)) < 1e-7);
  CHECK(hessian_omega_derivative_identity(0.5, 1.0, fitted_grid(1.0, 0.5)) < 1e-7);
  CHECK(hessian_omega_derivative_identity(0.2, 3.0, fitted_grid(3.0, 0.2)) < 1e-7);
}

TEST_CASE("Hessian is symmetric") {
  const double p = 2.0, w = 0.6;
  const Grid g = make_grid(40, 512);
  const SolitonFamily fam = soliton_profile({p, w}, g);
  for (unsigned s = 0; s < 5; ++s) {
    const FieldPair a = random_pair(g, 2 * s), b = random_pair(g, 2 * s + 1);
    CHECK(hessian_form(a, b, w, p, fam) == doctest::Approx(hessian_form(b, a, w, p, fam)).epsilon(1e-10));
  }
}

TEST_CASE("gradient is the derivative of the action") {
  const double p = 2.0, w = 0.6;
  const Grid g = make_grid(40, 512);
  const FieldPair st = random_pair(g, 11);
  const FieldPair d = random_pair(g, 12);
  const double exact = inner(action_gradient(st, w, p), d);
  double errs[2];
  int idx = 0;
  for (double h : {1e-3, 1e-4}) {
    const double sp = conserved_quantities(st + h * d, w, p).action;
    const double sm = conserved_quantities(st - h * d, w, p).action;
    errs[idx++] = std::abs((sp - sm) / (2 * h) - exact);
  }
  CHECK(errs[0] < 1e-4);
  // Second order: a factor 10 in h gives ~100 in error (until roundoff).
  CHECK(errs[1] < std::max(errs[0] / 50.0, 1e-9));
}

TEST_CASE("Hessian is the derivative of the gradient") {
  for (double p : {2.0, 0.5}) {
    const double w = 0.6;
    const Grid g = make_grid(40, 512);
    const SolitonFamily fam = soliton_profile({p, w}, g);
    const FieldPair d = random_pair(g, 21);
    const FieldPair exact = hessian_apply(d, w, p, fam);
    double errs[2];
    int idx = 0;
    for (double h : {1e-3, 1e-4}) {
      const FieldPair fd =
          (1.0 / (2.0 * h)) * (action_gradient(fam.pair + h * d, w, p) - action_gradient(fam.pair - h * d, w, p));
      const FieldPair e = fd - exact;
      errs[idx++] = std::sqrt(inner(e, e));
    }
    CAPTURE(p);
    CHECK(errs[0] < 1e-3);
    if (p >= 1.0)
      CHECK(errs[1] < std::max(errs[0] / 50.0, 1e-9));
    else
      CHECK(errs[1] < errs[0] / 5.0);
  }
}
