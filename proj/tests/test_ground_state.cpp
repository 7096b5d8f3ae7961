#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gbq/error.hpp"
#include "gbq/ground_state.hpp"

using namespace gbq;

namespace {

// Independent value of ||phi_0||^2 from int sech^{2a} = sqrt(pi) Gamma(a) / Gamma(a + 1/2).
double norm_sq_oracle(double p) {
  const double a = 2.0 / p;
  return std::pow((p + 2.0) / 2.0, 2.0 / p) * (2.0 / p) * std::sqrt(std::numbers::pi) * std::tgamma(a) /
         std::tgamma(a + 0.5);
}

Grid fitted_grid(double p, double lambda, double dx = 0.05) {
  const double L = std::ceil(required_half_length(p, lambda, 1e-14)) + 1.0;
  std::size_t N = static_cast<std::size_t>(std::ceil(2.0 * L / dx));
  N = (N + 15) / 16 * 16;
  return make_grid(L, N);
}

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

TEST_CASE("profile peak values") {
  const Grid g = make_grid(40, 1024);
  CHECK(soliton_profile({2.0, 0.0}, g).profile[g.center_index()] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(soliton_profile({1.0, 0.0}, g).profile[g.center_index()] == doctest::Approx(1.5).epsilon(1e-15));
  const Grid g2 = make_grid(50, 1024);
  CHECK(soliton_profile({2.0, 1.0 / std::sqrt(2.0)}, g2).profile[g2.center_index()] ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("p = 2, lambda = 0 matches sqrt(2) sech") {
  const Grid g = make_grid(40, 1024);
  const SolitonFamily fam = soliton_profile({2.0, 0.0}, g);
  const auto x = g.nodes();
  for (std::size_t i = 0; i < g.size(); ++i) {
    REQUIRE(fam.profile[i] == doctest::Approx(std::sqrt(2.0) * sech(x[i])).epsilon(1e-14));
    REQUIRE(fam.x_derivative[i] ==
            doctest::Approx(-std::sqrt(2.0) * sech(x[i]) * std::tanh(x[i])).epsilon(1e-13).scale(1e-16));
  }
}

TEST_CASE("elliptic residual is small across exponents and speeds") {
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const double wc = std::sqrt(p / 4.0);
    for (double lambda : {0.0, 0.3, -0.3, wc, -wc}) {
      const SolitonFamily fam = soliton_profile({p, lambda}, fitted_grid(p, lambda));
      CAPTURE(p);
      CAPTURE(lambda);
      CHECK(fam.elliptic_residual < 1e-9);
    }
  }
}

TEST_CASE("analytic second derivative matches spectral one") {
  const Grid g = fitted_grid(3.0, 0.5);
  const SolitonFamily fam = soliton_profile({3.0, 0.5}, g);
  const Field s = spectral_derivative(fam.profile, 2);
  CHECK(max_abs(s - fam.xx_derivative) < 1e-9);
}

TEST_CASE("rescaling consistency on a dilated grid") {
  const double p = 2.5, lambda = 0.6;
  const double c = 1.0 - lambda * lambda;
  const Grid g = fitted_grid(p, lambda);
  const Grid g0 = make_grid(std::sqrt(c) * g.half_length(), g.size());
  const SolitonFamily a = soliton_profile({p, lambda}, g);
  const SolitonFamily b = soliton_profile({p, 0.0}, g0);
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(std::abs(a.profile[i] - std::pow(c, 1.0 / p) * b.profile[i]) < 1e-10);
}

TEST_CASE("lambda derivative matches a centered difference") {
  for (double p : {1.0, 2.0, 3.0}) {
    const double lambda = 0.45, h = 1e-5;
    const Grid g = fitted_grid(p, lambda + h);
    const SolitonFamily fam = soliton_profile({p, lambda}, g);
    const SolitonFamily fp = soliton_profile({p, lambda + h}, g);
    const SolitonFamily fm = soliton_profile({p, lambda - h}, g);
    const Field fd = (1.0 / (2.0 * h)) * (fp.profile - fm.profile);
    CHECK(max_abs(fd - fam.lambda_derivative) < 1e-7);
  }
}

TEST_CASE("family fields are consistent") {
  const double p = 2.0, w = 1.0 / std::sqrt(2.0);
  const Grid g = make_grid(40, 1024);
  const SolitonFamily fam = soliton_profile({p, w}, g);
  CHECK(max_abs(fam.pair.second + w * fam.pair.first) == 0.0);
  CHECK(max_abs(fam.psi.second) == 0.0);
  REQUIRE(fam.negdir.has_value());
  // Profile is even and positive.
  const std::size_t c = g.center_index();
  for (std::size_t j = 1; j < c; ++j) REQUIRE(fam.profile[c + j] == fam.profile[c - j]);
  for (double v : fam.profile.values) REQUIRE(v > 0.0);
  // <phi', gamma> = -||phi||^2 by parts.
  CHECK(inner(fam.x_derivative, fam.gamma) == doctest::Approx(-fam.norm_sq).epsilon(1e-9));
  CHECK(inner(fam.profile, fam.profile) == doctest::Approx(fam.norm_sq).epsilon(1e-12));
  CHECK(!soliton_profile({p, 0.0}, g).negdir.has_value());
}

TEST_CASE("ground norm against the Gamma-function oracle") {
  for (double p : {0.5, 1.0, 1.5, 2.0, 3.0, 3.5, 5.0}) {
    CAPTURE(p);
    CHECK(ground_norm_sq(p) == doctest::Approx(norm_sq_oracle(p)).epsilon(1e-13));
  }
  CHECK(ground_norm_sq(2.0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("momentum curve") {
  CHECK(momentum_curve(2.0, 0.0).q == 0.0);
  const double w = 1.0 / std::sqrt(2.0);
  CHECK(momentum_curve(2.0, w).q == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(std::abs(momentum_curve(2.0, w).dq_dlambda) < 1e-13);
  CHECK_THROWS_AS(momentum_curve(2.0, 1.0), PreconditionError);
  // Derivative against a centered difference of the closed form.
  for (double p : {0.5, 1.0, 3.0}) {
    const double l = 0.37, h = 1e-6;
    const double fd = (momentum_curve(p, l + h).q - momentum_curve(p, l - h).q) / (2 * h);
    CHECK(momentum_curve(p, l).dq_dlambda == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("momentum curve agrees with quadrature of u v") {
  for (double p : {1.0, 2.0, 3.0}) {
    for (double lambda : {0.2, std::sqrt(p / 4.0), -0.6}) {
      const Grid g = fitted_grid(p, lambda);
      const SolitonFamily fam = soliton_profile({p, lambda}, g);
      CHECK(inner(fam.pair.first, fam.pair.second) == doctest::Approx(momentum_curve(p, lambda).q).epsilon(1e-10));
    }
  }
}

TEST_CASE("critical frequency root") {
  CHECK(std::abs(critical_frequency_root(1.0) - 0.5) < 1e-12);
  CHECK(std::abs(critical_frequency_root(2.0) - std::sqrt(0.5)) < 1e-12);
  for (double p : {0.5, 1.0, 2.0, 3.0, 3.5}) {
    const double r = critical_frequency_root(p);
    CHECK(std::abs(r * r - p / 4.0) < 1e-12);
  }
  CHECK_THROWS_AS(critical_frequency_root(4.0), PreconditionError);
  CHECK_THROWS_AS(critical_frequency_root(5.0), PreconditionError);
}

TEST_CASE("preconditions") {
  const Grid g = make_grid(40, 1024);
  CHECK_THROWS_AS(soliton_profile({2.0, 1.0}, g), PreconditionError);
  CHECK_THROWS_AS(soliton_profile({0.0, 0.1}, g), PreconditionError);
  CHECK_THROWS_AS(soliton_profile({2.0, 0.999}, g), DomainTooSmall);
  CHECK_THROWS_AS(petviashvili_oracle({2.0, 0.999}, g, 1e-12), DomainTooSmall);
}

TEST_CASE("Petviashvili oracle reproduces the closed form") {
  const Grid g = make_grid(40, 1024);
  const Field a = petviashvili_oracle({2.0, 0.0}, g, 1e-12);
  const auto x = g.nodes();
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(a[i] - std::sqrt(2.0) * sech(x[i])));
  CHECK(m < 1e-10);

  const Grid g3 = fitted_grid(3.0, 0.5);
  const Field b = petviashvili_oracle({3.0, 0.5}, g3, 1e-12);
  CHECK(elliptic_residual(b, 3.0, 0.5) < 1e-10);
  CHECK(max_abs(b - soliton_profile({3.0, 0.5}, g3).profile) < 1e-10);
}
