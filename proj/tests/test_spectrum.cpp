#include <doctest.h>

#include <cmath>

#include "gbq/error.hpp"
#include "gbq/functionals.hpp"
#include "gbq/spectrum.hpp"

using namespace gbq;

namespace {

Grid fitted_grid(double p, double lambda, double dx = 0.1, double tol = 1e-12) {
  const double L = std::ceil(required_half_length(p, lambda, tol)) + 1.0;
  std::size_t N = static_cast<std::size_t>(std::ceil(2.0 * L / dx));
  N = (N + 15) / 16 * 16;
  return make_grid(L, N);
}

// Poschl-Teller ground level of -d_xx + c - (p+1) phi^p.
double scalar_oracle(double p, double w) { return (1.0 - w * w) * (1.0 - (p + 2.0) * (p + 2.0) / 4.0); }

}  // namespace

TEST_CASE("mu0 closed form") {
  CHECK(mu0_closed_form(-1.5, 1.0 / std::sqrt(2.0)) == doctest::Approx(-std::sqrt(6.0) / 2.0).epsilon(1e-14));
  CHECK(mu0_closed_form(-0.9375, 0.5) == doctest::Approx(-0.82452).epsilon(1e-5));
  for (double w : {0.0, 0.4, 0.9}) {
    const double m = mu0_closed_form(-1e-9, w);
    CHECK(m < 0.0);
    CHECK(m > -1e-8);
  }
  CHECK_THROWS_AS(mu0_closed_form(0.5, 0.3), PreconditionError);
}

TEST_CASE("scalar operator: Poschl-Teller level and translation mode") {
  const double w2 = 1.0 / std::sqrt(2.0);
  const Grid g = make_grid(40, 512);
  CHECK(scalar_negative_eigenvalue(2.0, w2, g) == doctest::Approx(-1.5).epsilon(1e-4));
  const Grid g1 = fitted_grid(1.0, 0.5);
  CHECK(scalar_negative_eigenvalue(1.0, 0.5, g1) == doctest::Approx(-0.9375).epsilon(1e-4));

  const EigenPairs sp = scalar_spectrum(2.0, w2, g, 2);
  CHECK(std::abs(sp.values(1)) < 1e-5);
  const SolitonFamily fam = soliton_profile({2.0, w2}, g);
  Eigen::VectorXd t(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) t(static_cast<Eigen::Index>(i)) = fam.x_derivative[i];
  CHECK(std::abs(t.dot(sp.vectors.col(1))) / t.norm() > 0.9999);
}

TEST_CASE("Hessian spectrum at the critical p = 2 soliton") {
  const double w = 1.0 / std::sqrt(2.0);
  const SpectralReport r = hessian_spectrum(2.0, w, make_grid(40, 512), 6);
  CHECK(r.negative_count == 1);
  CHECK(r.lambda_minus1 == doctest::Approx(-1.5).epsilon(1e-6));
  CHECK(std::abs(r.mu0_numeric - (-std::sqrt(6.0) / 2.0)) < 1e-3);
  CHECK(std::abs(r.mu0_numeric - r.mu0_formula) < 1e-6);
  CHECK(std::abs(r.kernel_eig) < 1e-5);
  CHECK(r.kernel_correlation > 0.9999);
  CHECK(std::isnan(r.coercivity_min));
  // Everything above the kernel sits near or above the continuum edge.
  CHECK(r.eigenvalues[2] > 0.0);
  CHECK_THROWS_AS(hessian_spectrum(2.0, w, make_grid(40, 512), 3), PreconditionError);
}

TEST_CASE("exactly one negative eigenvalue across the parameter sweep") {
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const double wc = std::sqrt(p / 4.0);
    for (double w : {0.0, 0.3, -0.3, wc, -wc, 0.9, -0.9}) {
      const Grid g = fitted_grid(p, w, 0.25, 1e-12);
      if (g.size() > 1024) continue;
      const SpectralReport r = hessian_spectrum(p, w, g, 4);
      CAPTURE(p);
      CAPTURE(w);
      CHECK(r.negative_count == 1);
      CHECK(r.lambda_minus1 == doctest::Approx(scalar_oracle(p, w)).epsilon(1e-3));
      CHECK(r.eigenvalues[3] > 0.0);
    }
  }
}

TEST_CASE("mu0 converges as the grid is refined") {
  const double w = 1.0 / std::sqrt(2.0);
  const double exact = -std::sqrt(6.0) / 2.0;
  const double e1 = std::abs(hessian_spectrum(2.0, w, make_grid(40, 128), 4).mu0_numeric - exact);
  const double e2 = std::abs(hessian_spectrum(2.0, w, make_grid(40, 256), 4).mu0_numeric - exact);
  CHECK(e2 < e1 / 4.0 + 1e-10);
}

TEST_CASE("negative direction depth") {
  const double p = 2.0, w = 1.0 / std::sqrt(2.0);
  const Grid g = make_grid(40, 1024);
  const SolitonFamily fam = soliton_profile({p, w}, g);
  const double lhs = -hessian_form(*fam.negdir, *fam.negdir, w, p, fam);
  const double rhs = fam.norm_sq / (4.0 * w * w);
  CHECK(std::abs(lhs - rhs) / rhs < 1e-5);
}

TEST_CASE("constrained coercivity") {
  const double w = 1.0 / std::sqrt(2.0);
  const Grid g = make_grid(40, 256);
  const double both = constrained_coercivity(2.0, w, g, ConstraintSet::GammaAndPsi);
  const double gamma_only = constrained_coercivity(2.0, w, g, ConstraintSet::GammaOnly);
  CHECK(both > 0.01);
  CHECK(gamma_only < 0.0);
}

TEST_CASE("eigensolver wrapper") {
  Eigen::MatrixXd a(3, 3);
  a << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  const EigenPairs e = symmetric_smallest(a, 2, true);
  CHECK(e.values(0) == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(e.values(1) == doctest::Approx(2.0));
  CHECK(e.vectors.cols() == 2);
}
