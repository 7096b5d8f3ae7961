#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <omp.h>

#include "gbq/kernels.hpp"

namespace serial = gbq::kernels::serial;
namespace parallel = gbq::kernels::parallel;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (double& x : v) x = nd(rng);
  return v;
}

}  // namespace

TEST_CASE("parallel reductions match the serial reference") {
  for (std::size_t n : {1u, 255u, 256u, 257u, 5000u, 100003u}) {
    const auto a = random_vector(n, 1);
    const auto b = random_vector(n, 2);
    CHECK(parallel::sum(a) == doctest::Approx(serial::sum(a)).epsilon(1e-12));
    CHECK(parallel::dot(a, b) == doctest::Approx(serial::dot(a, b)).epsilon(1e-12));
    CHECK(parallel::max_abs(a) == serial::max_abs(a));
    for (double q : {0.5, 2.0, 3.7})
      CHECK(parallel::abs_power_sum(a, q) == doctest::Approx(serial::abs_power_sum(a, q)).epsilon(1e-12));
  }
}

TEST_CASE("parallel reductions do not depend on the thread count") {
  const auto a = random_vector(70001, 3);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double s1 = parallel::sum(a);
  omp_set_num_threads(4);
  const double s4 = parallel::sum(a);
  omp_set_num_threads(saved);
  CHECK(s1 == s4);
}

TEST_CASE("pointwise nonlinearities agree exactly") {
  const auto u = random_vector(9000, 4);
  std::vector<double> a(u.size()), b(u.size());
  for (double p : {0.5, 1.0, 2.0, 3.0, 2.5}) {
    serial::power_nonlinearity(u, p, a);
    parallel::power_nonlinearity(u, p, b);
    CHECK(a == b);
    CHECK(a[7] == doctest::Approx(std::pow(std::abs(u[7]), p) * u[7]));
    serial::abs_power(u, p, a);
    parallel::abs_power(u, p, b);
    CHECK(a == b);
  }
}

TEST_CASE("NaN propagates through max_abs") {
  std::vector<double> v(10000, 1.0);
  v[4321] = std::nan("");
  CHECK(std::isnan(serial::max_abs(v)));
  CHECK(std::isnan(parallel::max_abs(v)));
}

TEST_CASE("circulant fill") {
  const std::vector<double> col{1, 2, 3, 4};
  std::vector<double> a(16), b(16);
  serial::fill_circulant(col, a.data());
  parallel::fill_circulant(col, b.data());
  CHECK(a == b);
  // out(i, j) = col[(i - j) mod n], column-major.
  CHECK(a[1 * 4 + 0] == 4);
  CHECK(a[0 * 4 + 1] == 2);
  CHECK(a[3 * 4 + 3] == 1);
}
