#include "gbq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <omp.h>

namespace gbq::kernels {

namespace {

// Below this size the OpenMP fork/join costs more than the loop.
constexpr std::size_t kParallelThreshold = 4096;

inline double pow_abs(double x, double q) {
  const double a = std::abs(x);
  if (q == 1.0) return a;
  if (q == 2.0) return a * a;
  if (q == 3.0) return a * a * a;
  if (q == 4.0) return (a * a) * (a * a);
  return std::pow(a, q);
}

inline double power_term(double x, double p) {
  if (p == 2.0) return x * x * x;
  if (p == 4.0) return x * x * x * x * x;
  return pow_abs(x, p) * x;
}

template <class BlockFn>
double blocked_reduce(std::size_t n, BlockFn&& block_sum) {
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    partial[static_cast<std::size_t>(b)] = block_sum(lo, hi);
  }
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

}  // namespace

namespace serial {

double sum(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) {
    if (std::isnan(v)) return v;
    m = std::max(m, std::abs(v));
  }
  return m;
}

void power_nonlinearity(std::span<const double> u, double p, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = power_term(u[i], p);
}

void abs_power(std::span<const double> u, double q, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = pow_abs(u[i], q);
}

double abs_power_sum(std::span<const double> u, double q) {
  double s = 0.0;
  for (double v : u) s += pow_abs(v, q);
  return s;
}

void fill_circulant(std::span<const double> column, double* out) {
  const std::size_t n = column.size();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out[j * n + i] = column[(i + n - j) % n];
}

}  // namespace serial

namespace parallel {

double sum(std::span<const double> a) {
  return blocked_reduce(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i];
    return s;
  });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return blocked_reduce(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double max_abs(std::span<const double> a) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
  double m = 0.0;
  bool saw_nan = false;
#pragma omp parallel for reduction(max : m) reduction(|| : saw_nan) if (a.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double v = a[static_cast<std::size_t>(i)];
    saw_nan = saw_nan || std::isnan(v);
    m = std::max(m, std::abs(v));
  }
  return saw_nan ? std::nan("") : m;
}

void power_nonlinearity(std::span<const double> u, double p, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) if (u.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = power_term(u[static_cast<std::size_t>(i)], p);
}

void abs_power(std::span<const double> u, double q, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) if (u.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = pow_abs(u[static_cast<std::size_t>(i)], q);
}

double abs_power_sum(std::span<const double> u, double q) {
  return blocked_reduce(u.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += pow_abs(u[i], q);
    return s;
  });
}

void fill_circulant(std::span<const double> column, double* out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(column.size());
#pragma omp parallel for schedule(static) if (column.size() * column.size() >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out[j * n + i] = column[static_cast<std::size_t>((i + n - j) % n)];
}

}  // namespace parallel

}  // namespace gbq::kernels
