#pragma once

// Data-parallel inner loops used by every module. Each kernel exists twice:
// `serial` is the plain reference loop kept for testing, `parallel` is the
// OpenMP version the library calls. Parallel reductions sum fixed-size blocks
// and combine the partials in block order, so results do not depend on the
// thread count.

#include <cstddef>
#include <span>

namespace gbq::kernels {

/// Elements per reduction block in the parallel kernels.
inline constexpr std::size_t kBlock = 256;

namespace serial {

double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);

/// out_i = |u_i|^p u_i
void power_nonlinearity(std::span<const double> u, double p, std::span<double> out);

/// out_i = |u_i|^q
void abs_power(std::span<const double> u, double q, std::span<double> out);

/// Sum of |u_i|^q.
double abs_power_sum(std::span<const double> u, double q);

/// Column-major n x n circulant matrix with out(i, j) = column[(i - j) mod n].
void fill_circulant(std::span<const double> column, double* out);

}  // namespace serial

namespace parallel {

double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
void power_nonlinearity(std::span<const double> u, double p, std::span<double> out);
void abs_power(std::span<const double> u, double q, std::span<double> out);
double abs_power_sum(std::span<const double> u, double q);
void fill_circulant(std::span<const double> column, double* out);

}  // namespace parallel

}  // namespace gbq::kernels
