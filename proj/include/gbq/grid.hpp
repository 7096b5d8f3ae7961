#pragma once

// Periodic box [-L, L) with N uniform nodes, real FFTs, spectral calculus,
// quadrature and the norms shared by every other module.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace gbq {

using cplx = std::complex<double>;

class Grid {
 public:
  Grid() = default;

  double half_length() const;
  std::size_t size() const;
  double dx() const;
  /// Index of the node at x = 0.
  std::size_t center_index() const { return size() / 2; }
  std::span<const double> nodes() const;
  /// Nonnegative half spectrum k_j = pi j / L, j = 0..N/2.
  std::span<const double> wavenumbers() const;
  std::size_t spectrum_size() const { return size() / 2 + 1; }

  /// Unnormalized r2c transform of N samples into N/2+1 coefficients.
  void forward(std::span<const double> in, std::span<cplx> out) const;
  /// Inverse of forward (includes the 1/N factor). `in` is left untouched.
  void inverse(std::span<const cplx> in, std::span<double> out) const;

  bool valid() const { return impl_ != nullptr; }
  bool same_as(const Grid& other) const;

 private:
  struct Impl;
  explicit Grid(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend Grid make_grid(double L, std::size_t N);
};

/// Throws PreconditionError unless N is even, N >= 16 and L > 0.
Grid make_grid(double L, std::size_t N);

struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  Field(const Grid& g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> view() const { return values; }
  std::span<double> view() { return values; }
  bool all_finite() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(Field a, double s);
/// Pointwise product.
Field hadamard(const Field& a, const Field& b);

struct FieldPair {
  Field first;
  Field second;

  FieldPair() = default;
  explicit FieldPair(const Grid& g) : first(g), second(g) {}
  FieldPair(Field u, Field v);

  const Grid& grid() const { return first.grid; }
  FieldPair& operator+=(const FieldPair& o);
  FieldPair& operator-=(const FieldPair& o);
  FieldPair& operator*=(double s);
};

FieldPair operator+(FieldPair a, const FieldPair& b);
FieldPair operator-(FieldPair a, const FieldPair& b);
FieldPair operator*(double s, FieldPair a);

/// Samples fn at the grid nodes.
Field sample(const Grid& grid, const std::function<double(double)>& fn);

/// Fourier multiplier (ik)^order, order in {1, 2, 3}. Odd orders drop the
/// Nyquist mode.
Field spectral_derivative(const Field& f, int order);

/// Multiplies every mode by a real even symbol s(k) (Nyquist included).
Field apply_symbol(const Field& f, const std::function<double(double)>& symbol);

/// dx * sum f_i
double quadrature_integrate(const Field& f);

/// g(x) = int_0^x f, exact for band-limited f: the mean of f contributes a
/// linear ramp, the rest is integrated spectrally. g = 0 at the center node.
Field odd_primitive(const Field& f);

/// Periodic part of the primitive: spectral integral of f - mean(f),
/// shifted to vanish at x = 0.
Field periodic_primitive(const Field& f);

/// g(x) = f(x + y) via Fourier phase shift.
Field translate(const Field& f, double y);
FieldPair translate(const FieldPair& f, double y);

/// Zeroes modes with |j| > N/3.
Field dealias(const Field& f);

double inner(const Field& a, const Field& b);
double norm_l2(const Field& f);
double norm_h1(const Field& f);
/// <a, b> in L2 x L2.
double inner(const FieldPair& a, const FieldPair& b);
/// <a, b> in H1 x L2.
double inner_h1l2(const FieldPair& a, const FieldPair& b);
double norm_h1l2(const FieldPair& f);
double max_abs(const Field& f);

/// Reduces x modulo 2L into [-L, L).
double wrap_to_box(double x, double L);

}  // namespace gbq
