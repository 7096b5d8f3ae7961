#include "gbq/grid.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "gbq/error.hpp"
#include "gbq/kernels.hpp"

namespace gbq {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!a.same_as(b)) throw PreconditionError("fields live on different grids");
}

}  // namespace

struct Grid::Impl {
  double L;
  std::size_t N;
  double dx;
  std::vector<double> x;
  std::vector<double> k;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  Impl(double L_, std::size_t N_) : L(L_), N(N_), dx(2.0 * L_ / static_cast<double>(N_)) {
    x.resize(N);
    for (std::size_t i = 0; i < N; ++i) x[i] = -L + static_cast<double>(i) * dx;
    k.resize(N / 2 + 1);
    for (std::size_t j = 0; j < k.size(); ++j) k[j] = std::numbers::pi * static_cast<double>(j) / L;

    std::vector<double> rbuf(N);
    std::vector<fftw_complex> cbuf(N / 2 + 1);
    const int n = static_cast<int>(N);
    std::lock_guard lock(planner_mutex());
    r2c = fftw_plan_dft_r2c_1d(n, rbuf.data(), cbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    c2r = fftw_plan_dft_c2r_1d(n, cbuf.data(), rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }

  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;
};

Grid make_grid(double L, std::size_t N) {
  if (!(L > 0.0) || !std::isfinite(L)) throw PreconditionError("half-length L must be positive");
  if (N < 16) throw PreconditionError("point count N must be at least 16");
  if (N % 2 != 0) throw PreconditionError("point count N must be even");
  return Grid(std::make_shared<const Grid::Impl>(L, N));
}

double Grid::half_length() const { return impl_->L; }
std::size_t Grid::size() const { return impl_ ? impl_->N : 0; }
double Grid::dx() const { return impl_->dx; }
std::span<const double> Grid::nodes() const { return impl_->x; }
std::span<const double> Grid::wavenumbers() const { return impl_->k; }

bool Grid::same_as(const Grid& other) const {
  if (impl_ == other.impl_) return true;
  if (!impl_ || !other.impl_) return false;
  return impl_->N == other.impl_->N && impl_->L == other.impl_->L;
}

void Grid::forward(std::span<const double> in, std::span<cplx> out) const {
  // r2c leaves its input intact, the const_cast only satisfies the C signature.
  fftw_execute_dft_r2c(impl_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void Grid::inverse(std::span<const cplx> in, std::span<double> out) const {
  std::vector<cplx> tmp(in.begin(), in.end());
  fftw_execute_dft_c2r(impl_->c2r, reinterpret_cast<fftw_complex*>(tmp.data()), out.data());
  const double s = 1.0 / static_cast<double>(impl_->N);
  for (double& v : out) v *= s;
}

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw PreconditionError("field length does not match grid");
}

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& o) {
  require_same_grid(grid, o.grid);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_same_grid(grid, o.grid);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }

Field hadamard(const Field& a, const Field& b) {
  require_same_grid(a.grid, b.grid);
  Field out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

FieldPair::FieldPair(Field u, Field v) : first(std::move(u)), second(std::move(v)) {
  require_same_grid(first.grid, second.grid);
}

FieldPair& FieldPair::operator+=(const FieldPair& o) {
  first += o.first;
  second += o.second;
  return *this;
}

FieldPair& FieldPair::operator-=(const FieldPair& o) {
  first -= o.first;
  second -= o.second;
  return *this;
}

FieldPair& FieldPair::operator*=(double s) {
  first *= s;
  second *= s;
  return *this;
}

FieldPair operator+(FieldPair a, const FieldPair& b) { return a += b; }
FieldPair operator-(FieldPair a, const FieldPair& b) { return a -= b; }
FieldPair operator*(double s, FieldPair a) { return a *= s; }

Field sample(const Grid& grid, const std::function<double(double)>& fn) {
  Field f(grid);
  const auto x = grid.nodes();
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = fn(x[i]);
  return f;
}

Field spectral_derivative(const Field& f, int order) {
  if (order < 1 || order > 3) throw PreconditionError("derivative order must be 1, 2 or 3");
  const Grid& g = f.grid;
  const auto k = g.wavenumbers();
  const std::size_t M = g.spectrum_size();
  std::vector<cplx> fh(M);
  g.forward(f.values, fh);
  for (std::size_t j = 0; j < M; ++j) {
    const double kj = k[j];
    switch (order) {
      case 1: fh[j] *= cplx(0.0, kj); break;
      case 2: fh[j] *= -kj * kj; break;
      case 3: fh[j] *= cplx(0.0, -kj * kj * kj); break;
    }
  }
  if (order % 2 == 1) fh[M - 1] = 0.0;
  Field out(g);
  g.inverse(fh, out.values);
  return out;
}

Field apply_symbol(const Field& f, const std::function<double(double)>& symbol) {
  const Grid& g = f.grid;
  const auto k = g.wavenumbers();
  std::vector<cplx> fh(g.spectrum_size());
  g.forward(f.values, fh);
  for (std::size_t j = 0; j < fh.size(); ++j) fh[j] *= symbol(k[j]);
  Field out(g);
  g.inverse(fh, out.values);
  return out;
}

double quadrature_integrate(const Field& f) {
  return f.grid.dx() * kernels::parallel::sum(f.values);
}

Field periodic_primitive(const Field& f) {
  const Grid& g = f.grid;
  const auto k = g.wavenumbers();
  const std::size_t M = g.spectrum_size();
  std::vector<cplx> fh(M);
  g.forward(f.values, fh);
  fh[0] = 0.0;
  fh[M - 1] = 0.0;
  for (std::size_t j = 1; j + 1 < M; ++j) fh[j] /= cplx(0.0, k[j]);
  Field out(g);
  g.inverse(fh, out.values);
  const double anchor = out[g.center_index()];
  for (double& v : out.values) v -= anchor;
  return out;
}

Field odd_primitive(const Field& f) {
  const double mean = kernels::parallel::sum(f.values) / static_cast<double>(f.size());
  Field out = periodic_primitive(f);
  const auto x = f.grid.nodes();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += mean * x[i];
  return out;
}

Field translate(const Field& f, double y) {
  const Grid& g = f.grid;
  const auto k = g.wavenumbers();
  const std::size_t M = g.spectrum_size();
  std::vector<cplx> fh(M);
  g.forward(f.values, fh);
  for (std::size_t j = 0; j + 1 < M; ++j) fh[j] *= std::polar(1.0, k[j] * y);
  // The Nyquist coefficient is real; only the even part of the shift survives.
  fh[M - 1] *= std::cos(k[M - 1] * y);
  Field out(g);
  g.inverse(fh, out.values);
  return out;
}

FieldPair translate(const FieldPair& f, double y) {
  return FieldPair(translate(f.first, y), translate(f.second, y));
}

Field dealias(const Field& f) {
  const Grid& g = f.grid;
  std::vector<cplx> fh(g.spectrum_size());
  g.forward(f.values, fh);
  const std::size_t cut = g.size() / 3;
  for (std::size_t j = cut + 1; j < fh.size(); ++j) fh[j] = 0.0;
  Field out(g);
  g.inverse(fh, out.values);
  return out;
}

double inner(const Field& a, const Field& b) {
  require_same_grid(a.grid, b.grid);
  return a.grid.dx() * kernels::parallel::dot(a.values, b.values);
}

double norm_l2(const Field& f) { return std::sqrt(inner(f, f)); }

double norm_h1(const Field& f) {
  const Field fx = spectral_derivative(f, 1);
  return std::sqrt(inner(f, f) + inner(fx, fx));
}

double inner(const FieldPair& a, const FieldPair& b) {
  return inner(a.first, b.first) + inner(a.second, b.second);
}

double inner_h1l2(const FieldPair& a, const FieldPair& b) {
  const Field ax = spectral_derivative(a.first, 1);
  const Field bx = &a == &b ? ax : spectral_derivative(b.first, 1);
  return inner(a.first, b.first) + inner(ax, bx) + inner(a.second, b.second);
}

double norm_h1l2(const FieldPair& f) { return std::sqrt(inner_h1l2(f, f)); }

double max_abs(const Field& f) { return kernels::parallel::max_abs(f.values); }

double wrap_to_box(double x, double L) {
  const double P = 2.0 * L;
  double r = std::fmod(x + L, P);
  if (r < 0) r += P;
  return r - L;
}

}  // namespace gbq
