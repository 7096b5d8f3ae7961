#include "gbq/spectrum.hpp"

#include <cmath>
#include <limits>

#include <lapacke.h>

#include "gbq/error.hpp"
#include "gbq/functionals.hpp"
#include "gbq/kernels.hpp"

namespace gbq {

EigenPairs symmetric_smallest(Eigen::MatrixXd& a, int k, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  if (a.cols() != n) throw PreconditionError("eigensolve needs a square matrix");
  k = std::min<int>(k, static_cast<int>(n));
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(want_vectors ? n : 1, want_vectors ? k : 1);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(k, 1)));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1,
                     k, 0.0, &found, w.data(), z.data(), want_vectors ? n : 1, isuppz.data());
  if (info != 0 || found != k)
    throw EigenSolverError("dsyevr failed (info=" + std::to_string(info) + ")");
  EigenPairs out;
  out.values = w.head(k);
  if (want_vectors) out.vectors = std::move(z);
  return out;
}

namespace {

Eigen::MatrixXd circulant_from_column(const Field& column) {
  const Eigen::Index n = static_cast<Eigen::Index>(column.size());
  Eigen::MatrixXd m(n, n);
  kernels::parallel::fill_circulant(column.values, m.data());
  return m;
}

Field unit_impulse(const Grid& grid) {
  Field e(grid);
  e[0] = 1.0;
  return e;
}

// Matrix of the Fourier multiplier s(k) (real, even).
Eigen::MatrixXd symbol_matrix(const Grid& grid, const std::function<double(double)>& s) {
  return circulant_from_column(apply_symbol(unit_impulse(grid), s));
}

Eigen::MatrixXd scalar_operator(const SolitonFamily& bg) {
  const double p = bg.p();
  const double c = 1.0 - bg.lambda() * bg.lambda();
  Eigen::MatrixXd m = -second_derivative_matrix(bg.grid());
  Field pot(bg.grid());
  kernels::parallel::abs_power(bg.profile.values, p, pot.values);
  for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) += c - (p + 1.0) * pot[static_cast<std::size_t>(i)];
  return m;
}

Eigen::VectorXd to_vector(const FieldPair& f) {
  const Eigen::Index n = static_cast<Eigen::Index>(f.first.size());
  Eigen::VectorXd v(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = f.first[static_cast<std::size_t>(i)];
    v(n + i) = f.second[static_cast<std::size_t>(i)];
  }
  return v;
}

}  // namespace

Eigen::MatrixXd second_derivative_matrix(const Grid& grid) {
  return circulant_from_column(spectral_derivative(unit_impulse(grid), 2));
}

Eigen::MatrixXd hessian_matrix(const SolitonFamily& bg) {
  const Eigen::Index n = static_cast<Eigen::Index>(bg.grid().size());
  const double w = bg.lambda();
  const double p = bg.p();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  h.topLeftCorner(n, n) = -second_derivative_matrix(bg.grid());
  Field pot(bg.grid());
  kernels::parallel::abs_power(bg.profile.values, p, pot.values);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) += 1.0 - (p + 1.0) * pot[static_cast<std::size_t>(i)];
    h(i, n + i) = w;
    h(n + i, i) = w;
    h(n + i, n + i) = 1.0;
  }
  return h;
}

EigenPairs scalar_spectrum(double p, double omega, const Grid& grid, int k) {
  const SolitonFamily bg = soliton_profile({p, omega}, grid);
  Eigen::MatrixXd m = scalar_operator(bg);
  return symmetric_smallest(m, k, true);
}

double scalar_negative_eigenvalue(double p, double omega, const Grid& grid) {
  const SolitonFamily bg = soliton_profile({p, omega}, grid);
  Eigen::MatrixXd m = scalar_operator(bg);
  return symmetric_smallest(m, 1, false).values(0);
}

double mu0_closed_form(double lambda_minus1, double omega) {
  if (!(lambda_minus1 < 0.0)) throw PreconditionError("mu0 formula needs a negative scalar eigenvalue");
  const double l = lambda_minus1;
  const double w2 = omega * omega;
  const double disc = l * l + 2.0 * (w2 - 1.0) * l + (w2 + 1.0) * (w2 + 1.0);
  // disc = (l + w2 - 1)^2 + 4 w2 >= 0 for real inputs.
  return 0.5 * (l + w2 + 1.0 - std::sqrt(disc));
}

double constrained_coercivity(double p, double omega, const Grid& grid, ConstraintSet constraints) {
  const SolitonFamily bg = soliton_profile({p, omega}, grid);
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());

  // Whiten the H1 x L2 Gram operator: eta = B^{-1/2} zeta, B^{-1/2} = diag(C, I).
  const auto inv_sqrt = [](double k) { return 1.0 / std::sqrt(1.0 + k * k); };
  const Eigen::MatrixXd C = symbol_matrix(grid, inv_sqrt);
  const Eigen::MatrixXd H = hessian_matrix(bg);

  Eigen::MatrixXd M(2 * n, 2 * n);
  M.topLeftCorner(n, n).noalias() = C * H.topLeftCorner(n, n) * C;
  M.topRightCorner(n, n) = omega * C;
  M.bottomLeftCorner(n, n) = omega * C;
  M.bottomRightCorner(n, n).setIdentity();

  std::vector<FieldPair> dirs;
  dirs.emplace_back(apply_symbol(bg.gamma, inv_sqrt), Field(grid));
  if (constraints == ConstraintSet::GammaAndPsi) dirs.emplace_back(apply_symbol(bg.profile, inv_sqrt), Field(grid));

  Eigen::MatrixXd Q(2 * n, static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t j = 0; j < dirs.size(); ++j) Q.col(static_cast<Eigen::Index>(j)) = to_vector(dirs[j]);
  Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Q).householderQ() * Eigen::MatrixXd::Identity(2 * n, Q.cols());

  // P M P + sigma Q Q^T with P = I - Q Q^T, as rank updates.
  const double sigma = 10.0;
  const Eigen::MatrixXd MQ = M * Q;
  const Eigen::MatrixXd QtMQ = Q.transpose() * MQ;
  M.noalias() -= Q * MQ.transpose();
  M.noalias() -= MQ * Q.transpose();
  M.noalias() += Q * (QtMQ + sigma * Eigen::MatrixXd::Identity(Q.cols(), Q.cols())) * Q.transpose();
  return symmetric_smallest(M, 1, false).values(0);
}

SpectralReport hessian_spectrum(double p, double omega, const Grid& grid, int k, bool with_coercivity) {
  if (k < 4) throw PreconditionError("hessian_spectrum needs k >= 4");
  const SolitonFamily bg = soliton_profile({p, omega}, grid);

  SpectralReport r;
  r.p = p;
  r.omega = omega;
  r.N = grid.size();
  r.L = grid.half_length();
  r.essential_edge = 1.0 - std::abs(omega);
  r.lambda_minus1_exact = (1.0 - omega * omega) * (1.0 - (p + 2.0) * (p + 2.0) / 4.0);

  {
    Eigen::MatrixXd s = scalar_operator(bg);
    const EigenPairs sp = symmetric_smallest(s, 2, false);
    r.lambda_minus1 = sp.values(0);
    r.scalar_second = sp.values(1);
  }
  r.mu0_formula = mu0_closed_form(r.lambda_minus1, omega);

  Eigen::MatrixXd h = hessian_matrix(bg);
  const EigenPairs hp = symmetric_smallest(h, k, true);
  r.eigenvalues.assign(hp.values.data(), hp.values.data() + hp.values.size());
  r.mu0_numeric = hp.values(0);
  r.negative_count = 0;
  for (double v : r.eigenvalues)
    if (v < -kNegativeTol) ++r.negative_count;

  Eigen::Index kidx = 0;
  for (Eigen::Index j = 1; j < hp.values.size(); ++j)
    if (std::abs(hp.values(j)) < std::abs(hp.values(kidx))) kidx = j;
  r.kernel_eig = hp.values(kidx);
  const Eigen::VectorXd t = to_vector(FieldPair(bg.x_derivative, -omega * bg.x_derivative));
  const Eigen::VectorXd v = hp.vectors.col(kidx);
  r.kernel_correlation = std::abs(t.dot(v)) / (t.norm() * v.norm());

  r.coercivity_min = with_coercivity ? constrained_coercivity(p, omega, grid)
                                     : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace gbq
