#pragma once

// Dense discretizations of the scalar operator -d_xx + (1 - w^2) - (p+1) phi^p
// and of the two-component Hessian S_w''(Phi_w), their low spectrum and the
// constrained Rayleigh-quotient minimum in H1 x L2.

#include <Eigen/Dense>
#include <vector>

#include "gbq/ground_state.hpp"

namespace gbq {

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, empty when not requested
};

/// k smallest eigenpairs of a symmetric matrix (LAPACK dsyevr). `a` is
/// overwritten.
EigenPairs symmetric_smallest(Eigen::MatrixXd& a, int k, bool want_vectors);

/// Dense spectral second-derivative matrix on the grid.
Eigen::MatrixXd second_derivative_matrix(const Grid& grid);

/// 2N x 2N matrix of S_w''(Phi_w) in the (u, v) node basis.
Eigen::MatrixXd hessian_matrix(const SolitonFamily& background);

struct SpectralReport {
  double p = 0.0;
  double omega = 0.0;
  std::size_t N = 0;
  double L = 0.0;
  std::vector<double> eigenvalues;  // smallest of the 2N x 2N Hessian
  double mu0_numeric = 0.0;
  double mu0_formula = 0.0;
  double lambda_minus1 = 0.0;        // scalar operator, numeric
  double lambda_minus1_exact = 0.0;  // (1 - w^2)(1 - (p+2)^2/4)
  double scalar_second = 0.0;        // second scalar eigenvalue (translation mode)
  double kernel_eig = 0.0;
  double kernel_correlation = 0.0;
  int negative_count = 0;
  double essential_edge = 0.0;  // 1 - |w|
  double coercivity_min = 0.0;  // NaN unless requested
};

/// Smallest eigenvalue of the scalar operator.
double scalar_negative_eigenvalue(double p, double omega, const Grid& grid);

/// Two smallest scalar eigenpairs.
EigenPairs scalar_spectrum(double p, double omega, const Grid& grid, int k = 2);

/// Smallest Hessian eigenvalue predicted from the scalar one. Requires
/// lambda_minus1 < 0.
double mu0_closed_form(double lambda_minus1, double omega);

/// Number of eigenvalues counted as negative: below -kNegativeTol.
inline constexpr double kNegativeTol = 1e-7;

SpectralReport hessian_spectrum(double p, double omega, const Grid& grid, int k,
                                bool with_coercivity = false);

enum class ConstraintSet { GammaAndPsi, GammaOnly };

/// Minimum of <S'' eta, eta> / ||eta||^2_{H1 x L2} over eta orthogonal (in
/// L2 x L2) to the chosen direction vectors.
double constrained_coercivity(double p, double omega, const Grid& grid,
                              ConstraintSet constraints = ConstraintSet::GammaAndPsi);

}  // namespace gbq
