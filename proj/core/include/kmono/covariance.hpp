#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "kmono/pmf.hpp"

namespace kmono {

/// Symmetric positive-semidefinite matrix together with a factor L such that
/// L L^T reproduces the (repaired) matrix; L is what Gaussian samplers use.
///
/// Repair: eigenvalues in [-1e-6, 0) are clamped to zero before factoring.
/// Anything more negative means the matrix was built wrong and is rejected
/// with NumericalError, as is an asymmetric input.
class CovMatrix {
 public:
  CovMatrix() = default;
  explicit CovMatrix(Eigen::MatrixXd entries);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  /// Lower triangular whenever the semidefinite Cholesky succeeds (the usual
  /// case); otherwise an eigenvector-based square root.
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }
  bool factor_is_triangular() const noexcept { return triangular_; }
  /// Smallest eigenvalue of the input, before repair.
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

  double operator()(Eigen::Index r, Eigen::Index s) const { return entries_(r, s); }

  static constexpr double kSymmetryTol = 1e-12;
  static constexpr double kHardNegativeEigenvalue = -1e-6;
  static constexpr double kFactorTol = 1e-8;

 private:
  Eigen::MatrixXd entries_;
  Eigen::MatrixXd factor_;
  double min_eigenvalue_ = 0.0;
  bool triangular_ = true;
};

/// Asymptotic covariance of sqrt(n)(nabla^k p_n(j) - nabla^k p(j)), j in S_k,
/// assembled from the indicator expansion of nabla^k 1{X = j}.
CovMatrix covariance_general(const Pmf& p, int k);

/// Three-band closed form for k = 1.
CovMatrix covariance_monotone(const Pmf& p);

/// Five-band closed form for k = 2.
CovMatrix covariance_convex(const Pmf& p);

/// Diagonal entry for index j evaluated under nabla^k p(j) = 0:
/// 2 p(j+1) for k = 1 and 6 p(j+1) for k = 2. For k >= 3 there is no
/// constrained simplification and the plug-in diagonal is returned.
/// Throws NumericalError("degenerate null variance") when the value is zero.
double null_diag_variance(const Pmf& p_hat, std::int64_t j, int k);

/// Multinomial covariance Gamma_{r,s} = 1{r=s} p_r - p_r p_s on {m, ..., M}.
CovMatrix limit_cov_multinomial(const Pmf& p);

}  // namespace kmono
