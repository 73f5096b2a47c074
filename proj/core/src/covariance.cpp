#include "kmono/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "kmono/error.hpp"

namespace kmono {
namespace {

// Cholesky that tolerates zero pivots; returns false if a pivot is clearly
// negative or the result does not reproduce `a`.
bool semidefinite_cholesky(const Eigen::MatrixXd& a, Eigen::MatrixXd& l) {
  const Eigen::Index n = a.rows();
  l = Eigen::MatrixXd::Zero(n, n);
  const double scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
  const double eps = 1e-13 * scale;
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Eigen::Index t = 0; t < j; ++t) d -= l(j, t) * l(j, t);
    if (d < -eps) return false;
    if (d <= eps) continue;
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index t = 0; t < j; ++t) s -= l(i, t) * l(j, t);
      l(i, j) = s / root;
    }
  }
  return ((l * l.transpose()) - a).cwiseAbs().maxCoeff() <= CovMatrix::kFactorTol;
}

}  // namespace

CovMatrix::CovMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw NumericalError("covariance matrix must be square");
  if (entries_.size() == 0) {
    factor_ = entries_;
    return;
  }
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
    throw NumericalError("covariance matrix is not symmetric");
  entries_ = 0.5 * (entries_ + entries_.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  Eigen::VectorXd lambda = eig.eigenvalues();
  min_eigenvalue_ = lambda.minCoeff();
  if (min_eigenvalue_ < kHardNegativeEigenvalue)
    throw NumericalError("covariance matrix is indefinite (eigenvalue " +
                         std::to_string(min_eigenvalue_) + ")");
  lambda = lambda.cwiseMax(0.0);
  const Eigen::MatrixXd repaired =
      eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();

  if (semidefinite_cholesky(repaired, factor_)) {
    triangular_ = true;
  } else {
    triangular_ = false;
    factor_ = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
    if (((factor_ * factor_.transpose()) - repaired).cwiseAbs().maxCoeff() > kFactorTol)
      throw NumericalError("could not factor covariance matrix");
  }
}

CovMatrix covariance_general(const Pmf& p, int k) {
  const DiffSupport s = diff_support(p, k);
  const auto dim = static_cast<Eigen::Index>(s.size());
  const auto nabla = forward_difference(p, k);

  std::vector<double> w(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) w[i] = (i % 2 == 0 ? 1.0 : -1.0) * binomial_coefficient(k, i);

  // E[a_r a_s] with a_r = sum_i w_i 1{X = j_r + i}: only coinciding points
  // j_r + i = j_s + i' contribute, with probability p(j_r + i).
  Eigen::MatrixXd sigma(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = r; c < dim; ++c) {
      const std::int64_t jr = s.first + r;
      const std::int64_t jc = s.first + c;
      double second_moment = 0.0;
      for (int i = 0; i <= k; ++i) {
        const std::int64_t point = jr + i;
        const std::int64_t ic = point - jc;
        if (ic < 0 || ic > k) continue;
        second_moment += w[i] * w[static_cast<std::size_t>(ic)] * p(point);
      }
      sigma(r, c) = second_moment - nabla[r] * nabla[c];
      sigma(c, r) = sigma(r, c);
    }
  }
  return CovMatrix(std::move(sigma));
}

CovMatrix covariance_monotone(const Pmf& p) {
  const DiffSupport s = diff_support(p, 1);
  const auto dim = static_cast<Eigen::Index>(s.size());
  const std::int64_t m = p.support_min();
  auto slope = [&](std::int64_t j) { return p(j) - p(j + 1); };

  // 1-based r, s as in the closed form.
  Eigen::MatrixXd sigma(dim, dim);
  for (Eigen::Index r = 1; r <= dim; ++r) {
    for (Eigen::Index c = 1; c <= dim; ++c) {
      double v;
      if (r == c) {
        v = p(m + r) + p(m - 1 + r) - slope(m - 1 + r) * slope(m - 1 + r);
      } else if (std::abs(r - c) == 1) {
        const Eigen::Index lo = std::min(r, c);
        v = -p(m + lo) - slope(m - 1 + lo) * slope(m + lo);
      } else {
        v = -slope(m - 1 + r) * slope(m - 1 + c);
      }
      sigma(r - 1, c - 1) = v;
    }
  }
  return CovMatrix(std::move(sigma));
}

CovMatrix covariance_convex(const Pmf& p) {
  const DiffSupport s = diff_support(p, 2);
  const auto dim = static_cast<Eigen::Index>(s.size());
  const std::int64_t m = p.support_min();
  auto curv = [&](std::int64_t j) { return p(j) - 2.0 * p(j + 1) + p(j + 2); };

  Eigen::MatrixXd sigma(dim, dim);
  for (Eigen::Index r = 1; r <= dim; ++r) {
    for (Eigen::Index c = 1; c <= dim; ++c) {
      const Eigen::Index lo = std::min(r, c);
      const Eigen::Index gap = std::abs(r - c);
      double v;
      switch (gap) {
        case 0:
          v = p(m + r + 1) + 4.0 * p(m + r) + p(m - 1 + r) - curv(m - 1 + r) * curv(m - 1 + r);
          break;
        case 1:
          v = -2.0 * (p(m + lo + 1) + p(m + lo)) - curv(m - 1 + lo) * curv(m + lo);
          break;
        case 2:
          v = p(m + lo + 1) - curv(m + lo - 1) * curv(m + lo + 1);
          break;
        default:
          v = -curv(m - 1 + r) * curv(m - 1 + c);
      }
      sigma(r - 1, c - 1) = v;
    }
  }
  return CovMatrix(std::move(sigma));
}

double null_diag_variance(const Pmf& p_hat, std::int64_t j, int k) {
  const DiffSupport s = diff_support(p_hat, k);
  if (!s.contains(j)) throw InputError("index outside the difference support");
  double v;
  if (k == 1) {
    v = 2.0 * p_hat(j + 1);
  } else if (k == 2) {
    v = 6.0 * p_hat(j + 1);
  } else {
    v = covariance_general(p_hat, k)(j - s.first, j - s.first);
  }
  if (!(v > 0.0)) throw NumericalError("degenerate null variance");
  return v;
}

CovMatrix limit_cov_multinomial(const Pmf& p) {
  const auto dim = static_cast<Eigen::Index>(p.size());
  const Eigen::Map<const Eigen::VectorXd> v(p.probs().data(), dim);
  Eigen::MatrixXd gamma = -v * v.transpose();
  gamma.diagonal() += v;
  return CovMatrix(std::move(gamma));
}

}  // namespace kmono
