#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kmono/pmf.hpp"

namespace kmono {

/// Points (j, sum_{i=m}^{j} v_i) for j = m - 1, ..., M; the first ordinate is 0.
struct CumSumDiagram {
  std::int64_t first_abscissa = -1;  // m - 1
  std::vector<double> ordinates;
};

CumSumDiagram cumulative_sum_diagram(std::span<const double> v, std::int64_t support_min = 0);

/// Left slopes of the least concave majorant of a cumulative sum diagram,
/// one per abscissa m, ..., M.
std::vector<double> lcm_left_slopes(const CumSumDiagram& diagram);

/// An l2 projection onto a shape cone.
struct ProjectionResult {
  std::vector<double> fitted;
  double objective = 0.0;  // ||fitted - input||_2
  IndexSet knots;          // indices j with nabla^k fitted(j) > kKnotTol
};

inline constexpr double kKnotTol = 1e-10;

/// Projection onto non-increasing sequences via pooled adjacent violators.
/// Preserves the total sum; knots are the j with fitted(j) > fitted(j+1).
ProjectionResult grenander(std::span<const double> v, std::int64_t support_min = 0);
ProjectionResult grenander(const Pmf& p);

/// Convex least-squares fit of a probability vector (length >= 3) by support
/// reduction over the hinge basis (kappa - i)_+. The fit is convex and sums to one;
/// knots are the j with nabla^2 fitted(j) > kKnotTol.
/// Throws InputError for a non-probability input and
/// NumericalError("support reduction did not converge") past the iteration cap.
ProjectionResult convex_lse(std::span<const double> v, std::int64_t support_min = 0);
ProjectionResult convex_lse(const Pmf& p);

/// True iff H_q >= H_v everywhere and H_q = H_v at the knots of q and at both
/// endpoints, all within `tol`. H_q(j) = sum_{i<j} F_q(i), F_q the partial sums.
bool check_convex_lse_characterization(std::span<const double> q, std::span<const double> v,
                                       double tol = 1e-10);

/// Projection of arbitrary reals onto non-increasing sequences (no sum constraint).
std::vector<double> project_monotone_block(std::span<const double> v);

/// Projection of arbitrary reals onto convex sequences, by an active-set
/// solve over the second-difference constraints. Vectors of length <= 2 are returned as is.
std::vector<double> project_convex_block(std::span<const double> v);

/// Projection onto {q : nabla^2 q(l) >= 0 for every l with constrained[l]}.
/// `constrained` has length v.size() - 2 (or is empty when v.size() < 3).
std::vector<double> project_convex_masked(std::span<const double> v,
                                          std::span<const char> constrained);

/// min ||X beta - y|| with beta_i >= 0 for i >= n_free (Lawson-Hanson active set;
/// the leading n_free coefficients are unconstrained). Throws NumericalError
/// after `max_iterations` outer iterations.
Eigen::VectorXd nonnegative_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                          Eigen::Index n_free, int max_iterations,
                                          double tol = 1e-13);

}  // namespace kmono
