#include "kmono/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kmono/error.hpp"

namespace kmono {
namespace {

double l2_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

IndexSet knots_of(std::span<const double> fitted, int k, std::int64_t support_min) {
  if (fitted.size() < static_cast<std::size_t>(k) + 1) return {};
  const auto d = forward_difference(fitted, k);
  std::vector<std::int64_t> members;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > kKnotTol) members.push_back(support_min + static_cast<std::int64_t>(i));
  return IndexSet(std::move(members));
}

Eigen::VectorXd solve_on_columns(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 const std::vector<char>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    if (passive[static_cast<std::size_t>(i)]) cols.push_back(i);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(x.cols());
  if (cols.empty()) return z;
  Eigen::MatrixXd sub(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = x.col(cols[c]);
  const Eigen::VectorXd sol = sub.colPivHouseholderQr().solve(y);
  for (std::size_t c = 0; c < cols.size(); ++c) z(cols[c]) = sol(static_cast<Eigen::Index>(c));
  return z;
}

void require_probability_vector(std::span<const double> v) {
  double total = 0.0;
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InputError("input is not a probability vector");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("input is not a probability vector");
}

}  // namespace

CumSumDiagram cumulative_sum_diagram(std::span<const double> v, std::int64_t support_min) {
  CumSumDiagram d;
  d.first_abscissa = support_min - 1;
  d.ordinates.resize(v.size() + 1);
  d.ordinates[0] = 0.0;
  std::partial_sum(v.begin(), v.end(), d.ordinates.begin() + 1);
  return d;
}

std::vector<double> lcm_left_slopes(const CumSumDiagram& diagram) {
  const auto& y = diagram.ordinates;
  // Upper hull of (i, y_i), i = 0..n, by a monotone chain.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < y.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      // Drop b unless it lies strictly above segment a -> i.
      const double cross = (static_cast<double>(b) - static_cast<double>(a)) * (y[i] - y[a]) -
                           (y[b] - y[a]) * (static_cast<double>(i) - static_cast<double>(a));
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }
  std::vector<double> slopes(y.size() - 1);
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t a = hull[h], b = hull[h + 1];
    const double s = (y[b] - y[a]) / static_cast<double>(b - a);
    for (std::size_t j = a; j < b; ++j) slopes[j] = s;
  }
  return slopes;
}

std::vector<double> project_monotone_block(std::span<const double> v) {
  struct Block {
    double sum;
    std::size_t count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> stack;
  stack.reserve(v.size());
  for (double x : v) {
    stack.push_back({x, 1});
    // Non-increasing target: pool while a block is at least as large as its left neighbour.
    while (stack.size() >= 2 && stack.back().mean() >= stack[stack.size() - 2].mean()) {
      Block top = stack.back();
      stack.pop_back();
      stack.back().sum += top.sum;
      stack.back().count += top.count;
    }
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& b : stack) out.insert(out.end(), b.count, b.mean());
  return out;
}

ProjectionResult grenander(std::span<const double> v, std::int64_t support_min) {
  ProjectionResult r;
  r.fitted = project_monotone_block(v);
  r.objective = l2_distance(r.fitted, v);
  r.knots = knots_of(r.fitted, 1, support_min);
  return r;
}

ProjectionResult grenander(const Pmf& p) { return grenander(p.probs(), p.support_min()); }

Eigen::VectorXd nonnegative_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                          Eigen::Index n_free, int max_iterations, double tol) {
  const Eigen::Index p = x.cols();
  std::vector<char> passive(static_cast<std::size_t>(p), 0);
  for (Eigen::Index i = 0; i < n_free; ++i) passive[static_cast<std::size_t>(i)] = 1;
  Eigen::VectorXd beta = solve_on_columns(x, y, passive);

  int iterations = 0;
  while (true) {
    const Eigen::VectorXd w = x.transpose() * (y - x * beta);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index i = n_free; i < p; ++i) {
      if (!passive[static_cast<std::size_t>(i)] && w(i) > best_w) {
        best_w = w(i);
        best = i;
      }
    }
    if (best < 0) break;
    if (++iterations > max_iterations) throw NumericalError("support reduction did not converge");
    passive[static_cast<std::size_t>(best)] = 1;

    bool first_inner = true;
    while (true) {
      const Eigen::VectorXd z = solve_on_columns(x, y, passive);
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index i = n_free; i < p; ++i) {
        if (passive[static_cast<std::size_t>(i)] && z(i) <= 0.0) {
          feasible = false;
          const double denom = beta(i) - z(i);
          alpha = std::min(alpha, denom > 0.0 ? beta(i) / denom : 0.0);
        }
      }
      if (feasible) {
        beta = z;
        break;
      }
      if (first_inner && alpha <= 0.0 && z(best) <= 0.0) {
        // The entering coefficient cannot move: optimal to working precision.
        passive[static_cast<std::size_t>(best)] = 0;
        return beta;
      }
      first_inner = false;
      beta += alpha * (z - beta);
      for (Eigen::Index i = n_free; i < p; ++i) {
        if (passive[static_cast<std::size_t>(i)] && beta(i) <= 1e-15) {
          passive[static_cast<std::size_t>(i)] = 0;
          beta(i) = 0.0;
        }
      }
    }
  }
  return beta;
}

ProjectionResult convex_lse(std::span<const double> v, std::int64_t support_min) {
  if (v.size() < 3) throw InputError("convex fit needs at least three support points");
  require_probability_vector(v);
  const auto n = static_cast<Eigen::Index>(v.size());
  const Eigen::Index last = n - 1;

  // Columns: 1, i, then hinges (kappa - i)_+ for interior kappa = 1..L-1.
  // A hinge coefficient equals nabla^2 q(kappa - 1), so non-negativity is convexity.
  Eigen::MatrixXd basis(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    basis(i, 0) = 1.0;
    basis(i, 1) = static_cast<double>(i);
    for (Eigen::Index kappa = 1; kappa < last; ++kappa)
      basis(i, kappa + 1) = static_cast<double>(std::max<Eigen::Index>(kappa - i, 0));
  }
  const Eigen::Map<const Eigen::VectorXd> y(v.data(), n);
  const int cap = static_cast<int>(10 * last);
  const Eigen::VectorXd beta = nonnegative_least_squares(basis, y, 2, cap, 1e-14);
  const Eigen::VectorXd fit = basis * beta;

  ProjectionResult r;
  r.fitted.assign(fit.data(), fit.data() + n);
  r.objective = l2_distance(r.fitted, v);
  r.knots = knots_of(r.fitted, 2, support_min);
  return r;
}

ProjectionResult convex_lse(const Pmf& p) { return convex_lse(p.probs(), p.support_min()); }

bool check_convex_lse_characterization(std::span<const double> q, std::span<const double> v,
                                       double tol) {
  if (q.size() != v.size()) throw InputError("vectors must have equal length");
  const std::size_t n = q.size();
  if (n == 0) return true;
  if (n >= 3) {
    for (double c : forward_difference(q, 2))
      if (c < -tol) return false;
  }
  auto integrated = [n](std::span<const double> x) {
    std::vector<double> f(n), h(n + 1, 0.0);
    std::partial_sum(x.begin(), x.end(), f.begin());
    for (std::size_t j = 1; j <= n; ++j) h[j] = h[j - 1] + f[j - 1];
    return std::pair{f, h};
  };
  const auto [fq, hq] = integrated(q);
  const auto [fv, hv] = integrated(v);
  if (std::abs(fq[n - 1] - fv[n - 1]) > tol) return false;
  for (std::size_t j = 0; j < n; ++j)
    if (hq[j] < hv[j] - tol) return false;
  if (std::abs(hq[n - 1] - hv[n - 1]) > tol) return false;
  if (n >= 3) {
    const auto curvature = forward_difference(q, 2);
    for (std::size_t j = 1; j + 1 < n; ++j)
      if (curvature[j - 1] > kKnotTol && std::abs(hq[j] - hv[j]) > tol) return false;
  }
  return true;
}

std::vector<double> project_convex_masked(std::span<const double> v,
                                          std::span<const char> constrained) {
  const std::size_t n = v.size();
  if (n < 3) return {v.begin(), v.end()};
  if (constrained.size() != n - 2) throw InputError("constraint mask has the wrong length");
  std::vector<std::size_t> rows;
  for (std::size_t l = 0; l < constrained.size(); ++l)
    if (constrained[l]) rows.push_back(l);
  if (rows.empty()) return {v.begin(), v.end()};

  // Dual: q = v + A^T mu with mu >= 0 minimizing ||A^T mu + v||.
  const auto ni = static_cast<Eigen::Index>(n);
  const auto nc = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd at = Eigen::MatrixXd::Zero(ni, nc);
  for (Eigen::Index c = 0; c < nc; ++c) {
    const auto l = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(c)]);
    at(l, c) = 1.0;
    at(l + 1, c) = -2.0;
    at(l + 2, c) = 1.0;
  }
  const Eigen::Map<const Eigen::VectorXd> vv(v.data(), ni);
  const double scale = std::max(1.0, vv.cwiseAbs().maxCoeff());
  const Eigen::VectorXd mu =
      nonnegative_least_squares(at, -vv, 0, static_cast<int>(10 * n), 1e-13 * scale);
  const Eigen::VectorXd q = vv + at * mu;
  return {q.data(), q.data() + ni};
}

std::vector<double> project_convex_block(std::span<const double> v) {
  if (v.size() < 3) return {v.begin(), v.end()};
  const std::vector<char> all(v.size() - 2, 1);
  return project_convex_masked(v, all);
}

}  // namespace kmono
