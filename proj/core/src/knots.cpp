#include "kmono/knots.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "kmono/covariance.hpp"
#include "kmono/error.hpp"

namespace kmono {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::M1: return "M1";
    case Method::M2: return "M2";
    case Method::M3: return "M3";
  }
  return "?";
}

Method parse_method(std::string_view text) {
  if (text == "m1" || text == "M1") return Method::M1;
  if (text == "m2" || text == "M2") return Method::M2;
  if (text == "m3" || text == "M3") return Method::M3;
  throw InputError("unknown method '" + std::string(text) + "'");
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw InputError("normal quantile needs 0 < prob < 1");
  return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

SelectionOutcome select_method1(const EmpiricalPmf& p_hat, int k) {
  SelectionOutcome out;
  out.selected = IndexSet::all_of(diff_support(p_hat, k));
  out.method_used = Method::M1;
  return out;
}

double default_a_n(const EmpiricalPmf& p_hat, int k) {
  const DiffSupport s = diff_support(p_hat, k);
  return std::pow(static_cast<double>(p_hat.n()), -1.0 / static_cast<double>(s.size()));
}

SelectionOutcome select_method2(const EmpiricalPmf& p_hat, int k, double a_n, double c) {
  if (!(a_n > 0.0) || !(c > 0.0)) throw InputError("Method 2 needs a_n > 0 and c > 0");
  const DiffSupport s = diff_support(p_hat, k);
  const auto d = forward_difference(p_hat, k);
  const double threshold = (a_n / c) * *std::max_element(d.begin(), d.end());
  std::vector<std::int64_t> members;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] <= threshold) members.push_back(s.first + static_cast<std::int64_t>(i));
  if (members.empty()) {
    SelectionOutcome out = select_method1(p_hat, k);
    out.fell_back_m2_to_m1 = true;
    return out;
  }
  SelectionOutcome out;
  out.selected = IndexSet(std::move(members));
  out.method_used = Method::M2;
  return out;
}

IndexSet method3_candidates(const EmpiricalPmf& p_hat, int k, double gamma) {
  if (k != 1 && k != 2) throw InputError("Method 3 defined for k in {1,2}");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("Method 3 needs gamma in (0, 1)");
  const DiffSupport s = diff_support(p_hat, k);
  const auto d = forward_difference(p_hat, k);
  const double z = normal_quantile(1.0 - gamma);
  const double root_n = std::sqrt(static_cast<double>(p_hat.n()));
  std::vector<std::int64_t> members;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::int64_t j = s.first + static_cast<std::int64_t>(i);
    // p(j+1) = 0 means the index cannot be standardized; leave it out.
    const double variance = (k == 1 ? 2.0 : 6.0) * p_hat(j + 1);
    if (!(variance > 0.0)) continue;
    if (root_n * d[i] / std::sqrt(null_diag_variance(p_hat, j, k)) <= z) members.push_back(j);
  }
  return IndexSet(std::move(members));
}

namespace {

SelectionOutcome method3_with_fallback(const EmpiricalPmf& p_hat, int k, double gamma,
                                       double a_n, double c) {
  IndexSet raw = method3_candidates(p_hat, k, gamma);
  if (raw.empty()) {
    SelectionOutcome out = select_method2(p_hat, k, a_n, c);
    out.fell_back_m3_to_m2 = true;
    return out;
  }
  SelectionOutcome out;
  out.selected = raw;
  out.method3_raw = std::move(raw);
  out.method_used = Method::M3;
  return out;
}

}  // namespace

SelectionOutcome select_method3(const EmpiricalPmf& p_hat, int k, double gamma) {
  return method3_with_fallback(p_hat, k, gamma, default_a_n(p_hat, k), 1.0);
}

SelectionOutcome select(const EmpiricalPmf& p_hat, int k, Method method,
                        const SelectionOverrides& overrides) {
  switch (method) {
    case Method::M1:
      return select_method1(p_hat, k);
    case Method::M2:
      return select_method2(p_hat, k, overrides.a_n.value_or(default_a_n(p_hat, k)),
                            overrides.c.value_or(1.0));
    case Method::M3:
      if (k != 1 && k != 2) throw InputError("Method 3 defined for k in {1,2}");
      return method3_with_fallback(
          p_hat, k, overrides.gamma.value_or(1.0 / static_cast<double>(p_hat.n())),
          overrides.a_n.value_or(default_a_n(p_hat, k)), overrides.c.value_or(1.0));
  }
  throw InputError("unknown method");
}

}  // namespace kmono
