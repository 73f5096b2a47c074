#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "kmono/pmf.hpp"

namespace kmono {

/// Non-knot selection rule. M1 takes all of S_k, M2 thresholds relative to the
/// largest difference, M3 runs one-sided Gaussian tests of nabla^k p(j) = 0.
enum class Method { M1, M2, M3 };

std::string_view to_string(Method m) noexcept;
/// Accepts "m1"/"M1", ...; throws InputError for anything else.
Method parse_method(std::string_view text);

struct SelectionOutcome {
  IndexSet selected;          // never empty
  Method method_used = Method::M1;
  bool fell_back_m3_to_m2 = false;
  bool fell_back_m2_to_m1 = false;
  /// Method 3's candidate set before any fallback (empty if M3 was not run).
  IndexSet method3_raw;

  bool fell_back() const noexcept { return fell_back_m3_to_m2 || fell_back_m2_to_m1; }
};

/// Optional tuning; unset fields take the defaults
/// a_n = n^(-1/|S_k|), c = 1, gamma = 1/n.
struct SelectionOverrides {
  std::optional<double> a_n;
  std::optional<double> c;
  std::optional<double> gamma;
};

SelectionOutcome select_method1(const EmpiricalPmf& p_hat, int k);

/// {j : nabla^k p(j) <= (a_n / c) max_i nabla^k p(i)}; falls back to Method 1 if empty.
SelectionOutcome select_method2(const EmpiricalPmf& p_hat, int k, double a_n, double c);

/// Raw Method-3 set without fallback; indices whose null variance is zero are
/// excluded. k must be 1 or 2.
IndexSet method3_candidates(const EmpiricalPmf& p_hat, int k, double gamma);

/// Method 3 with the M3 -> M2 -> M1 fallback chain.
SelectionOutcome select_method3(const EmpiricalPmf& p_hat, int k, double gamma);

/// Dispatch with paper defaults for anything not overridden. Method 3 is only
/// defined for k in {1, 2}; other degrees throw InputError.
SelectionOutcome select(const EmpiricalPmf& p_hat, int k, Method method,
                        const SelectionOverrides& overrides = {});

double default_a_n(const EmpiricalPmf& p_hat, int k);

/// Standard normal quantile.
double normal_quantile(double prob);
double normal_cdf(double x);

}  // namespace kmono
