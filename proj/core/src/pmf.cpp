#include "kmono/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kmono/error.hpp"

namespace kmono {

CountSample::CountSample(std::int64_t min_value, std::vector<std::int64_t> counts)
    : min_value_(min_value), counts_(std::move(counts)) {
  n_ = std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

CountSample CountSample::from_values(std::span<const std::int64_t> values) {
  if (values.empty()) throw InputError("empty sample");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo < 0) throw InputError("negative value " + std::to_string(*lo) + " in sample");
  if (*hi - *lo > kMaxSpan) throw InputError("sample range exceeds supported span");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(*hi - *lo + 1), 0);
  for (auto v : values) ++counts[static_cast<std::size_t>(v - *lo)];
  return CountSample(*lo, std::move(counts));
}

CountSample CountSample::from_values(std::initializer_list<std::int64_t> values) {
  return from_values(std::span<const std::int64_t>(values.begin(), values.size()));
}

CountSample CountSample::from_frequencies(
    std::span<const std::pair<std::int64_t, std::int64_t>> table) {
  std::int64_t lo = 0, hi = -1;
  for (const auto& [value, count] : table) {
    if (value < 0) throw InputError("negative value " + std::to_string(value) + " in sample");
    if (count < 0) throw InputError("negative count for value " + std::to_string(value));
    if (count == 0) continue;
    if (hi < lo) {
      lo = hi = value;
    } else {
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
  }
  if (hi < lo) throw InputError("empty sample");
  if (hi - lo > kMaxSpan) throw InputError("sample range exceeds supported span");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& [value, count] : table)
    if (count > 0) counts[static_cast<std::size_t>(value - lo)] += count;
  return CountSample(lo, std::move(counts));
}

std::int64_t CountSample::count(std::int64_t value) const noexcept {
  if (value < min_value_ || value > max_value()) return 0;
  return counts_[static_cast<std::size_t>(value - min_value_)];
}

Pmf::Pmf(std::int64_t support_min, std::vector<double> probs)
    : m_(support_min), probs_(std::move(probs)) {
  if (probs_.empty()) throw InputError("empty probability vector");
  if (m_ < 0) throw InputError("support must lie in the non-negative integers");
  double total = 0.0;
  for (double x : probs_) {
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("probabilities must lie in [0, 1]");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("probabilities must sum to one");
  if (probs_.front() <= 0.0 || probs_.back() <= 0.0)
    throw InputError("support endpoints must carry positive mass");
}

Pmf Pmf::from_weights(std::int64_t support_min, std::span<const double> weights) {
  auto first = std::find_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; });
  if (first == weights.end()) throw InputError("weights carry no mass");
  auto last = std::find_if(weights.rbegin(), weights.rend(), [](double w) { return w > 0.0; });
  std::vector<double> probs(first, last.base());
  double total = 0.0;
  for (double w : probs) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("weights must be finite and non-negative");
    total += w;
  }
  for (double& w : probs) w /= total;
  // Re-normalize once more so the sum invariant holds to rounding.
  const double again = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& w : probs) w /= again;
  return Pmf(support_min + (first - weights.begin()), std::move(probs));
}

Pmf Pmf::from_weights(std::int64_t support_min, std::initializer_list<double> weights) {
  return from_weights(support_min, std::span<const double>(weights.begin(), weights.size()));
}

double Pmf::operator()(std::int64_t j) const noexcept {
  if (j < m_ || j > support_max()) return 0.0;
  return probs_[static_cast<std::size_t>(j - m_)];
}

EmpiricalPmf build_empirical_pmf(const CountSample& sample) {
  if (sample.n() < 1) throw InputError("empty sample");
  const auto& c = sample.counts();
  // CountSample keeps min/max at positive counts, so the support is already tight.
  EmpiricalPmf out;
  out.m_ = sample.min_value();
  out.n_ = sample.n();
  out.counts_ = c;
  out.probs_.resize(c.size());
  const double n = static_cast<double>(sample.n());
  for (std::size_t i = 0; i < c.size(); ++i) out.probs_[i] = static_cast<double>(c[i]) / n;
  return out;
}

DiffSupport diff_support(const Pmf& p, int k) {
  if (k < 1) throw InputError("degree k must be positive");
  if (p.support_max() - p.support_min() < k) throw InputError("support too short for degree k");
  return DiffSupport{p.support_min(), p.support_max() - k, k};
}

IndexSet::IndexSet(std::initializer_list<std::int64_t> members)
    : IndexSet(std::vector<std::int64_t>(members)) {}

IndexSet::IndexSet(std::vector<std::int64_t> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

IndexSet IndexSet::all_of(const DiffSupport& s) {
  std::vector<std::int64_t> v(s.size());
  std::iota(v.begin(), v.end(), s.first);
  return IndexSet(std::move(v));
}

bool IndexSet::contains(std::int64_t j) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), j);
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

IndexSet IndexSet::complement_in(const DiffSupport& s) const {
  std::vector<std::int64_t> out;
  for (std::int64_t j = s.first; j <= s.last; ++j)
    if (!contains(j)) out.push_back(j);
  return IndexSet(std::move(out));
}

double binomial_coefficient(int k, int i) {
  if (i < 0 || i > k) return 0.0;
  double c = 1.0;
  for (int t = 1; t <= i; ++t) c = c * (k - i + t) / t;
  return std::round(c);
}

std::vector<double> forward_difference(std::span<const double> v, int k) {
  if (k < 1) throw InputError("degree k must be positive");
  if (v.size() < static_cast<std::size_t>(k) + 1) throw InputError("support too short for degree k");
  std::vector<double> weights(static_cast<std::size_t>(k) + 1);
  for (int l = 0; l <= k; ++l) weights[l] = (l % 2 == 0 ? 1.0 : -1.0) * binomial_coefficient(k, l);
  std::vector<double> out(v.size() - static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (int l = 0; l <= k; ++l) acc += weights[l] * v[i + l];
    out[i] = acc;
  }
  return out;
}

std::vector<double> forward_difference(const Pmf& p, int k) {
  diff_support(p, k);
  return forward_difference(std::span<const double>(p.probs()), k);
}

double rho_k(const Pmf& p, int k) {
  const auto d = forward_difference(p, k);
  return *std::min_element(d.begin(), d.end());
}

IndexSet argmin_set(const Pmf& p, int k, double tol) {
  if (tol < 0.0) throw InputError("tolerance must be non-negative");
  const auto d = forward_difference(p, k);
  const double rho = *std::min_element(d.begin(), d.end());
  std::vector<std::int64_t> members;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (std::abs(d[i] - rho) <= tol) members.push_back(p.support_min() + static_cast<std::int64_t>(i));
  return IndexSet(std::move(members));
}

}  // namespace kmono
