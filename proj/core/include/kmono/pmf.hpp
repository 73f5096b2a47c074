#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace kmono {

/// An i.i.d. sample of non-negative integer observations, stored as a dense
/// frequency table over [min_value, max_value]. Observations are never
/// materialized one by one.
class CountSample {
 public:
  /// Throws InputError("empty sample") when `values` is empty and on negative values.
  static CountSample from_values(std::span<const std::int64_t> values);
  static CountSample from_values(std::initializer_list<std::int64_t> values);

  /// (value, count) pairs; repeated values accumulate. Zero counts are allowed
  /// but at least one count must be positive.
  static CountSample from_frequencies(std::span<const std::pair<std::int64_t, std::int64_t>> table);

  std::int64_t n() const noexcept { return n_; }
  std::int64_t min_value() const noexcept { return min_value_; }
  std::int64_t max_value() const noexcept {
    return min_value_ + static_cast<std::int64_t>(counts_.size()) - 1;
  }
  /// counts()[i] is the multiplicity of min_value() + i.
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }
  std::int64_t count(std::int64_t value) const noexcept;

  /// Largest admissible max_value - min_value; guards the dense table.
  static constexpr std::int64_t kMaxSpan = 10'000'000;

 private:
  CountSample(std::int64_t min_value, std::vector<std::int64_t> counts);

  std::int64_t min_value_ = 0;
  std::vector<std::int64_t> counts_;
  std::int64_t n_ = 0;
};

/// A probability mass function on the contiguous support {m, ..., M}.
/// Invariants: entries in [0, 1], sum within 1e-12 of one, first and last
/// entries strictly positive. Interior zeros are kept.
class Pmf {
 public:
  Pmf() = default;
  /// Validates the invariants above; throws InputError otherwise.
  Pmf(std::int64_t support_min, std::vector<double> probs);

  /// Normalizes non-negative weights and trims zero mass at both ends.
  static Pmf from_weights(std::int64_t support_min, std::span<const double> weights);
  static Pmf from_weights(std::int64_t support_min, std::initializer_list<double> weights);

  std::int64_t support_min() const noexcept { return m_; }
  std::int64_t support_max() const noexcept {
    return m_ + static_cast<std::int64_t>(probs_.size()) - 1;
  }
  std::size_t size() const noexcept { return probs_.size(); }
  const std::vector<double>& probs() const noexcept { return probs_; }

  /// p(j), zero outside the support.
  double operator()(std::int64_t j) const noexcept;

  friend bool operator==(const Pmf&, const Pmf&) = default;

 protected:
  std::int64_t m_ = 0;
  std::vector<double> probs_;
};

/// Normalized frequency vector of a CountSample; keeps the counts so that
/// probabilities can be re-derived exactly.
class EmpiricalPmf : public Pmf {
 public:
  std::int64_t n() const noexcept { return n_; }
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

  friend EmpiricalPmf build_empirical_pmf(const CountSample& sample);
  friend bool operator==(const EmpiricalPmf&, const EmpiricalPmf&) = default;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t n_ = 0;
};

EmpiricalPmf build_empirical_pmf(const CountSample& sample);

/// The index set S_k = {m, ..., M - k} on which k-th differences live.
struct DiffSupport {
  std::int64_t first = 0;
  std::int64_t last = 0;
  int k = 1;

  std::size_t size() const noexcept { return static_cast<std::size_t>(last - first + 1); }
  bool contains(std::int64_t j) const noexcept { return j >= first && j <= last; }
};

/// Throws InputError("support too short for degree k") when M - m < k.
DiffSupport diff_support(const Pmf& p, int k);

/// Sorted, duplicate-free set of absolute support indices.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<std::int64_t> members);
  explicit IndexSet(std::vector<std::int64_t> members);

  static IndexSet all_of(const DiffSupport& s);

  const std::vector<std::int64_t>& members() const noexcept { return members_; }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(std::int64_t j) const noexcept;
  bool is_subset_of(const IndexSet& other) const;
  /// Members of `s` not in this set.
  IndexSet complement_in(const DiffSupport& s) const;

  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::int64_t> members_;
};

/// Signed k-th differences d(i) = sum_l (-1)^l C(k, l) v(i + l), for
/// i = 0, ..., len - 1 - k. Throws InputError when len < k + 1.
std::vector<double> forward_difference(std::span<const double> v, int k);

/// (nabla^k p(j)) for j in S_k, i.e. (-1)^k Delta^k p(j).
std::vector<double> forward_difference(const Pmf& p, int k);

/// min over S_k of nabla^k p(j); p is k-monotone iff this is >= 0.
double rho_k(const Pmf& p, int k);

/// Indices in S_k where nabla^k p(j) is within `tol` of rho_k. Never empty.
IndexSet argmin_set(const Pmf& p, int k, double tol = 1e-12);

/// Binomial coefficient as a double; exact for the small k used here.
double binomial_coefficient(int k, int i);

}  // namespace kmono
