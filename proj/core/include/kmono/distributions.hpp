#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kmono/pmf.hpp"

namespace kmono {

/// Poisson(lambda) restricted to {m, ..., M} and renormalized.
struct TruncPoisson {
  std::int64_t m = 0;
  std::int64_t M = 0;
  double lambda = 1.0;
};

/// Binomial(trials, q) restricted to {m, ..., M} and renormalized. Points above
/// `trials` carry no mass, so the tight support ends at min(M, trials).
struct TruncBinomial {
  std::int64_t m = 0;
  std::int64_t M = 0;
  int trials = 1;
  double q = 0.5;
};

/// sum_r pi_r T_r with T_r(i) = 2 (r - i)_+ / (r (r + 1)), r = 1, ..., M + 1.
struct TriangularMixture {
  std::vector<double> weights;  // pi_1, ..., pi_{M+1}
};

/// Explicit (unnormalized) weights on {m, m + 1, ...}.
struct ExplicitWeights {
  std::int64_t m = 0;
  std::vector<double> weights;
};

/// Parametric law for the simulation study. Text form (used by the CLI and
/// study configs):
///   tpois:m:M:lambda       e.g. tpois:0:4:1.0
///   tbinom:m:M:trials:q    e.g. tbinom:0:9:4:0.5
///   tmix:w1,w2,...         or tmix:wxR for R equal weights, e.g. tmix:0.1x10
///   weights:m:w1,w2,...    e.g. weights:0:5,5,5,4,4,3,2,1,1,1
class DistributionSpec {
 public:
  using Family = std::variant<TruncPoisson, TruncBinomial, TriangularMixture, ExplicitWeights>;

  DistributionSpec(Family family);  // NOLINT(google-explicit-constructor)

  /// Throws InputError on malformed text or invalid parameters.
  static DistributionSpec parse(std::string_view text);

  const Family& family() const noexcept { return family_; }
  /// Canonical text form; parse(to_string()) reproduces the spec.
  std::string to_string() const;

 private:
  Family family_;
};

/// Triangular p.m.f. T_r on {0, ..., r - 1}.
Pmf triangular(int r);

/// Exact normalized p.m.f.; log-space evaluation for the Poisson and binomial families.
Pmf pmf(const DistributionSpec& spec);

struct ShapeFlags {
  bool monotone = false;   // rho_1 >= -tol
  bool convex = false;     // rho_2 >= -tol
  double rho1 = 0.0;
  double rho2 = 0.0;
};

/// Sign classification of rho_1 and rho_2 on the exact p.m.f. Differences
/// within `tol` of zero count as zero.
ShapeFlags classify(const DistributionSpec& spec, double tol = 1e-12);

/// n i.i.d. draws by inverse-CDF lookup (binary search on cumulative weights).
CountSample sample_iid(const DistributionSpec& spec, std::int64_t n, std::uint64_t seed);
CountSample sample_iid(const Pmf& p, std::int64_t n, std::uint64_t seed);

}  // namespace kmono
