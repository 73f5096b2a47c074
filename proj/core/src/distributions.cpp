#include "kmono/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "kmono/error.hpp"
#include "kmono/random.hpp"

namespace kmono {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, std::string_view what) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty())
    throw InputError("invalid " + std::string(what) + " '" + std::string(token) + "'");
  return value;
}

std::vector<double> parse_weight_list(std::string_view text) {
  std::vector<double> w;
  const auto times = text.find('x');
  if (times != std::string_view::npos) {
    const double value = parse_number<double>(text.substr(0, times), "weight");
    const auto count = parse_number<std::int64_t>(text.substr(times + 1), "repeat count");
    if (count < 1 || count > 100000) throw InputError("repeat count out of range");
    w.assign(static_cast<std::size_t>(count), value);
  } else {
    for (auto tok : split(text, ',')) w.push_back(parse_number<double>(tok, "weight"));
  }
  return w;
}

void validate(const DistributionSpec::Family& f) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, TruncPoisson>) {
          if (d.m < 0 || d.m > d.M) throw InputError("truncated Poisson needs 0 <= m <= M");
          if (!(d.lambda > 0.0) || !std::isfinite(d.lambda))
            throw InputError("truncated Poisson needs lambda > 0");
        } else if constexpr (std::is_same_v<T, TruncBinomial>) {
          if (d.m < 0 || d.m > d.M) throw InputError("truncated binomial needs 0 <= m <= M");
          if (d.trials < 1) throw InputError("truncated binomial needs trials >= 1");
          if (!(d.q > 0.0 && d.q < 1.0)) throw InputError("truncated binomial needs q in (0, 1)");
          if (d.m > d.trials) throw InputError("truncated binomial support carries no mass");
        } else if constexpr (std::is_same_v<T, TriangularMixture>) {
          if (d.weights.empty()) throw InputError("triangular mixture needs weights");
          double total = 0.0;
          for (double w : d.weights) {
            if (!(w >= 0.0)) throw InputError("mixture weights must be non-negative");
            total += w;
          }
          if (std::abs(total - 1.0) > 1e-9) throw InputError("mixture weights must sum to one");
        } else {
          if (d.m < 0) throw InputError("explicit weights need m >= 0");
          if (d.weights.empty()) throw InputError("explicit weights are empty");
          for (double w : d.weights)
            if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("weights must be non-negative");
        }
      },
      f);
}

// Shortest text that parses back to the same double.
std::string format_double(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

DistributionSpec::DistributionSpec(Family family) : family_(std::move(family)) { validate(family_); }

DistributionSpec DistributionSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InputError("distribution spec needs a family prefix");
  const auto family = text.substr(0, colon);
  const auto parts = split(text.substr(colon + 1), ':');
  if (family == "tpois") {
    if (parts.size() != 3) throw InputError("expected tpois:m:M:lambda");
    return DistributionSpec(TruncPoisson{parse_number<std::int64_t>(parts[0], "m"),
                                         parse_number<std::int64_t>(parts[1], "M"),
                                         parse_number<double>(parts[2], "lambda")});
  }
  if (family == "tbinom") {
    if (parts.size() != 4) throw InputError("expected tbinom:m:M:trials:q");
    return DistributionSpec(TruncBinomial{parse_number<std::int64_t>(parts[0], "m"),
                                          parse_number<std::int64_t>(parts[1], "M"),
                                          parse_number<int>(parts[2], "trials"),
                                          parse_number<double>(parts[3], "q")});
  }
  if (family == "tmix") {
    if (parts.size() != 1) throw InputError("expected tmix:w1,w2,... or tmix:wxR");
    return DistributionSpec(TriangularMixture{parse_weight_list(parts[0])});
  }
  if (family == "weights") {
    if (parts.size() != 2) throw InputError("expected weights:m:w1,w2,...");
    return DistributionSpec(
        ExplicitWeights{parse_number<std::int64_t>(parts[0], "m"), parse_weight_list(parts[1])});
  }
  throw InputError("unknown distribution family '" + std::string(family) + "'");
}

std::string DistributionSpec::to_string() const {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        auto join = [](const std::vector<double>& w) {
          if (w.size() > 1 && std::all_of(w.begin(), w.end(), [&](double x) { return x == w.front(); }))
            return format_double(w.front()) + "x" + std::to_string(w.size());
          std::string s;
          for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + format_double(w[i]);
          return s;
        };
        if constexpr (std::is_same_v<T, TruncPoisson>) {
          return "tpois:" + std::to_string(d.m) + ":" + std::to_string(d.M) + ":" +
                 format_double(d.lambda);
        } else if constexpr (std::is_same_v<T, TruncBinomial>) {
          return "tbinom:" + std::to_string(d.m) + ":" + std::to_string(d.M) + ":" +
                 std::to_string(d.trials) + ":" + format_double(d.q);
        } else if constexpr (std::is_same_v<T, TriangularMixture>) {
          return "tmix:" + join(d.weights);
        } else {
          return "weights:" + std::to_string(d.m) + ":" + join(d.weights);
        }
      },
      family_);
}

Pmf triangular(int r) {
  if (r < 1) throw InputError("triangular law needs r >= 1");
  std::vector<double> p(static_cast<std::size_t>(r));
  const double denom = static_cast<double>(r) * static_cast<double>(r + 1);
  for (int i = 0; i < r; ++i) p[static_cast<std::size_t>(i)] = 2.0 * (r - i) / denom;
  return Pmf::from_weights(0, p);
}

Pmf pmf(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& d) -> Pmf {
        using T = std::decay_t<decltype(d)>;
        std::vector<double> logw;
        std::int64_t m = 0;
        if constexpr (std::is_same_v<T, TruncPoisson>) {
          m = d.m;
          for (std::int64_t j = d.m; j <= d.M; ++j)
            logw.push_back(static_cast<double>(j) * std::log(d.lambda) -
                           std::lgamma(static_cast<double>(j) + 1.0));
        } else if constexpr (std::is_same_v<T, TruncBinomial>) {
          m = d.m;
          const std::int64_t top = std::min<std::int64_t>(d.M, d.trials);
          const double r = d.trials;
          for (std::int64_t j = d.m; j <= top; ++j) {
            const double x = static_cast<double>(j);
            logw.push_back(std::lgamma(r + 1.0) - std::lgamma(x + 1.0) - std::lgamma(r - x + 1.0) +
                           x * std::log(d.q) + (r - x) * std::log1p(-d.q));
          }
        } else if constexpr (std::is_same_v<T, TriangularMixture>) {
          std::vector<double> p(d.weights.size(), 0.0);
          for (std::size_t idx = 0; idx < d.weights.size(); ++idx) {
            const double r = static_cast<double>(idx + 1);
            for (std::size_t i = 0; i <= idx; ++i)
              p[i] += d.weights[idx] * 2.0 * (r - static_cast<double>(i)) / (r * (r + 1.0));
          }
          return Pmf::from_weights(0, p);
        } else {
          return Pmf::from_weights(d.m, d.weights);
        }
        const double top = *std::max_element(logw.begin(), logw.end());
        std::vector<double> w(logw.size());
        std::transform(logw.begin(), logw.end(), w.begin(),
                       [top](double lw) { return std::exp(lw - top); });
        return Pmf::from_weights(m, w);
      },
      spec.family());
}

ShapeFlags classify(const DistributionSpec& spec, double tol) {
  const Pmf p = pmf(spec);
  ShapeFlags f;
  if (p.size() >= 2) {
    f.rho1 = rho_k(p, 1);
    f.monotone = f.rho1 >= -tol;
  } else {
    f.monotone = true;
  }
  if (p.size() >= 3) {
    f.rho2 = rho_k(p, 2);
    f.convex = f.rho2 >= -tol;
  } else {
    f.convex = true;
  }
  return f;
}

CountSample sample_iid(const Pmf& p, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw InputError("sample size must be positive");
  std::vector<double> cdf(p.size());
  std::partial_sum(p.probs().begin(), p.probs().end(), cdf.begin());
  cdf.back() = 1.0;
  Engine engine = make_engine(seed, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<std::int64_t, std::int64_t>> table(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) table[i] = {p.support_min() + static_cast<std::int64_t>(i), 0};
  for (std::int64_t t = 0; t < n; ++t) {
    const double u = unif(engine);
    const auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    ++table[std::min(idx, cdf.size() - 1)].second;
  }
  return CountSample::from_frequencies(table);
}

CountSample sample_iid(const DistributionSpec& spec, std::int64_t n, std::uint64_t seed) {
  return sample_iid(pmf(spec), n, seed);
}

}  // namespace kmono
