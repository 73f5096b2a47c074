#include "kmono/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "kmono/error.hpp"

#ifndef KMONO_VERSION
#define KMONO_VERSION "0.0.0"
#endif

namespace kmono {

using nlohmann::json;

std::string tool_version() { return KMONO_VERSION; }

std::string_view to_string(InputFormat f) noexcept { return f == InputFormat::Raw ? "raw" : "freq"; }

InputFormat parse_input_format(std::string_view text) {
  if (text == "raw") return InputFormat::Raw;
  if (text == "freq") return InputFormat::Freq;
  throw InputError("unknown input format '" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::int64_t parse_count_field(std::string_view token, std::size_t line, std::string_view what) {
  token = trim(token);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
    throw InputError("line " + std::to_string(line) + ": invalid " + std::string(what) + " '" +
                     std::string(token) + "'");
  if (value < 0)
    throw InputError("line " + std::to_string(line) + ": negative " + std::string(what) + " " +
                     std::to_string(value));
  return value;
}

}  // namespace

CountSample read_counts(std::istream& in, InputFormat format) {
  std::vector<std::pair<std::int64_t, std::int64_t>> table;
  std::string raw_line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    if (format == InputFormat::Raw) {
      table.emplace_back(parse_count_field(line, line_no, "value"), 1);
    } else {
      if (!seen_data && line.rfind("value", 0) == 0) {
        seen_data = true;
        continue;
      }
      const auto comma = line.find(',');
      if (comma == std::string_view::npos)
        throw InputError("line " + std::to_string(line_no) + ": expected 'value,count'");
      auto rest = line.substr(comma + 1);
      rest = rest.substr(0, rest.find(','));
      table.emplace_back(parse_count_field(line.substr(0, comma), line_no, "value"),
                         parse_count_field(rest, line_no, "count"));
    }
    seen_data = true;
  }
  if (table.empty()) throw InputError("empty sample");
  return CountSample::from_frequencies(table);
}

CountSample ingest(const std::string& path, InputFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_counts(in, format);
}

double round_significant(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

namespace {

json index_set_json(const IndexSet& s) { return json(s.members()); }

IndexSet index_set_from(const json& j) { return IndexSet(j.get<std::vector<std::int64_t>>()); }

Tail parse_tail(const std::string& s) {
  if (s == "lower") return Tail::Lower;
  if (s == "upper") return Tail::Upper;
  throw InputError("unknown tail '" + s + "'");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

Report make_report(const CountSample& sample, const TestResult& result, std::string input_path,
                   InputFormat format) {
  Report r;
  r.tool_version = tool_version();
  r.input_path = std::move(input_path);
  r.input_format = format;
  const EmpiricalPmf p_hat = build_empirical_pmf(sample);
  for (double p : p_hat.probs()) r.p_hat.push_back(round_significant(p));
  r.result = result;
  r.result.statistic = round_significant(result.statistic);
  r.result.critical_value = round_significant(result.critical_value);
  r.result.p_value = round_significant(result.p_value);
  r.result.alpha = round_significant(result.alpha);
  r.generated_at = utc_timestamp();
  return r;
}

std::string report_to_json(const Report& report) {
  const TestResult& t = report.result;
  json sel = nullptr;
  if (t.selection) {
    sel = {{"selected", index_set_json(t.selection->selected)},
           {"method", std::string(to_string(t.selection->method_used))},
           {"fell_back_m3_to_m2", t.selection->fell_back_m3_to_m2},
           {"fell_back_m2_to_m1", t.selection->fell_back_m2_to_m1},
           {"method3_raw", index_set_json(t.selection->method3_raw)}};
  }
  json j = {
      {"tool", {{"name", "kmono"}, {"version", report.tool_version}}},
      {"input",
       {{"path", report.input_path},
        {"format", std::string(to_string(report.input_format))},
        {"n", t.n},
        {"support", {t.support_min, t.support_max}},
        {"p_hat", report.p_hat}}},
      {"config",
       {{"k", t.k},
        {"test", std::string(to_string(t.kind))},
        {"alpha", round_significant(t.alpha)},
        {"draws", t.draws},
        {"seed", t.seed}}},
      {"result",
       {{"statistic", round_significant(t.statistic)},
        {"critical_value", round_significant(t.critical_value)},
        {"p_value", round_significant(t.p_value)},
        {"reject", t.reject},
        {"tail", std::string(to_string(t.tail))},
        {"null_hypothesis", t.null_hypothesis},
        {"selection", sel},
        {"knot_estimate", index_set_json(t.knot_estimate)},
        {"degenerate_calibration", t.degenerate_calibration}}},
      {"timing", {{"generated_at", report.generated_at}, {"wall_seconds", round_significant(report.wall_seconds)}}},
  };
  return j.dump(2) + "\n";
}

Report parse_report(std::string_view text) {
  try {
    const json j = json::parse(text);
    Report r;
    r.tool_version = j.at("tool").at("version").get<std::string>();
    const json& in = j.at("input");
    r.input_path = in.at("path").get<std::string>();
    r.input_format = parse_input_format(in.at("format").get<std::string>());
    r.p_hat = in.at("p_hat").get<std::vector<double>>();
    TestResult& t = r.result;
    t.n = in.at("n").get<std::int64_t>();
    t.support_min = in.at("support").at(0).get<std::int64_t>();
    t.support_max = in.at("support").at(1).get<std::int64_t>();
    const json& cfg = j.at("config");
    t.k = cfg.at("k").get<int>();
    t.kind = parse_test_kind(cfg.at("test").get<std::string>());
    t.alpha = cfg.at("alpha").get<double>();
    t.draws = cfg.at("draws").get<int>();
    t.seed = cfg.at("seed").get<std::uint64_t>();
    const json& res = j.at("result");
    t.statistic = res.at("statistic").get<double>();
    t.critical_value = res.at("critical_value").get<double>();
    t.p_value = res.at("p_value").get<double>();
    t.reject = res.at("reject").get<bool>();
    t.tail = parse_tail(res.at("tail").get<std::string>());
    t.null_hypothesis = res.at("null_hypothesis").get<std::string>();
    if (!res.at("selection").is_null()) {
      const json& s = res.at("selection");
      SelectionOutcome sel;
      sel.selected = index_set_from(s.at("selected"));
      sel.method_used = parse_method(s.at("method").get<std::string>());
      sel.fell_back_m3_to_m2 = s.at("fell_back_m3_to_m2").get<bool>();
      sel.fell_back_m2_to_m1 = s.at("fell_back_m2_to_m1").get<bool>();
      sel.method3_raw = index_set_from(s.at("method3_raw"));
      t.selection = std::move(sel);
    }
    t.knot_estimate = index_set_from(res.at("knot_estimate"));
    t.degenerate_calibration = res.at("degenerate_calibration").get<bool>();
    r.generated_at = j.at("timing").at("generated_at").get<std::string>();
    r.wall_seconds = j.at("timing").at("wall_seconds").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

bool same_outcome(const Report& a, const Report& b) {
  Report x = a, y = b;
  x.generated_at = y.generated_at = "";
  x.wall_seconds = y.wall_seconds = 0.0;
  return report_to_json(x) == report_to_json(y);
}

StudyConfig parse_study_config(std::string_view text) {
  try {
    const json j = json::parse(text);
    StudyConfig cfg;
    const std::string profile = j.value("profile", std::string("full"));
    if (profile == "quick") {
      cfg = StudyConfig::quick({});
    } else if (profile != "full") {
      throw InputError("unknown profile '" + profile + "'");
    }
    cfg.replications = j.value("replications", cfg.replications);
    cfg.draws = j.value("draws", cfg.draws);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.workers = j.value("workers", cfg.workers);
    for (const json& s : j.at("scenarios")) {
      const DistributionSpec spec = DistributionSpec::parse(s.at("model").get<std::string>());
      std::vector<std::int64_t> ns;
      if (s.at("n").is_array()) ns = s.at("n").get<std::vector<std::int64_t>>();
      else ns.push_back(s.at("n").get<std::int64_t>());
      const int k = s.value("k", 1);
      std::vector<std::string> tests = s.value("tests", std::vector<std::string>{"i", "ii", "iii", "iv"});
      for (auto n : ns)
        for (const auto& t : tests) cfg.scenarios.push_back(Scenario{spec, n, k, parse_test_id(t)});
    }
    if (cfg.scenarios.empty()) throw InputError("study has no scenarios");
    return cfg;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed study config: ") + e.what());
  }
}

void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
  using Key = std::tuple<std::string, std::int64_t, int>;
  std::vector<Key> order;
  std::map<Key, std::map<TestId, const StudyRow*>> cells;
  for (const auto& row : rows) {
    const Key key{row.scenario.spec.to_string(), row.scenario.n, row.scenario.k};
    if (!cells.count(key)) order.push_back(key);
    cells[key][row.scenario.test] = &row;
  }
  constexpr TestId ids[] = {TestId::I, TestId::II, TestId::III, TestId::IV};
  out << "model,n,k,i,ii,iii,iv,se_i,se_ii,se_iii,se_iv,failures\n";
  for (const auto& key : order) {
    const auto& c = cells[key];
    out << '"' << std::get<0>(key) << "\"," << std::get<1>(key) << ',' << std::get<2>(key);
    char buf[32];
    for (auto id : ids) {
      out << ',';
      if (auto it = c.find(id); it != c.end()) {
        std::snprintf(buf, sizeof buf, "%.1f", it->second->percentage);
        out << buf;
      }
    }
    for (auto id : ids) {
      out << ',';
      if (auto it = c.find(id); it != c.end()) {
        std::snprintf(buf, sizeof buf, "%.2f", it->second->standard_error);
        out << buf;
      }
    }
    int failures = 0;
    for (const auto& [id, row] : c) failures += row->failures;
    out << ',' << failures << '\n';
  }
}

std::string study_manifest_json(const StudyConfig& cfg, const std::vector<StudyRow>& rows,
                                double total_seconds) {
  json scen = json::array();
  for (const auto& row : rows) {
    scen.push_back({{"model", row.scenario.spec.to_string()},
                    {"n", row.scenario.n},
                    {"k", row.scenario.k},
                    {"test", std::string(to_string(row.scenario.test))},
                    {"replications", row.replications},
                    {"rejections", row.rejections},
                    {"failures", row.failures},
                    {"percentage", round_significant(row.percentage)},
                    {"standard_error", round_significant(row.standard_error)},
                    {"wall_seconds", round_significant(row.wall_seconds)},
                    {"first_error", row.first_error}});
  }
  const json j = {{"tool", {{"name", "kmono"}, {"version", tool_version()}}},
                  {"config",
                   {{"replications", cfg.replications},
                    {"draws", cfg.draws},
                    {"alpha", cfg.alpha},
                    {"seed", cfg.seed},
                    {"workers", cfg.workers},
                    {"replication_seeds", "seed + r; calibration stream derive_seed(seed + r, 1)"}}},
                  {"rows", scen},
                  {"wall_seconds", round_significant(total_seconds)}};
  return j.dump(2) + "\n";
}

void write_draws_csv(std::ostream& out, const DrawSet& draws) {
  out << "draw\n";
  char buf[40];
  for (double x : draws.draws) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out << buf;
  }
}

void write_pmf_table(std::ostream& out, const CountSample& sample, int k) {
  const EmpiricalPmf p_hat = build_empirical_pmf(sample);
  std::vector<double> diff;
  if (static_cast<std::int64_t>(p_hat.size()) > k) diff = forward_difference(p_hat, k);
  out << "value,count,p_hat,nabla" << k << "\n";
  char buf[40];
  for (std::size_t i = 0; i < p_hat.size(); ++i) {
    out << p_hat.support_min() + static_cast<std::int64_t>(i) << ',' << p_hat.counts()[i] << ',';
    std::snprintf(buf, sizeof buf, "%.6g", p_hat.probs()[i]);
    out << buf << ',';
    if (i < diff.size()) {
      std::snprintf(buf, sizeof buf, "%.6g", diff[i]);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace kmono
