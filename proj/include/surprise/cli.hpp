#pragma once

// Command implementations behind the `surprise` executable. Every command
// returns its stdout text, stderr text and exit code so that it can be driven
// in-process as well as from the shell.
//
// Exit codes: 0 success, 1 usage error, 2 verification mismatch, 3 input parse error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "surprise/dp_solver.hpp"
#include "surprise/errors.hpp"
#include "surprise/format.hpp"
#include "surprise/objective.hpp"
#include "surprise/oracle.hpp"
#include "surprise/simulator.hpp"

namespace surprise::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kMismatch = 2, kParseError = 3 };

enum class OutputFormat { kCsv, kJson };

struct CommandResult {
  int exit_code = kOk;
  std::string out;
  std::string err;
};

// Malformed distribution input; the message names the offending line or element.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct DaysRange {
  long long first = 1;
  long long last = 1;
};

inline std::optional<OutputFormat> parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "json") return OutputFormat::kJson;
  return std::nullopt;
}

namespace detail {

inline std::optional<long long> parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  long long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

inline CommandResult usage(const std::string& message) {
  return CommandResult{kUsage, "", "usage error: " + message + "\n"};
}

using Json = nlohmann::ordered_json;

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// JSON has no inf/nan; those render as null.
inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json objective_json(const ObjectiveValue& o) {
  Json j;
  j["sm1"] = o.sm1;
  j["sm2"] = o.sm2;
  j["expected_surprise"] = o.expected_surprise;
  return j;
}

}  // namespace detail

// "<int>" or "<first>..<last>".
inline std::optional<DaysRange> parse_days(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    const auto m = detail::parse_int(text);
    if (!m) return std::nullopt;
    return DaysRange{*m, *m};
  }
  const auto first = detail::parse_int(text.substr(0, dots));
  const auto last = detail::parse_int(text.substr(dots + 2));
  if (!first || !last) return std::nullopt;
  return DaysRange{*first, *last};
}

// ---------------------------------------------------------------------------
// Rendering

inline constexpr std::string_view kPolicyHeader = "j,gamma,hazard,p,remaining_before";

inline std::string policy_csv_row(const PolicyRow& row) {
  return std::to_string(row.day) + "," + shortest_repr(row.gamma) + "," +
         shortest_repr(row.hazard) + "," + shortest_repr(row.allocation) + "," +
         shortest_repr(row.remaining_before);
}

inline std::string render_policy_csv(const SolveResult& result) {
  std::string out(kPolicyHeader);
  out += "\n";
  for (const auto& row : result.policy) out += policy_csv_row(row) + "\n";
  return out;
}

inline detail::Json solve_json(const SolveResult& result) {
  detail::Json j;
  j["m"] = result.policy.size();
  j["gamma0"] = result.gamma[0];
  detail::Json gammas = detail::Json::array();
  for (std::size_t i = 1; i <= result.gamma.days(); ++i) gammas.push_back(result.gamma[i]);
  j["gamma"] = std::move(gammas);
  detail::Json p = detail::Json::array();
  for (const auto& row : result.policy) p.push_back(row.allocation);
  j["p"] = std::move(p);
  j["objective"] = detail::objective_json(result.objective);
  j["value_at_root"] = result.value_at_root;
  return j;
}

inline std::string render_solve(const SolveResult& result, OutputFormat format) {
  if (format == OutputFormat::kJson) return detail::dump(solve_json(result));
  return render_policy_csv(result);
}

// ---------------------------------------------------------------------------
// Distribution input

// JSON array when the first non-whitespace byte is '[', otherwise one decimal per line.
inline ProbabilityVector parse_distribution(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError("input is empty");

  std::vector<double> values;
  if (text[first] == '[') {
    detail::Json doc;
    try {
      doc = detail::Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("JSON input must be an array of numbers");
    std::size_t index = 0;
    for (const auto& item : doc) {
      ++index;
      if (!item.is_number()) {
        throw ParseError("element " + std::to_string(index) + " is not a number");
      }
      values.push_back(item.get<double>());
    }
  } else {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      const auto line = text.substr(pos, end - pos);
      ++line_no;
      pos = end + 1;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      const auto value = parse_double(line);
      if (!value) {
        throw ParseError("line " + std::to_string(line_no) + ": '" + std::string(line) +
                         "' is not a decimal number");
      }
      values.push_back(*value);
    }
  }
  try {
    return ProbabilityVector(std::move(values));
  } catch (const InvalidDistribution& e) {
    throw ParseError(e.what());
  }
}

inline ProbabilityVector read_distribution_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_distribution(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Commands

inline CommandResult run_solve(long long days, OutputFormat format) {
  if (days < 1) return detail::usage("--days must be >= 1, got " + std::to_string(days));
  return CommandResult{kOk, render_solve(rollout(DaysCount(days)), format), ""};
}

// solve over an inclusive range of m. CSV gains a leading `m` column.
inline CommandResult run_table(DaysRange range, OutputFormat format) {
  if (range.first < 1 || range.last < range.first) {
    return detail::usage("--days range must satisfy 1 <= first <= last");
  }
  if (format == OutputFormat::kJson) {
    detail::Json all = detail::Json::array();
    for (long long m = range.first; m <= range.last; ++m) {
      all.push_back(solve_json(rollout(DaysCount(m))));
    }
    return CommandResult{kOk, detail::dump(all), ""};
  }
  std::string out = "m," + std::string(kPolicyHeader) + "\n";
  for (long long m = range.first; m <= range.last; ++m) {
    const auto result = rollout(DaysCount(m));
    for (const auto& row : result.policy) {
      out += std::to_string(m) + "," + policy_csv_row(row) + "\n";
    }
  }
  return CommandResult{kOk, out, ""};
}

inline std::string render_eval(const ProbabilityVector& p, OutputFormat format) {
  const auto objective = evaluate(p);
  const auto tail = tail_masses(p);
  if (format == OutputFormat::kJson) {
    detail::Json j;
    j["m"] = p.size();
    j["p"] = std::vector<double>(p.begin(), p.end());
    j["tail_masses"] = tail;
    j["objective"] = detail::objective_json(objective);
    return detail::dump(j);
  }
  std::string out = "sm1,sm2,expected_surprise\n";
  out += shortest_repr(objective.sm1) + "," + shortest_repr(objective.sm2) + "," +
         shortest_repr(objective.expected_surprise) + "\n\nj,p,tail_mass\n";
  for (std::size_t j = 0; j < p.size(); ++j) {
    out += std::to_string(j + 1) + "," + shortest_repr(p[j]) + "," + shortest_repr(tail[j]) + "\n";
  }
  return out;
}

inline CommandResult run_eval(const std::string& path, OutputFormat format) {
  if (path.empty()) return detail::usage("eval requires --input <path>");
  try {
    return CommandResult{kOk, render_eval(read_distribution_file(path), format), ""};
  } catch (const ParseError& e) {
    return CommandResult{kParseError, "", std::string("parse error: ") + e.what() + "\n"};
  }
}

struct VerifyOptions {
  DaysRange days;
  std::optional<long long> grid;  // lattice resolution; grid rows only when set
  double tol = 1e-6;               // ascent L-infinity agreement
  AscentConfig ascent;
};

struct VerifyCheck {
  std::string m;  // day count, or "all" for summary rows
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Largest m for which grid rows are produced.
inline constexpr long long kMaxGridDays = 3;

inline std::vector<VerifyCheck> verify_checks(const VerifyOptions& options) {
  std::vector<VerifyCheck> checks;
  auto add = [&](long long m, std::string name, double value, double tolerance) {
    checks.push_back({std::to_string(m), std::move(name), value, tolerance, value <= tolerance});
  };

  double max_gap = 0.0;
  for (long long m = options.days.first; m <= options.days.last; ++m) {
    const DaysCount days(m);
    const auto solution = rollout(days);
    const auto& gamma = solution.gamma;
    const auto p = ProbabilityVector(solution.allocations());

    AscentConfig ascent = options.ascent;
    ascent.agreement_tol = options.tol;
    const auto report = ascent_optimize(days, ascent);
    max_gap = std::max(max_gap, report.linf_gap);
    checks.push_back({std::to_string(m), "ascent_linf_gap", report.linf_gap, options.tol,
                      report.agrees});
    add(m, "ascent_objective_gap", std::abs(report.best_value - solution.objective.sm2), 1e-10);

    if (options.grid && m >= 2 && m <= kMaxGridDays &&
        composition_count(days.value(), *options.grid) <= kMaxGridPoints) {
      const auto grid = grid_search(days, GridSpec{*options.grid, GridSense::kMinimizeSm2, {}});
      checks.push_back({std::to_string(m), "grid_linf_gap", grid.linf_gap, grid.tolerance,
                        grid.agrees});
    }

    double stationarity = 0.0;
    for (std::size_t j = 1; j < days.value(); ++j) {
      const double r = solution.policy[j - 1].remaining_before;
      stationarity = std::max(stationarity, std::abs(stationarity_residual(j, r, gamma)));
    }
    add(m, "stationarity_residual", stationarity, 1e-12);

    double telescope = 0.0;
    for (std::size_t k = 1; k <= days.value(); ++k) {
      telescope = std::max(telescope, std::abs(telescope_residual(gamma, k)));
    }
    add(m, "telescope_residual", telescope, 1e-12 * static_cast<double>(m));

    double spread = 0.0;
    if (m >= 2) {
      const auto g = gradient_sm2(p);
      const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
      spread = *hi - *lo;
    }
    add(m, "gradient_spread", spread, 1e-9);

    add(m, "value_consistency", std::abs(solution.objective.sm2 - solution.value_at_root), 1e-10);
  }
  checks.push_back({"all", "max_ascent_linf_gap", max_gap, options.tol, max_gap <= options.tol});
  return checks;
}

inline CommandResult run_verify(const VerifyOptions& options, OutputFormat format) {
  if (options.days.first < 1 || options.days.last < options.days.first) {
    return detail::usage("--days range must satisfy 1 <= first <= last");
  }
  if (options.grid && *options.grid < 2) return detail::usage("--grid must be >= 2");
  if (!(options.tol > 0.0)) return detail::usage("--tol must be positive");

  const auto checks = verify_checks(options);

  CommandResult result;
  if (format == OutputFormat::kJson) {
    detail::Json rows = detail::Json::array();
    for (const auto& c : checks) {
      detail::Json row;
      row["m"] = c.m;
      row["check"] = c.name;
      row["value"] = detail::number(c.value);
      row["tolerance"] = c.tolerance;
      row["pass"] = c.pass;
      rows.push_back(std::move(row));
    }
    detail::Json doc;
    doc["checks"] = std::move(rows);
    doc["passed"] = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
    result.out = detail::dump(doc);
  } else {
    result.out = "m,check,value,tolerance,status\n";
    for (const auto& c : checks) {
      result.out += c.m + "," + c.name + "," + shortest_repr(c.value) + "," +
                    shortest_repr(c.tolerance) + "," + (c.pass ? "pass" : "FAIL") + "\n";
    }
  }

  const auto failure = std::find_if(checks.begin(), checks.end(), [](const auto& c) { return !c.pass; });
  if (failure != checks.end()) {
    result.exit_code = kMismatch;
    result.err = "verification failed: m=" + failure->m + " check=" + failure->name +
                 " value=" + shortest_repr(failure->value) +
                 " tolerance=" + shortest_repr(failure->tolerance) + "\n";
  }
  return result;
}

inline CommandResult run_simulate(long long days, long long samples, std::uint64_t seed,
                                  OutputFormat format) {
  if (days < 1) return detail::usage("--days must be >= 1, got " + std::to_string(days));
  if (samples < 1) return detail::usage("--samples must be >= 1");

  const auto solution = rollout(DaysCount(days));
  const ProbabilityVector p(solution.allocations());
  const auto sim = estimate_expected_surprise(
      p, SimulationConfig{static_cast<std::uint64_t>(samples), seed});
  const double analytic = solution.gamma[0] - 1.0;
  const double diff = sim.mean - analytic;
  double z_gap = 0.0;
  if (sim.std_error > 0.0) {
    z_gap = diff / sim.std_error;
  } else if (diff != 0.0) {
    z_gap = std::copysign(std::numeric_limits<double>::infinity(), diff);
  }

  if (format == OutputFormat::kJson) {
    detail::Json j;
    j["m"] = days;
    j["samples"] = sim.samples;
    j["seed"] = sim.seed;
    j["mean"] = sim.mean;
    j["std_error"] = sim.std_error;
    j["analytic"] = analytic;
    j["z_gap"] = detail::number(z_gap);
    j["signed_mean"] = 0.0 - sim.mean;
    return CommandResult{kOk, detail::dump(j), ""};
  }
  std::string out = "m,samples,seed,mean,std_error,analytic,z_gap,signed_mean\n";
  out += std::to_string(days) + "," + std::to_string(sim.samples) + "," + std::to_string(sim.seed) +
         "," + shortest_repr(sim.mean) + "," + shortest_repr(sim.std_error) + "," +
         shortest_repr(analytic) + "," + shortest_repr(z_gap) + "," + shortest_repr(0.0 - sim.mean) +
         "\n";
  return CommandResult{kOk, out, ""};
}

}  // namespace surprise::cli
