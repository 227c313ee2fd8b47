// surprise: solve, evaluate, verify and simulate the surprise allocation problem.
//
//   surprise solve    --days 5 [--format csv|json]
//   surprise table    --days 2..6 [--format csv|json]
//   surprise eval     --input dist.json [--format csv|json]
//   surprise verify   --days 2..8 [--grid 1000] [--tol 1e-6] [--seed 42]
//   surprise simulate --days 3 --samples 1000000 --seed 42

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "surprise/cli.hpp"

namespace {

using surprise::cli::CommandResult;
using surprise::cli::OutputFormat;

int emit(const CommandResult& result) {
  std::cout << result.out << std::flush;
  std::cerr << result.err << std::flush;
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = surprise::cli;

  CLI::App app{"Closed-form solver and numerical verifier for surprise maximization"};
  app.require_subcommand(1);

  std::string days_text;
  std::string format_text = "csv";
  std::string input_path;
  std::optional<long long> grid;
  long long samples = 1'000'000;
  std::uint64_t seed = 42;
  double tol = 1e-6;

  auto* solve = app.add_subcommand("solve", "Optimal policy table for m days");
  auto* table = app.add_subcommand("table", "solve over a range of m");
  auto* eval = app.add_subcommand("eval", "Evaluate the objectives for a distribution file");
  auto* verify = app.add_subcommand("verify", "Check the closed form against numerical oracles");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of expected surprise");

  for (auto* sub : {solve, table, verify, simulate}) {
    sub->add_option("--days", days_text, "Number of days, or a range first..last")->required();
  }
  for (auto* sub : {solve, table, eval, verify, simulate}) {
    sub->add_option("--format", format_text, "Output format: csv or json");
  }
  eval->add_option("--input", input_path, "JSON array or one decimal per line")->required();
  verify->add_option("--grid", grid, "Lattice resolution for the exhaustive oracle (m <= 3)");
  verify->add_option("--tol", tol, "L-infinity tolerance for the ascent oracle");
  verify->add_option("--seed", seed, "Seed for random restarts");
  simulate->add_option("--samples", samples, "Number of simulated exams");
  simulate->add_option("--seed", seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  const auto format = cli::parse_format(format_text);
  if (!format) {
    std::cerr << "usage error: --format must be csv or json\n";
    return cli::kUsage;
  }

  std::optional<cli::DaysRange> days;
  if (!eval->parsed()) {
    days = cli::parse_days(days_text);
    if (!days) {
      std::cerr << "usage error: --days expects an integer or first..last, got '" << days_text
                << "'\n";
      return cli::kUsage;
    }
  }

  auto single_day = [&](const char* command) -> std::optional<long long> {
    if (days->first != days->last) {
      std::cerr << "usage error: " << command << " takes a single --days value\n";
      return std::nullopt;
    }
    return days->first;
  };

  if (solve->parsed()) {
    if (days->first != days->last) return emit(cli::run_table(*days, *format));
    return emit(cli::run_solve(days->first, *format));
  }
  if (table->parsed()) return emit(cli::run_table(*days, *format));
  if (eval->parsed()) return emit(cli::run_eval(input_path, *format));
  if (verify->parsed()) {
    cli::VerifyOptions options;
    options.days = *days;
    options.grid = grid;
    options.tol = tol;
    options.ascent.seed = seed;
    return emit(cli::run_verify(options, *format));
  }
  if (simulate->parsed()) {
    const auto m = single_day("simulate");
    if (!m) return cli::kUsage;
    return emit(cli::run_simulate(*m, samples, seed, *format));
  }
  return cli::kUsage;
}
