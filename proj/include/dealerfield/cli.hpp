#pragma once

// Command-line front end: simulate, tables, quotes, check and trace.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dealerfield/checks.hpp"
#include "dealerfield/config_io.hpp"
#include "dealerfield/csv.hpp"
#include "dealerfield/engine.hpp"
#include "dealerfield/metrics.hpp"
#include "dealerfield/presets.hpp"
#include "dealerfield/quoting.hpp"

namespace dealerfield::cli {

namespace fs = std::filesystem;

/// DEALERFIELD_THREADS caps ensemble parallelism; 0 or unset means auto.
inline std::size_t threads_from_env() {
  const char* raw = std::getenv("DEALERFIELD_THREADS");
  if (!raw || !*raw) return 0;
  try {
    return static_cast<std::size_t>(std::stoul(raw));
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("DEALERFIELD_THREADS must be a non-negative integer, got '") +
                                raw + "'");
  }
}

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  bool trace = false;
  bool alt_denominator = false;
};

inline std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::IoError("cannot write '" + path.string() + "'");
  return out;
}

/// Config from --config or --preset, with --runs / --seed / flags applied.
inline SimConfig resolve_config(const CommonArgs& args, const char* fallback_preset = "table1") {
  SimConfig config;
  if (!args.config_path.empty() && !args.preset.empty())
    throw std::invalid_argument("use either --config or --preset, not both");
  if (!args.config_path.empty())
    config = io::parse_config(args.config_path);
  else
    config = io::make_preset(args.preset.empty() ? fallback_preset : args.preset).config;
  if (args.runs) config.runs = *args.runs;
  if (args.seed) config.seed = *args.seed;
  config.flags.trace = config.flags.trace || args.trace;
  config.flags.alt_denominator = config.flags.alt_denominator || args.alt_denominator;
  return validate(std::move(config));
}

inline void write_trace(const SimConfig& config, std::uint64_t seed, const fs::path& path) {
  auto out = open_output(path);
  io::write_row(out, io::trace_header(config.n_dealers()));
  engine::simulate_run(config, seed, [&](const engine::StepTrace& st) { io::write_trace_row(out, st); });
}

inline metrics::EnsembleStats run_and_write_stats(const SimConfig& config, const fs::path& dir) {
  const auto results = engine::simulate_ensemble(config, threads_from_env());
  const auto stats = metrics::ensemble_stats(results);
  auto out = open_output(dir / "stats.csv");
  io::write_stats_csv(out, stats);
  if (stats.clamp_total > 0)
    std::cerr << "note: fill probability clamped to 1 in " << stats.clamp_total << " draws\n";
  return stats;
}

inline int cmd_simulate(const CommonArgs& args) {
  const auto config = resolve_config(args);
  const fs::path dir = args.out_dir;
  const auto stats = run_and_write_stats(config, dir);
  if (config.flags.trace) write_trace(config, engine::replication_seed(config.seed, 0), dir / "trace.csv");
  io::write_stats_csv(std::cout, stats);
  return 0;
}

inline int cmd_tables(const CommonArgs& args, const std::vector<std::string>& presets) {
  if (!args.config_path.empty()) throw std::invalid_argument("tables takes --preset, not --config");
  const auto names = presets.empty() ? io::preset_names() : presets;
  for (const auto& name : names) {
    CommonArgs one = args;
    one.preset = name;
    const auto config = resolve_config(one);
    std::cout << "# " << name << " (" << io::make_preset(name).caption << ")\n";
    const auto stats = run_and_write_stats(config, fs::path(args.out_dir) / name);
    io::write_stats_csv(std::cout, stats);
  }
  return 0;
}

inline int cmd_quotes(const CommonArgs& args, long q, std::size_t dealer) {
  const auto config = resolve_config(args);
  if (dealer < 1 || dealer > config.n_dealers())
    throw std::invalid_argument("--dealer must be between 1 and " + std::to_string(config.n_dealers()));
  const auto grid = time_grid(config.market);
  const auto& spec = config.dealers[dealer - 1];
  auto out = open_output(fs::path(args.out_dir) / "quotes.csv");
  io::write_row(out, {"t", "delta_b", "delta_a"});
  for (std::size_t l = 0; l < grid.size(); ++l) {
    const auto ctx = quoting::QuoteContext::make(spec, config.market, config.n_dealers(), q,
                                                 grid.remaining(l));
    const auto quote = quoting::optimal_quotes(ctx);
    io::write_row(out, {io::format_number(grid.time(l)), io::format_number(quote.delta_b),
                        io::format_number(quote.delta_a)});
  }
  std::cout << "wrote " << grid.size() << " quote rows to "
            << (fs::path(args.out_dir) / "quotes.csv").string() << "\n";
  return 0;
}

inline int cmd_check(const CommonArgs& args) {
  checks::CheckOptions opts;
  if (args.runs) opts.runs = *args.runs;
  if (args.seed) opts.seed = *args.seed;
  opts.threads = threads_from_env();
  opts.alt_denominator = args.alt_denominator;
  const auto rows = checks::run_checks(opts);

  auto out = open_output(fs::path(args.out_dir) / "check_report.csv");
  io::write_row(out, {"check", "expected", "actual", "tolerance", "pass"});
  bool all = true;
  for (const auto& r : rows) {
    io::write_row(out, {r.name, io::format_number(r.expected), io::format_number(r.actual),
                        io::format_number(r.tolerance), r.pass ? "1" : "0"});
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  actual=" << io::format_number(r.actual)
              << "\n";
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

inline int cmd_trace(const CommonArgs& args) {
  const auto config = resolve_config(args);
  const fs::path path = fs::path(args.out_dir) / "trace.csv";
  write_trace(config, config.seed, path);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

/// Entry point shared by the executable and the tests. Returns the exit code.
inline int run(int argc, const char* const* argv) {
  CLI::App app{"dealerfield: competitive market-making quotes and Monte Carlo experiments"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<std::string> table_presets;
  long q = 0;
  std::size_t dealer = 1;

  auto add_source = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--preset", args.preset, "named preset (table1 .. table9)");
  };
  auto add_mc = [&](CLI::App* sub) {
    sub->add_option("--runs", args.runs, "number of replications");
    sub->add_option("--seed", args.seed, "master seed (unsigned 64-bit)");
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", args.out_dir, "output directory"); };

  auto* simulate = app.add_subcommand("simulate", "run an ensemble and write stats.csv");
  add_source(simulate);
  add_mc(simulate);
  add_out(simulate);
  simulate->add_flag("--trace", args.trace, "also write trace.csv for the first replication");
  simulate->add_flag("--alt-denominator", args.alt_denominator, "ladder bracket without +gamma (comparison)");

  auto* tables = app.add_subcommand("tables", "run named presets, one stats.csv per preset");
  tables->add_option("--preset", table_presets, "preset name(s); default: all");
  add_mc(tables);
  add_out(tables);

  auto* quotes = app.add_subcommand("quotes", "write the deterministic quote schedule");
  add_source(quotes);
  add_out(quotes);
  quotes->add_option("--q", q, "inventory held at every quoting time");
  quotes->add_option("--dealer", dealer, "dealer number (1-based)");

  auto* check = app.add_subcommand("check", "run oracle and invariant checks");
  add_mc(check);
  add_out(check);
  check->add_flag("--alt-denominator", args.alt_denominator, "add bracket-form comparison rows");

  auto* trace = app.add_subcommand("trace", "single seeded run with per-step CSV");
  add_source(trace);
  trace->add_option("--seed", args.seed, "run seed");
  add_out(trace);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*simulate) return cmd_simulate(args);
    if (*tables) return cmd_tables(args, table_presets);
    if (*quotes) return cmd_quotes(args, q, dealer);
    if (*check) return cmd_check(args);
    if (*trace) return cmd_trace(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace dealerfield::cli
