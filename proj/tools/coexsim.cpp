// coexsim: command-line front end for the coexistence simulator.
#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "coex/config.hpp"
#include "coex/experiment.hpp"

namespace {

using namespace coex;
namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::uint32_t> parallel;
  std::optional<std::uint64_t> frames;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_parallel) {
  cmd->add_option("--config", o.config, "Configuration file (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.out, "Output CSV path (stdout when omitted)");
  cmd->add_option("--frames", o.frames, "Horizon override in frames")->check(CLI::PositiveNumber);
  if (with_parallel)
    cmd->add_option("--parallel", o.parallel, "Worker threads")->check(CLI::PositiveNumber);
}

experiment::ExperimentSpec load(const CommonOptions& o) {
  experiment::ExperimentSpec spec =
      o.config.empty() ? experiment::ExperimentSpec{} : experiment::parse_config(o.config);
  if (o.seed) spec.base.seed = *o.seed;
  if (o.frames) spec.base.frame.horizon_frames = *o.frames;
  if (o.parallel) spec.parallel = *o.parallel;
  spec.validate();
  return spec;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f.flush()) throw std::runtime_error("write to " + path + " failed");
}

fs::path summary_path_for(const fs::path& out) {
  fs::path p = out;
  p.replace_filename(out.stem().string() + "_summary" + out.extension().string());
  return p;
}

int cmd_simulate(const CommonOptions& o) {
  const auto spec = load(o);
  const auto& base = spec.base;
  experiment::GridPoint point{base.band.scheme, base.model, base.dtmc,
                              base.intermittent_link.distance_m, std::nullopt};
  if (base.band.scheme == phy::Scheme::Fdma) point.b2_fraction = spec.b2_fraction;
  const std::vector<experiment::ResultRow> rows{{point, 0, engine::run(base)}};
  write_text(experiment::rows_to_csv(rows), o.out);
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::string& summary) {
  if (o.out.empty()) throw CLI::ValidationError("--out", "sweep needs an output path");
  const auto spec = load(o);
  const auto rows = experiment::run_experiment(spec);
  experiment::emit_csv(rows, o.out);
  const fs::path summary_path = summary.empty() ? summary_path_for(o.out) : fs::path(summary);
  experiment::emit_summary_csv(experiment::summarize(rows), summary_path);
  std::cerr << "wrote " << rows.size() << " rows to " << o.out << " and summary to "
            << summary_path.string() << "\n";
  return 0;
}

int cmd_analyze(const CommonOptions& o) {
  const auto spec = load(o);
  write_text(experiment::analysis_to_csv(experiment::analyze(spec)), o.out);
  return 0;
}

int cmd_tables(const CommonOptions& o) {
  const auto spec = load(o);
  const auto cells = experiment::reproduce_tables(spec);
  std::cout << experiment::format_tables(cells);
  if (!o.out.empty()) write_text(experiment::tables_to_csv(cells), o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Broadband / intermittent uplink coexistence simulator"};
  app.require_subcommand(1);

  CommonOptions simulate_opts, sweep_opts, analyze_opts, tables_opts;
  std::string summary;

  auto* simulate = app.add_subcommand("simulate", "Run the base configuration once");
  add_common(simulate, simulate_opts, false);
  auto* sweep = app.add_subcommand("sweep", "Run the configured grid with replications");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--summary", summary, "Summary CSV path (default: <out>_summary.csv)");
  auto* analyze = app.add_subcommand("analyze", "Closed-form predictions over the grid, no randomness");
  add_common(analyze, analyze_opts, false);
  auto* tables = app.add_subcommand("tables", "Reproduce the TARE/TACAE/UDC comparison tables");
  add_common(tables, tables_opts, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(simulate_opts);
    if (*sweep) return cmd_sweep(sweep_opts, summary);
    if (*analyze) return cmd_analyze(analyze_opts);
    if (*tables) return cmd_tables(tables_opts);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "coexsim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
