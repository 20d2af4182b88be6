#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coex/config.hpp"
#include "coex/engine.hpp"

namespace coex::experiment {

/// One coordinate of the sweep. NOMA points carry no b2 (the band is shared).
struct GridPoint {
  phy::Scheme scheme = phy::Scheme::Fdma;
  engine::Model model = engine::Model::FrameBased;
  source::DtmcParams dtmc;
  double distance_m = 400.0;
  std::optional<double> b2_fraction;

  /// Canonical text form; also the seed-derivation key.
  [[nodiscard]] std::string key() const;
  bool operator==(const GridPoint&) const = default;
};

/// Strict weak order used to sort rows independently of execution order.
[[nodiscard]] bool grid_less(const GridPoint& a, const GridPoint& b);

struct ResultRow {
  GridPoint point;
  std::uint32_t replication = 0;
  engine::RunResult result;
};

/// Every (scheme, model, source, distance, b2) combination of the spec.
[[nodiscard]] std::vector<GridPoint> expand_grid(const ExperimentSpec& spec);

[[nodiscard]] std::uint64_t run_seed(std::uint64_t master_seed, const GridPoint& point,
                                     std::uint32_t replication);

[[nodiscard]] engine::SimConfig config_for(const ExperimentSpec& spec, const GridPoint& point,
                                           std::uint32_t replication);

/// Runs `points` x replications with spec.parallel workers. The result is
/// sorted by (grid point, replication) and does not depend on the worker count.
[[nodiscard]] std::vector<ResultRow> run_points(const ExperimentSpec& spec,
                                                const std::vector<GridPoint>& points);

[[nodiscard]] std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean over replications
  std::uint32_t count = 0;
};

struct SummaryRow {
  GridPoint point;
  std::string policy;
  std::uint32_t replications = 0;
  Estimate tare;
  Estimate tacae;
  Estimate udc;  // over replications that delivered at least once
  Estimate throughput_bps;
  Estimate energy_efficiency_bpj;
  Estimate broadband_power_w;
  Estimate intermittent_success_rate;
};

[[nodiscard]] Estimate estimate(const std::vector<double>& samples);
[[nodiscard]] std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

/// Column names of the per-replication CSV, in order.
[[nodiscard]] const std::vector<std::string>& row_columns();
/// Column names of the per-grid-point summary CSV, in order.
[[nodiscard]] const std::vector<std::string>& summary_columns();

[[nodiscard]] std::string rows_to_csv(const std::vector<ResultRow>& rows);
[[nodiscard]] std::string summary_to_csv(const std::vector<SummaryRow>& rows);

/// Writes rows_to_csv(rows). Throws std::runtime_error if the path is unwritable
/// and InvalidParameter if rows is empty.
void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);

/// Layouts of the three intermittent-user comparison tables.
struct TableCell {
  std::string table;   // "II", "III" or "IV"
  std::string row;     // metric or distance
  std::string column;  // model / source / scheme
  std::string metric;
  Estimate value;
};

/// II: idealistic vs frame-based at the base point. III: base source vs the
/// fast source (0.2, 0.7) for both models. IV: FDMA (base b2) vs NOMA,
/// frame-based, over the distance grid.
[[nodiscard]] std::vector<TableCell> reproduce_tables(const ExperimentSpec& spec);
[[nodiscard]] std::string format_tables(const std::vector<TableCell>& cells);
[[nodiscard]] std::string tables_to_csv(const std::vector<TableCell>& cells);

/// Closed-form predictions (no randomness) for FDMA grid points.
struct AnalysisRow {
  double distance_m = 0.0;
  double b2_fraction = 0.0;
  double intermittent_success = 0.0;
  double tare_closed_form = 0.0;
  double tare_chain = 0.0;
  double tacae_chain = 0.0;
  double broadband_rate_bps = 0.0;
  double broadband_power_w = 0.0;
  double broadband_success = 0.0;
  std::optional<double> expected_frames;
  double throughput_bps = 0.0;
  std::optional<double> energy_efficiency_bpj;
};

[[nodiscard]] std::vector<AnalysisRow> analyze(const ExperimentSpec& spec);
[[nodiscard]] std::string analysis_to_csv(const std::vector<AnalysisRow>& rows);

/// Figure kinds rendered from the summary CSV by external plotting tools.
inline constexpr const char* kFigureKinds[] = {"tare_vs_b2", "tacae_vs_b2", "pareto_throughput",
                                               "pareto_ee"};

/// Summary-CSV columns a figure kind reads (grouping keys first). Throws
/// InvalidParameter for an unknown kind.
[[nodiscard]] std::vector<std::string> figure_columns(std::string_view kind);

/// Shared CSV number format: 9 significant digits.
[[nodiscard]] std::string format_number(double v);

}  // namespace coex::experiment
