#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coex/config.hpp"
#include "coex/error.hpp"
#include "coex/experiment.hpp"

namespace {

using namespace coex;
using namespace coex::experiment;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string field; std::getline(ss, field, ',');) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

std::vector<ResultRow> three_rows() {
  ExperimentSpec s;
  s.base.frame.horizon_frames = 500;
  s.b2_grid = {0.4};
  s.distance_grid = {400.0};
  s.schemes = {phy::Scheme::Fdma};
  s.models = {engine::Model::FrameBased};
  s.replications = 3;
  return run_experiment(s);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

TEST(Csv, ThreeRowsFourLines) {
  const auto lines = lines_of(rows_to_csv(three_rows()));
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(split(lines[0]), row_columns());
  for (const auto& l : lines) EXPECT_EQ(split(l).size(), row_columns().size()) << l;
}

TEST(Csv, ReparseReproducesNineDigits) {
  const auto rows = three_rows();
  const auto lines = lines_of(rows_to_csv(rows));
  const auto& cols = row_columns();
  auto col = [&](const char* name) {
    return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto fields = split(lines[i + 1]);
    const auto& r = rows[i].result;
    const std::pair<const char*, double> checks[] = {
        {"tare", r.intermittent.tare},
        {"tacae", r.intermittent.tacae},
        {"throughput_bps", r.broadband.throughput_bps},
        {"broadband_power_w", r.broadband.power_w},
        {"mean_frames_per_block", r.broadband.mean_frames_per_block},
        {"energy_efficiency_bpj", *r.broadband.energy_efficiency},
    };
    for (const auto& [name, value] : checks) {
      const double parsed = std::strtod(fields[col(name)].c_str(), nullptr);
      EXPECT_EQ(format_number(parsed), format_number(value)) << name;
      EXPECT_LE(std::abs(parsed - value), 5e-9 * std::abs(value)) << name;
    }
    EXPECT_EQ(std::stoull(fields[col("seed")]), r.seed);
  }
}

TEST(Csv, AbsentValuesAreEmptyFields) {
  ExperimentSpec s;
  s.base.frame.horizon_frames = 500;
  s.base.success_override = 0.0;
  s.b2_grid = {1.0};
  s.distance_grid = {400.0};
  s.schemes = {phy::Scheme::Fdma};
  s.models = {engine::Model::Idealistic};
  s.replications = 1;
  const auto lines = lines_of(rows_to_csv(run_experiment(s)));
  const auto fields = split(lines[1]);
  const auto& cols = row_columns();
  auto at = [&](const char* name) { return fields[std::find(cols.begin(), cols.end(), name) - cols.begin()]; };
  EXPECT_EQ(at("udc"), "");
  EXPECT_EQ(at("energy_efficiency_bpj"), "");
  EXPECT_EQ(at("broadband_active"), "0");
}

TEST(Csv, EmitErrors) {
  EXPECT_THROW(emit_csv({}, "/tmp/never.csv"), InvalidParameter);
  EXPECT_THROW(emit_csv(three_rows(), "/nonexistent-dir/out.csv"), std::runtime_error);
  EXPECT_THROW(emit_summary_csv({}, "/tmp/never.csv"), InvalidParameter);
}

TEST(Csv, EmitWritesRowsToCsv) {
  const auto rows = three_rows();
  const auto path = std::filesystem::temp_directory_path() / "coex_emit_test.csv";
  emit_csv(rows, path);
  EXPECT_EQ(read_file(path), rows_to_csv(rows));
  std::filesystem::remove(path);
}

TEST(Csv, GoldenMiniSweep) {
  const std::filesystem::path dir = COEX_TEST_DATA_DIR;
  const auto spec = parse_config(dir / "mini_sweep.ini");
  const auto rows = run_experiment(spec);
  EXPECT_EQ(rows_to_csv(rows), read_file(dir / "golden_mini_sweep.csv"));
  EXPECT_EQ(summary_to_csv(summarize(rows)), read_file(dir / "golden_mini_sweep_summary.csv"));
}

TEST(SummaryCsv, ColumnsAndShape) {
  const auto summary = summarize(three_rows());
  const auto lines = lines_of(summary_to_csv(summary));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(split(lines[0]), summary_columns());
  EXPECT_EQ(split(lines[1]).size(), summary_columns().size());
}

TEST(FigureSchema, EveryKindReadsSummaryColumns) {
  const auto& cols = summary_columns();
  for (const char* kind : kFigureKinds) {
    const auto need = figure_columns(kind);
    EXPECT_GE(need.size(), 6u);
    for (const auto& c : need)
      EXPECT_NE(std::find(cols.begin(), cols.end(), c), cols.end()) << kind << " needs " << c;
  }
  EXPECT_THROW((void)figure_columns("histogram"), InvalidParameter);
}

TEST(AnalysisCsv, HeaderAndRows) {
  const auto rows = analyze(ExperimentSpec{});
  const auto lines = lines_of(analysis_to_csv(rows));
  EXPECT_EQ(lines.size(), rows.size() + 1);
  EXPECT_EQ(split(lines[0]).size(), split(lines[1]).size());
}

}  // namespace
