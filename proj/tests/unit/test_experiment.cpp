#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "coex/error.hpp"
#include "coex/experiment.hpp"

namespace {

using namespace coex;
using namespace coex::experiment;

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.base.frame.horizon_frames = 1000;
  s.b2_grid = {0.2, 0.7};
  s.distance_grid = {100.0, 400.0};
  s.replications = 2;
  return s;
}

TEST(ExpandGrid, DefaultGridSize) {
  const auto points = expand_grid(ExperimentSpec{});
  // FDMA: 2 models x 3 distances x 10 b2 values; NOMA: 2 models x 3 distances.
  EXPECT_EQ(points.size(), 66u);
  for (const auto& p : points) EXPECT_EQ(p.b2_fraction.has_value(), p.scheme == phy::Scheme::Fdma);
}

TEST(ExpandGrid, SourcesMultiplyTheGrid) {
  auto s = small_spec();
  s.sources = {{0.1, 0.15}, {0.2, 0.7}};
  EXPECT_EQ(expand_grid(s).size(), 2 * expand_grid(small_spec()).size());
}

TEST(GridPoint, KeysAreDistinct) {
  const auto points = expand_grid(ExperimentSpec{});
  std::vector<std::string> keys;
  for (const auto& p : points) keys.push_back(p.key());
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(std::adjacent_find(keys.begin(), keys.end()), keys.end());
}

TEST(RunExperiment, SinglePointEqualsDirectRun) {
  ExperimentSpec s = small_spec();
  s.b2_grid = {0.4};
  s.distance_grid = {400.0};
  s.schemes = {phy::Scheme::Fdma};
  s.models = {engine::Model::FrameBased};
  s.replications = 1;
  const auto rows = run_experiment(s);
  ASSERT_EQ(rows.size(), 1u);
  engine::SimConfig direct = s.base;
  direct.seed = run_seed(s.base.seed, rows[0].point, 0);
  const auto r = engine::run(direct);
  EXPECT_EQ(rows[0].result.intermittent.tare, r.intermittent.tare);
  EXPECT_EQ(rows[0].result.broadband.throughput_bps, r.broadband.throughput_bps);
  EXPECT_EQ(rows[0].result.config, direct);
}

TEST(RunExperiment, GridOrderDoesNotChangeRows) {
  auto a = small_spec();
  auto b = a;
  std::reverse(b.b2_grid.begin(), b.b2_grid.end());
  std::reverse(b.distance_grid.begin(), b.distance_grid.end());
  std::reverse(b.schemes.begin(), b.schemes.end());
  std::reverse(b.models.begin(), b.models.end());
  EXPECT_EQ(rows_to_csv(run_experiment(a)), rows_to_csv(run_experiment(b)));
}

TEST(RunExperiment, WorkerCountDoesNotChangeRows) {
  auto a = small_spec();
  auto b = a;
  b.parallel = 3;
  EXPECT_EQ(rows_to_csv(run_experiment(a)), rows_to_csv(run_experiment(b)));
}

TEST(RunExperiment, ReplicationsUseDistinctSeeds) {
  const auto rows = run_experiment(small_spec());
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[0].point, rows[1].point);
  EXPECT_NE(rows[0].result.seed, rows[1].result.seed);
}

TEST(RunPoints, ErrorsNameTheGridPoint) {
  auto s = small_spec();
  GridPoint bad{phy::Scheme::Fdma, engine::Model::FrameBased, {0.1, 0.15}, -5.0, 0.4};
  try {
    (void)run_points(s, {bad});
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("distance_m=-5"), std::string::npos) << msg;
    EXPECT_NE(msg.find("distance_m must be > 0"), std::string::npos) << msg;
  }
}

TEST(Summarize, MeanAndStandardError) {
  const auto e = estimate({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(e.count, 4u);
  EXPECT_EQ(estimate({7.0}).std_error, 0.0);
  EXPECT_EQ(estimate({}).count, 0u);
}

TEST(Summarize, OneRowPerGridPoint) {
  const auto s = small_spec();
  const auto rows = run_experiment(s);
  const auto summary = summarize(rows);
  EXPECT_EQ(summary.size(), expand_grid(s).size());
  for (const auto& row : summary) {
    EXPECT_EQ(row.replications, s.replications);
    EXPECT_EQ(row.policy, "semantics_aware");
  }
}

// Mean TARE does not increase with the intermittent share of the band,
// except for differences inside the replication noise.
TEST(Sweep, TareNonincreasingInB2) {
  ExperimentSpec s;
  s.base.frame.horizon_frames = 20000;
  s.schemes = {phy::Scheme::Fdma};
  s.models = {engine::Model::FrameBased};
  s.distance_grid = {400.0};
  s.replications = 5;
  const auto summary = summarize(run_experiment(s));
  ASSERT_EQ(summary.size(), s.b2_grid.size());
  for (std::size_t i = 1; i < summary.size(); ++i) {
    const auto& a = summary[i - 1].tare;
    const auto& b = summary[i].tare;
    EXPECT_LE(b.mean, a.mean + 3.0 * std::hypot(a.std_error, b.std_error)) << i;
  }
  EXPECT_GT(summary.front().tare.mean, summary.back().tare.mean);
}

TEST(Tables, LayoutAndCounts) {
  ExperimentSpec s;
  s.base.frame.horizon_frames = 1000;
  s.base.success_override = 0.62;
  s.replications = 2;
  const auto cells = reproduce_tables(s);
  std::size_t ii = 0, iii = 0, iv = 0;
  for (const auto& c : cells) {
    ii += c.table == "II";
    iii += c.table == "III";
    iv += c.table == "IV";
    EXPECT_EQ(c.value.count, 2u) << c.table << c.row << c.column;
  }
  EXPECT_EQ(ii, 6u);
  EXPECT_EQ(iii, 12u);
  EXPECT_EQ(iv, 12u);
  const auto text = format_tables(cells);
  EXPECT_NE(text.find("Table IV"), std::string::npos);
  const auto csv = tables_to_csv(cells);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(cells.size() + 1));
}

TEST(Analyze, ClosedFormsOverGrid) {
  ExperimentSpec s;
  const auto rows = analyze(s);
  ASSERT_EQ(rows.size(), s.distance_grid.size() * s.b2_grid.size());
  for (const auto& r : rows) {
    EXPECT_GE(r.intermittent_success, 0.0);
    EXPECT_LE(r.intermittent_success, 1.0);
    if (r.b2_fraction == 1.0) {
      EXPECT_EQ(r.throughput_bps, 0.0);
      EXPECT_FALSE(r.energy_efficiency_bpj);
    } else {
      ASSERT_TRUE(r.expected_frames);
      EXPECT_LE(r.throughput_bps, r.broadband_rate_bps * 0.9);
      EXPECT_NEAR(r.broadband_success, 0.9, 1e-12);
    }
  }
  const auto& ref = *std::find_if(rows.begin(), rows.end(),
                                  [](const AnalysisRow& r) { return r.distance_m == 400.0 && r.b2_fraction == 0.4; });
  EXPECT_NEAR(ref.intermittent_success, 0.99967, 1e-4);
}

}  // namespace
