#include "coex/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "coex/analysis.hpp"
#include "coex/error.hpp"
#include "coex/rng.hpp"

namespace coex::experiment {

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string GridPoint::key() const {
  std::string k = "scheme=" + to_string(scheme) + ";model=" + to_string(model) +
                  ";p_s=" + exact(dtmc.p_s) + ";q_s=" + exact(dtmc.q_s) +
                  ";distance_m=" + exact(distance_m);
  if (b2_fraction) k += ";b2=" + exact(*b2_fraction);
  return k;
}

bool grid_less(const GridPoint& a, const GridPoint& b) {
  const double a_b2 = a.b2_fraction.value_or(-1.0);
  const double b_b2 = b.b2_fraction.value_or(-1.0);
  return std::tie(a.scheme, a.model, a.dtmc.p_s, a.dtmc.q_s, a.distance_m, a_b2) <
         std::tie(b.scheme, b.model, b.dtmc.p_s, b.dtmc.q_s, b.distance_m, b_b2);
}

std::vector<GridPoint> expand_grid(const ExperimentSpec& spec) {
  std::vector<source::DtmcParams> sources = spec.sources;
  if (sources.empty()) sources.push_back(spec.base.dtmc);

  std::vector<GridPoint> points;
  for (const auto& dtmc : sources) {
    for (auto scheme : spec.schemes) {
      for (auto model : spec.models) {
        for (double d : spec.distance_grid) {
          if (scheme == phy::Scheme::Noma) {
            points.push_back({scheme, model, dtmc, d, std::nullopt});
            continue;
          }
          for (double b2 : spec.b2_grid) points.push_back({scheme, model, dtmc, d, b2});
        }
      }
    }
  }
  return points;
}

std::uint64_t run_seed(std::uint64_t master_seed, const GridPoint& point, std::uint32_t replication) {
  return splitmix64(master_seed ^ splitmix64(fnv1a64(point.key()) + splitmix64(replication)));
}

engine::SimConfig config_for(const ExperimentSpec& spec, const GridPoint& point,
                             std::uint32_t replication) {
  engine::SimConfig cfg = spec.base;
  cfg.model = point.model;
  cfg.dtmc = point.dtmc;
  cfg.intermittent_link.distance_m = point.distance_m;
  cfg.band = point.scheme == phy::Scheme::Noma
                 ? phy::BandPlan::noma(spec.base.band.total_hz)
                 : phy::BandPlan::fdma(spec.base.band.total_hz, point.b2_fraction.value_or(spec.b2_fraction));
  cfg.seed = run_seed(spec.base.seed, point, replication);
  return cfg;
}

std::vector<ResultRow> run_points(const ExperimentSpec& spec, const std::vector<GridPoint>& points) {
  const std::size_t reps = spec.replications;
  const std::size_t total = points.size() * reps;
  std::vector<ResultRow> rows(total);

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const GridPoint& point = points[task / reps];
      const auto rep = static_cast<std::uint32_t>(task % reps);
      try {
        rows[task] = ResultRow{point, rep, engine::run(config_for(spec, point, rep))};
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (first_error.empty())
          first_error = "grid point {" + point.key() + "} replication " + std::to_string(rep) + ": " + e.what();
        next = total;
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(spec.parallel, total));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (!first_error.empty()) throw std::runtime_error(first_error);

  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (grid_less(a.point, b.point)) return true;
    if (grid_less(b.point, a.point)) return false;
    return a.replication < b.replication;
  });
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  return run_points(spec, expand_grid(spec));
}

Estimate estimate(const std::vector<double>& samples) {
  Estimate e;
  e.count = static_cast<std::uint32_t>(samples.size());
  if (samples.empty()) return e;
  double sum = 0.0;
  for (double v : samples) sum += v;
  e.mean = sum / samples.size();
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / (samples.size() - 1) / samples.size());
  }
  return e;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::vector<SummaryRow> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    std::vector<double> tare, tacae, udc, thr, ee, power, p2;
    while (j < rows.size() && rows[j].point == rows[i].point) {
      const auto& r = rows[j].result;
      tare.push_back(r.intermittent.tare);
      tacae.push_back(r.intermittent.tacae);
      if (r.intermittent.udc) udc.push_back(*r.intermittent.udc);
      thr.push_back(r.broadband.throughput_bps);
      if (r.broadband.energy_efficiency) ee.push_back(*r.broadband.energy_efficiency);
      power.push_back(r.broadband.power_w);
      if (r.intermittent.attempts)
        p2.push_back(static_cast<double>(r.intermittent.deliveries) / r.intermittent.attempts);
      ++j;
    }
    SummaryRow s;
    s.point = rows[i].point;
    s.policy = to_string(rows[i].result.config.policy);
    s.replications = static_cast<std::uint32_t>(j - i);
    s.tare = estimate(tare);
    s.tacae = estimate(tacae);
    s.udc = estimate(udc);
    s.throughput_bps = estimate(thr);
    s.energy_efficiency_bpj = estimate(ee);
    s.broadband_power_w = estimate(power);
    s.intermittent_success_rate = estimate(p2);
    out.push_back(s);
    i = j;
  }
  return out;
}

std::vector<TableCell> reproduce_tables(const ExperimentSpec& spec) {
  spec.validate();
  const source::DtmcParams slow = spec.base.dtmc;
  const source::DtmcParams fast{0.2, 0.7};
  const phy::Scheme scheme = spec.base.band.scheme;
  const std::optional<double> base_b2 =
      scheme == phy::Scheme::Fdma ? std::optional<double>(spec.b2_fraction) : std::nullopt;
  const double base_d = spec.base.intermittent_link.distance_m;
  using engine::Model;

  std::vector<GridPoint> points;
  auto add = [&](GridPoint p) {
    if (std::find(points.begin(), points.end(), p) == points.end()) points.push_back(p);
  };
  for (auto model : {Model::Idealistic, Model::FrameBased}) {
    for (const auto& src : {slow, fast}) add({scheme, model, src, base_d, base_b2});
  }
  for (double d : spec.distance_grid) {
    add({phy::Scheme::Fdma, Model::FrameBased, slow, d, spec.b2_fraction});
    add({phy::Scheme::Noma, Model::FrameBased, slow, d, std::nullopt});
  }

  const auto summary = summarize(run_points(spec, points));
  auto find = [&](const GridPoint& p) -> const SummaryRow& {
    for (const auto& s : summary) {
      if (s.point == p) return s;
    }
    throw std::logic_error("missing grid point " + p.key());
  };

  std::vector<TableCell> cells;
  auto push_metrics = [&](const std::string& table, const std::string& column, const SummaryRow& s) {
    cells.push_back({table, "TARE", column, "tare", s.tare});
    cells.push_back({table, "TACAE", column, "tacae", s.tacae});
    cells.push_back({table, "UDC", column, "udc", s.udc});
  };
  push_metrics("II", "Idealistic", find({scheme, Model::Idealistic, slow, base_d, base_b2}));
  push_metrics("II", "Frame-Based", find({scheme, Model::FrameBased, slow, base_d, base_b2}));
  push_metrics("III", "Idealistic/slow", find({scheme, Model::Idealistic, slow, base_d, base_b2}));
  push_metrics("III", "Idealistic/fast", find({scheme, Model::Idealistic, fast, base_d, base_b2}));
  push_metrics("III", "Frame-Based/slow", find({scheme, Model::FrameBased, slow, base_d, base_b2}));
  push_metrics("III", "Frame-Based/fast", find({scheme, Model::FrameBased, fast, base_d, base_b2}));
  for (double d : spec.distance_grid) {
    char row[32];
    std::snprintf(row, sizeof row, "D=%g", d);
    const auto& f = find({phy::Scheme::Fdma, Model::FrameBased, slow, d, spec.b2_fraction});
    const auto& n = find({phy::Scheme::Noma, Model::FrameBased, slow, d, std::nullopt});
    cells.push_back({"IV", row, "FDMA", "tacae", f.tacae});
    cells.push_back({"IV", row, "NOMA", "tacae", n.tacae});
    cells.push_back({"IV", row, "FDMA", "udc", f.udc});
    cells.push_back({"IV", row, "NOMA", "udc", n.udc});
  }
  return cells;
}

std::string format_tables(const std::vector<TableCell>& cells) {
  std::ostringstream out;
  std::string table;
  for (const auto& c : cells) {
    if (c.table != table) {
      table = c.table;
      out << (out.tellp() > 0 ? "\n" : "") << "Table " << table << "\n";
    }
    char line[160];
    std::snprintf(line, sizeof line, "  %-8s %-18s %-6s %.4f +- %.4f (n=%u)\n", c.row.c_str(),
                  c.column.c_str(), c.metric.c_str(), c.value.mean, c.value.std_error, c.value.count);
    out << line;
  }
  return out.str();
}

std::vector<AnalysisRow> analyze(const ExperimentSpec& spec) {
  spec.validate();
  const auto& base = spec.base;
  const double total = base.band.total_hz;
  const auto events_policy = base.policy;

  std::vector<AnalysisRow> rows;
  for (double d : spec.distance_grid) {
    for (double b2 : spec.b2_grid) {
      AnalysisRow r;
      r.distance_m = d;
      r.b2_fraction = b2;

      phy::LinkGeometry geom = base.intermittent_link;
      geom.distance_m = d;
      r.intermittent_success = analysis::fdma_intermittent_success(
          geom, base.noise, b2 * total, base.intermittent_rate_bps(), base.max_power_w);
      r.tare_closed_form =
          analysis::tare_idealistic_closed_form(base.dtmc.p_s, base.dtmc.q_s, r.intermittent_success);
      const auto chain = analysis::build_joint_chain(
          base.dtmc, analysis::idealistic_events(events_policy, r.intermittent_success));
      const auto metrics = analysis::chain_metrics(chain, base.costs);
      r.tare_chain = metrics.tare;
      r.tacae_chain = metrics.tacae;

      const double b1_hz = (1.0 - b2) * total;
      if (b1_hz > 0.0) {
        const double beta = phy::large_scale_gain(base.broadband_link);
        const double sigma2 = phy::noise_power(base.noise, b1_hz);
        const broadband::BroadbandPolicy policy{base.target_error, base.max_rate_bps,
                                                base.max_power_w, beta};
        r.broadband_rate_bps = broadband::select_rate(policy, b1_hz, sigma2);
        r.broadband_power_w = broadband::select_power(policy, r.broadband_rate_bps, b1_hz, sigma2);
        r.broadband_success = phy::closed_form_success_prob(
            beta, r.broadband_power_w, sigma2, phy::decode_threshold(r.broadband_rate_bps, b1_hz));
        if (r.broadband_success > 0.0) {
          r.expected_frames = analysis::expected_frames(base.block_size, r.broadband_success,
                                                        base.frame.slots_per_frame);
          r.throughput_bps = r.broadband_rate_bps * base.block_size /
                             (*r.expected_frames * base.frame.slots_per_frame);
          r.energy_efficiency_bpj = broadband::energy_efficiency(r.throughput_bps, r.broadband_power_w);
        }
      }
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace coex::experiment
