#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coex/error.hpp"
#include "coex/experiment.hpp"

namespace coex::experiment {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string ratio(std::uint64_t num, std::uint64_t den) {
  return den ? format_number(static_cast<double>(num) / static_cast<double>(den)) : std::string();
}

void coordinates(std::ostringstream& out, const GridPoint& p, const std::string& policy) {
  out << to_string(p.scheme) << ',' << to_string(p.model) << ',' << policy << ','
      << format_number(p.dtmc.p_s) << ',' << format_number(p.dtmc.q_s) << ','
      << format_number(p.distance_m) << ',' << opt(p.b2_fraction);
}

void header(std::ostringstream& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void estimate_fields(std::ostringstream& out, const Estimate& e) {
  if (e.count == 0) {
    out << ",,";
    return;
  }
  out << ',' << format_number(e.mean) << ',' << format_number(e.std_error);
}

void write_file(const std::string& text, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  f.flush();
  if (!f) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

const std::vector<std::string>& row_columns() {
  static const std::vector<std::string> cols{
      "scheme", "model", "policy", "p_s", "q_s", "distance_m", "b2_fraction", "replication", "seed",
      "frames", "measured_slots", "tare", "tacae", "udc", "attempts", "retransmissions", "deliveries",
      "intermittent_success_rate", "broadband_active", "broadband_rate_bps", "broadband_power_w",
      "throughput_bps", "energy_efficiency_bpj", "broadband_slot_success_rate", "blocks_done",
      "mean_frames_per_block"};
  return cols;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols{
      "scheme", "model", "policy", "p_s", "q_s", "distance_m", "b2_fraction", "replications",
      "tare_mean", "tare_stderr", "tacae_mean", "tacae_stderr", "udc_mean", "udc_stderr",
      "throughput_bps_mean", "throughput_bps_stderr", "energy_efficiency_bpj_mean",
      "energy_efficiency_bpj_stderr", "broadband_power_w_mean", "broadband_power_w_stderr",
      "intermittent_success_rate_mean", "intermittent_success_rate_stderr"};
  return cols;
}

std::vector<std::string> figure_columns(std::string_view kind) {
  std::vector<std::string> cols{"scheme", "model", "distance_m", "b2_fraction"};
  if (kind == "tare_vs_b2") {
    cols.insert(cols.end(), {"tare_mean", "tare_stderr"});
  } else if (kind == "tacae_vs_b2") {
    cols.insert(cols.end(), {"tacae_mean", "tacae_stderr"});
  } else if (kind == "pareto_throughput") {
    cols.insert(cols.end(), {"tacae_mean", "throughput_bps_mean"});
  } else if (kind == "pareto_ee") {
    cols.insert(cols.end(), {"tacae_mean", "energy_efficiency_bpj_mean"});
  } else {
    throw InvalidParameter("unknown figure kind '" + std::string(kind) + "'");
  }
  return cols;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  header(out, row_columns());
  for (const auto& row : rows) {
    const auto& r = row.result;
    const auto& im = r.intermittent;
    const auto& bb = r.broadband;
    coordinates(out, row.point, to_string(r.config.policy));
    out << ',' << row.replication << ',' << r.seed << ',' << r.config.frame.horizon_frames << ','
        << r.measured_slots << ',' << format_number(im.tare) << ',' << format_number(im.tacae) << ','
        << opt(im.udc) << ',' << im.attempts << ',' << im.retransmissions << ',' << im.deliveries
        << ',' << ratio(im.deliveries, im.attempts) << ',' << (bb.active ? 1 : 0) << ','
        << format_number(bb.rate_bps) << ',' << format_number(bb.power_w) << ','
        << format_number(bb.throughput_bps) << ',' << opt(bb.energy_efficiency) << ','
        << ratio(bb.slot_successes, bb.slot_attempts) << ',' << bb.blocks_done << ','
        << (bb.blocks_done ? format_number(bb.mean_frames_per_block) : std::string()) << '\n';
  }
  return out.str();
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  header(out, summary_columns());
  for (const auto& s : rows) {
    coordinates(out, s.point, s.policy);
    out << ',' << s.replications;
    for (const auto* e : {&s.tare, &s.tacae, &s.udc, &s.throughput_bps, &s.energy_efficiency_bpj,
                          &s.broadband_power_w, &s.intermittent_success_rate})
      estimate_fields(out, *e);
    out << '\n';
  }
  return out.str();
}

void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw InvalidParameter("no result rows to write");
  write_file(rows_to_csv(rows), path);
}

void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw InvalidParameter("no summary rows to write");
  write_file(summary_to_csv(rows), path);
}

std::string tables_to_csv(const std::vector<TableCell>& cells) {
  std::ostringstream out;
  out << "table,row,column,metric,mean,stderr,count\n";
  for (const auto& c : cells) {
    out << c.table << ',' << c.row << ',' << c.column << ',' << c.metric;
    estimate_fields(out, c.value);
    out << ',' << c.value.count << '\n';
  }
  return out.str();
}

std::string analysis_to_csv(const std::vector<AnalysisRow>& rows) {
  std::ostringstream out;
  out << "distance_m,b2_fraction,intermittent_success,tare_closed_form,tare_chain,tacae_chain,"
         "broadband_rate_bps,broadband_power_w,broadband_success,expected_frames,throughput_bps,"
         "energy_efficiency_bpj\n";
  for (const auto& r : rows) {
    out << format_number(r.distance_m) << ',' << format_number(r.b2_fraction) << ','
        << format_number(r.intermittent_success) << ',' << format_number(r.tare_closed_form) << ','
        << format_number(r.tare_chain) << ',' << format_number(r.tacae_chain) << ','
        << format_number(r.broadband_rate_bps) << ',' << format_number(r.broadband_power_w) << ','
        << format_number(r.broadband_success) << ',' << opt(r.expected_frames) << ','
        << format_number(r.throughput_bps) << ',' << opt(r.energy_efficiency_bpj) << '\n';
  }
  return out.str();
}

}  // namespace coex::experiment
