#include "coex/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "coex/error.hpp"

namespace coex::experiment {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

// Thrown by value parsers; rewrapped with the origin and line.
struct ValueError {
  std::string message;
};

double parse_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ValueError{"expected a number, got '" + std::string(v) + "'"};
  return out;
}

std::uint64_t parse_uint(std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ValueError{"expected a non-negative integer, got '" + std::string(v) + "'"};
  return out;
}

std::uint32_t parse_u32(std::string_view v) {
  const auto out = parse_uint(v);
  if (out > 0xffffffffULL) throw ValueError{"value out of range: '" + std::string(v) + "'"};
  return static_cast<std::uint32_t>(out);
}

std::string lower(std::string_view v) {
  std::string s(v);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

phy::Scheme parse_scheme(std::string_view v) {
  const auto s = lower(v);
  if (s == "fdma") return phy::Scheme::Fdma;
  if (s == "noma") return phy::Scheme::Noma;
  throw ValueError{"unknown scheme '" + std::string(v) + "' (expected fdma or noma)"};
}

engine::Model parse_model(std::string_view v) {
  const auto s = lower(v);
  if (s == "frame_based") return engine::Model::FrameBased;
  if (s == "idealistic") return engine::Model::Idealistic;
  throw ValueError{"unknown model '" + std::string(v) + "' (expected frame_based or idealistic)"};
}

source::SamplingPolicy::Kind parse_policy(std::string_view v) {
  const auto s = lower(v);
  if (s == "semantics_aware") return source::SamplingPolicy::Kind::SemanticsAware;
  if (s == "change_aware") return source::SamplingPolicy::Kind::ChangeAware;
  if (s == "uniform") return source::SamplingPolicy::Kind::Uniform;
  throw ValueError{"unknown policy '" + std::string(v) + "'"};
}

std::optional<double> parse_optional_prob(std::string_view v) {
  if (lower(v) == "none") return std::nullopt;
  return parse_double(v);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += f(items[i]);
  }
  return out;
}

template <class T, class F>
std::vector<T> parse_nonempty_list(std::string_view v, F&& f) {
  std::vector<T> out;
  for (auto item : split_list(v)) out.push_back(f(item));
  if (out.empty()) throw ValueError{"list must not be empty"};
  return out;
}

// Scheme is staged here and applied after all keys are read, so b2 and
// bandwidth may appear in any order.
struct Staging {
  phy::Scheme scheme = phy::Scheme::Fdma;
  double bandwidth_hz = 1e6;
};

struct KeyDef {
  const char* section;
  const char* name;
  std::function<void(ExperimentSpec&, Staging&, std::string_view)> set;
  // nullopt: nothing to emit for this spec.
  std::function<std::optional<std::string>(const ExperimentSpec&)> get;
};

const std::vector<KeyDef>& keys() {
  static const std::vector<KeyDef> table = [] {
    using S = ExperimentSpec;
    auto some = [](std::string s) { return std::optional<std::string>(std::move(s)); };
    std::vector<KeyDef> t;
    // [run]
    t.push_back({"run", "model",
                 [](S& s, Staging&, std::string_view v) { s.base.model = parse_model(v); },
                 [=](const S& s) { return some(to_string(s.base.model)); }});
    t.push_back({"run", "scheme",
                 [](S&, Staging& st, std::string_view v) { st.scheme = parse_scheme(v); },
                 [=](const S& s) { return some(to_string(s.base.band.scheme)); }});
    t.push_back({"run", "policy",
                 [](S& s, Staging&, std::string_view v) { s.base.policy.kind = parse_policy(v); },
                 [=](const S& s) {
                   auto p = to_string(s.base.policy);
                   return some(p.substr(0, p.find('(')));
                 }});
    t.push_back({"run", "uniform_period",
                 [](S& s, Staging&, std::string_view v) { s.base.policy.period = parse_uint(v); },
                 [=](const S& s) { return some(std::to_string(s.base.policy.period)); }});
    t.push_back({"run", "slots_per_frame",
                 [](S& s, Staging&, std::string_view v) { s.base.frame.slots_per_frame = parse_u32(v); },
                 [=](const S& s) { return some(std::to_string(s.base.frame.slots_per_frame)); }});
    t.push_back({"run", "slot_seconds",
                 [](S& s, Staging&, std::string_view v) { s.base.frame.slot_seconds = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.frame.slot_seconds)); }});
    t.push_back({"run", "frames",
                 [](S& s, Staging&, std::string_view v) { s.base.frame.horizon_frames = parse_uint(v); },
                 [=](const S& s) { return some(std::to_string(s.base.frame.horizon_frames)); }});
    t.push_back({"run", "seed",
                 [](S& s, Staging&, std::string_view v) { s.base.seed = parse_uint(v); },
                 [=](const S& s) { return some(std::to_string(s.base.seed)); }});
    t.push_back({"run", "success_override",
                 [](S& s, Staging&, std::string_view v) { s.base.success_override = parse_optional_prob(v); },
                 [=](const S& s) {
                   return s.base.success_override ? some(fmt(*s.base.success_override))
                                                  : std::optional<std::string>{};
                 }});
    t.push_back({"run", "broadband_success_override",
                 [](S& s, Staging&, std::string_view v) {
                   s.base.broadband_success_override = parse_optional_prob(v);
                 },
                 [=](const S& s) {
                   return s.base.broadband_success_override
                              ? some(fmt(*s.base.broadband_success_override))
                              : std::optional<std::string>{};
                 }});
    // [link]
    t.push_back({"link", "bandwidth_hz",
                 [](S&, Staging& st, std::string_view v) { st.bandwidth_hz = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.band.total_hz)); }});
    t.push_back({"link", "b2",
                 [](S& s, Staging&, std::string_view v) { s.b2_fraction = parse_double(v); },
                 [=](const S& s) {
                   return s.base.band.scheme == phy::Scheme::Fdma ? some(fmt(s.b2_fraction))
                                                                  : std::optional<std::string>{};
                 }});
    t.push_back({"link", "carrier_hz",
                 [](S& s, Staging&, std::string_view v) {
                   s.base.broadband_link.carrier_hz = s.base.intermittent_link.carrier_hz = parse_double(v);
                 },
                 [=](const S& s) { return some(fmt(s.base.intermittent_link.carrier_hz)); }});
    t.push_back({"link", "pathloss_exp",
                 [](S& s, Staging&, std::string_view v) {
                   s.base.broadband_link.pathloss_exp = s.base.intermittent_link.pathloss_exp = parse_double(v);
                 },
                 [=](const S& s) { return some(fmt(s.base.intermittent_link.pathloss_exp)); }});
    t.push_back({"link", "antenna_gain",
                 [](S& s, Staging&, std::string_view v) {
                   s.base.broadband_link.antenna_gain_product =
                       s.base.intermittent_link.antenna_gain_product = parse_double(v);
                 },
                 [=](const S& s) { return some(fmt(s.base.intermittent_link.antenna_gain_product)); }});
    t.push_back({"link", "noise_temp_k",
                 [](S& s, Staging&, std::string_view v) { s.base.noise.noise_temp_k = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.noise.noise_temp_k)); }});
    t.push_back({"link", "noise_figure_db",
                 [](S& s, Staging&, std::string_view v) { s.base.noise.noise_figure_db = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.noise.noise_figure_db)); }});
    t.push_back({"link", "max_power_w",
                 [](S& s, Staging&, std::string_view v) { s.base.max_power_w = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.max_power_w)); }});
    t.push_back({"link", "broadband_distance_m",
                 [](S& s, Staging&, std::string_view v) { s.base.broadband_link.distance_m = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.broadband_link.distance_m)); }});
    t.push_back({"link", "intermittent_distance_m",
                 [](S& s, Staging&, std::string_view v) { s.base.intermittent_link.distance_m = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.intermittent_link.distance_m)); }});
    // [source]
    t.push_back({"source", "p_s",
                 [](S& s, Staging&, std::string_view v) { s.base.dtmc.p_s = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.dtmc.p_s)); }});
    t.push_back({"source", "q_s",
                 [](S& s, Staging&, std::string_view v) { s.base.dtmc.q_s = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.dtmc.q_s)); }});
    t.push_back({"source", "c01",
                 [](S& s, Staging&, std::string_view v) { s.base.costs.c01 = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.costs.c01)); }});
    t.push_back({"source", "c10",
                 [](S& s, Staging&, std::string_view v) { s.base.costs.c10 = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.costs.c10)); }});
    // [broadband]
    t.push_back({"broadband", "target_error",
                 [](S& s, Staging&, std::string_view v) { s.base.target_error = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.target_error)); }});
    t.push_back({"broadband", "max_rate_bps",
                 [](S& s, Staging&, std::string_view v) { s.base.max_rate_bps = parse_double(v); },
                 [=](const S& s) { return some(fmt(s.base.max_rate_bps)); }});
    t.push_back({"broadband", "block_size",
                 [](S& s, Staging&, std::string_view v) { s.base.block_size = parse_u32(v); },
                 [=](const S& s) { return some(std::to_string(s.base.block_size)); }});
    // [intermittent]
    t.push_back({"intermittent", "packet_bytes",
                 [](S& s, Staging&, std::string_view v) { s.base.packet_bytes = parse_u32(v); },
                 [=](const S& s) { return some(std::to_string(s.base.packet_bytes)); }});
    // [sweep]
    t.push_back({"sweep", "b2_grid",
                 [](S& s, Staging&, std::string_view v) { s.b2_grid = parse_nonempty_list<double>(v, parse_double); },
                 [=](const S& s) { return some(join(s.b2_grid, fmt)); }});
    t.push_back({"sweep", "distances",
                 [](S& s, Staging&, std::string_view v) {
                   s.distance_grid = parse_nonempty_list<double>(v, parse_double);
                 },
                 [=](const S& s) { return some(join(s.distance_grid, fmt)); }});
    t.push_back({"sweep", "schemes",
                 [](S& s, Staging&, std::string_view v) {
                   s.schemes = parse_nonempty_list<phy::Scheme>(v, parse_scheme);
                 },
                 [=](const S& s) {
                   return some(join(s.schemes, [](phy::Scheme x) { return to_string(x); }));
                 }});
    t.push_back({"sweep", "models",
                 [](S& s, Staging&, std::string_view v) {
                   s.models = parse_nonempty_list<engine::Model>(v, parse_model);
                 },
                 [=](const S& s) {
                   return some(join(s.models, [](engine::Model x) { return to_string(x); }));
                 }});
    t.push_back({"sweep", "sources",
                 [](S& s, Staging&, std::string_view v) {
                   s.sources = parse_nonempty_list<source::DtmcParams>(v, [](std::string_view item) {
                     const auto colon = item.find(':');
                     if (colon == std::string_view::npos)
                       throw ValueError{"source pairs are written p_s:q_s"};
                     return source::DtmcParams{parse_double(trim(item.substr(0, colon))),
                                               parse_double(trim(item.substr(colon + 1)))};
                   });
                 },
                 [=](const S& s) {
                   if (s.sources.empty()) return std::optional<std::string>{};
                   return some(join(s.sources, [](const source::DtmcParams& d) {
                     return fmt(d.p_s) + ":" + fmt(d.q_s);
                   }));
                 }});
    t.push_back({"sweep", "replications",
                 [](S& s, Staging&, std::string_view v) { s.replications = parse_u32(v); },
                 [=](const S& s) { return some(std::to_string(s.replications)); }});
    t.push_back({"sweep", "parallel",
                 [](S& s, Staging&, std::string_view v) { s.parallel = parse_u32(v); },
                 [=](const S& s) { return some(std::to_string(s.parallel)); }});
    return t;
  }();
  return table;
}

}  // namespace

std::string to_string(phy::Scheme scheme) {
  return scheme == phy::Scheme::Fdma ? "fdma" : "noma";
}

std::string to_string(engine::Model model) {
  return model == engine::Model::FrameBased ? "frame_based" : "idealistic";
}

std::string to_string(const source::SamplingPolicy& policy) {
  switch (policy.kind) {
    case source::SamplingPolicy::Kind::SemanticsAware:
      return "semantics_aware";
    case source::SamplingPolicy::Kind::ChangeAware:
      return "change_aware";
    case source::SamplingPolicy::Kind::Uniform:
      return "uniform(" + std::to_string(policy.period) + ")";
  }
  return "unknown";
}

void ExperimentSpec::validate() const {
  base.validate();
  if (replications < 1) throw InvalidConfig("replications must be >= 1");
  if (parallel < 1) throw InvalidConfig("parallel must be >= 1");
  if (b2_grid.empty() || distance_grid.empty() || schemes.empty() || models.empty())
    throw InvalidConfig("sweep axes must not be empty");
  for (double b2 : b2_grid) {
    if (!(b2 > 0.0 && b2 <= 1.0)) throw InvalidConfig("b2_grid entries must lie in (0, 1]");
  }
  for (double d : distance_grid) {
    if (!(d > 0.0)) throw InvalidConfig("distances must be > 0");
  }
  for (const auto& s : sources) s.validate_ergodic();
}

ExperimentSpec parse_config_text(std::string_view text, std::string_view origin) {
  ExperimentSpec spec;
  Staging staging;
  std::map<std::string, std::size_t> seen;  // key -> line

  auto where = [&](std::size_t line) { return std::string(origin) + ":" + std::to_string(line) + ": "; };

  std::string section;
  std::size_t line_no = 0;
  std::istringstream lines{std::string(text)};
  for (std::string raw; std::getline(lines, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidConfig(where(line_no) + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      bool known = false;
      for (const auto& k : keys()) known = known || section == k.section;
      if (!known) throw InvalidConfig(where(line_no) + "unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InvalidConfig(where(line_no) + "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    const KeyDef* def = nullptr;
    for (const auto& k : keys()) {
      if (key == k.name) def = &k;
    }
    if (!def) throw InvalidConfig(where(line_no) + "unknown key '" + key + "'");
    if (!section.empty() && section != def->section)
      throw InvalidConfig(where(line_no) + "key '" + key + "' belongs to [" + def->section +
                          "], not [" + section + "]");
    if (auto it = seen.find(key); it != seen.end())
      throw InvalidConfig(where(line_no) + "duplicate key '" + key + "' (first set on line " +
                          std::to_string(it->second) + ")");
    seen.emplace(key, line_no);
    if (value.empty()) throw InvalidConfig(where(line_no) + "missing value for '" + key + "'");

    try {
      def->set(spec, staging, value);
    } catch (const ValueError& e) {
      throw InvalidConfig(where(line_no) + key + ": " + e.message);
    }
  }

  auto line_of = [&](const char* key) -> std::string {
    auto it = seen.find(key);
    return it == seen.end() ? std::string(origin) + ": " : where(it->second);
  };

  if (staging.scheme == phy::Scheme::Noma) {
    if (seen.count("b2") && spec.b2_fraction != 0.0)
      throw InvalidConfig(line_of("b2") + "NOMA shares the whole band; b2 must not be set");
    spec.base.band = phy::BandPlan::noma(staging.bandwidth_hz);
  } else {
    if (!(spec.b2_fraction > 0.0 && spec.b2_fraction <= 1.0))
      throw InvalidConfig(line_of("b2") + "b2 must lie in (0, 1] for FDMA");
    try {
      spec.base.band = phy::BandPlan::fdma(staging.bandwidth_hz, spec.b2_fraction);
    } catch (const std::exception& e) {
      throw InvalidConfig(line_of("bandwidth_hz") + e.what());
    }
  }

  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw InvalidConfig(std::string(origin) + ": " + e.what());
  }
  return spec;
}

ExperimentSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig(path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::string emit_config(const ExperimentSpec& spec) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    const auto value = k.get(spec);
    if (!value) continue;
    if (section != k.section) {
      section = k.section;
      out += (out.empty() ? "[" : "\n[") + section + "]\n";
    }
    out += std::string(k.name) + " = " + *value + "\n";
  }
  return out;
}

}  // namespace coex::experiment
