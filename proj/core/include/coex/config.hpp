#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "coex/engine.hpp"

namespace coex::experiment {

/// A base run plus the axes of a parameter sweep.
///
/// The file grammar is line oriented:
///
///     # comment
///     [section]
///     key = value
///     list_key = v1, v2, v3
///
/// Section headers are optional; when present, every key must belong to the
/// current section. Unknown keys, duplicate keys and malformed values are
/// rejected with `origin:line:` diagnostics. See README.md for the key table.
struct ExperimentSpec {
  engine::SimConfig base;
  /// FDMA intermittent share of the band, B2 / B.
  double b2_fraction = 0.4;

  std::vector<double> b2_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> distance_grid{100.0, 200.0, 400.0};
  std::vector<phy::Scheme> schemes{phy::Scheme::Fdma, phy::Scheme::Noma};
  std::vector<engine::Model> models{engine::Model::FrameBased, engine::Model::Idealistic};
  /// Empty means "base source only".
  std::vector<source::DtmcParams> sources;

  std::uint32_t replications = 10;
  std::uint32_t parallel = 1;

  void validate() const;
  bool operator==(const ExperimentSpec&) const = default;
};

[[nodiscard]] ExperimentSpec parse_config(const std::filesystem::path& path);
[[nodiscard]] ExperimentSpec parse_config_text(std::string_view text,
                                               std::string_view origin = "<config>");

/// Serializes every field; parse_config_text(emit_config(s)) == s.
[[nodiscard]] std::string emit_config(const ExperimentSpec& spec);

[[nodiscard]] std::string to_string(phy::Scheme scheme);
[[nodiscard]] std::string to_string(engine::Model model);
[[nodiscard]] std::string to_string(const source::SamplingPolicy& policy);

}  // namespace coex::experiment
