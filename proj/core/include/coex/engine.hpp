#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coex/broadband.hpp"
#include "coex/phy.hpp"
#include "coex/source.hpp"

namespace coex::engine {

enum class Model { FrameBased, Idealistic };

struct FrameConfig {
  std::uint32_t slots_per_frame = 10;  // T_F: T_F - 1 uplink slots + 1 feedback slot
  double slot_seconds = 1e-3;
  std::uint64_t horizon_frames = 100000;

  void validate() const;
  /// max(1% of the horizon, 100) frames.
  [[nodiscard]] std::uint64_t warmup_frames() const;
  bool operator==(const FrameConfig&) const = default;
};

/// Full description of one run. Defaults reproduce the reference parameter set
/// (1 MHz, 2 GHz, 200 mW, K = 32, L = 128 B, broadband user at 50 m).
struct SimConfig {
  phy::BandPlan band = phy::BandPlan::fdma(1e6, 0.4);
  phy::LinkGeometry broadband_link{50.0};
  phy::LinkGeometry intermittent_link{400.0};
  phy::NoiseModel noise;
  source::DtmcParams dtmc;
  source::SamplingPolicy policy = source::SamplingPolicy::semantics_aware();
  source::CostMatrix costs;

  double target_error = 0.1;
  double max_rate_bps = 5e6;
  double max_power_w = 0.2;
  std::uint32_t block_size = 32;
  std::uint32_t packet_bytes = 128;

  FrameConfig frame;
  Model model = Model::FrameBased;

  /// Replaces the PHY outcome of the intermittent link with a Bernoulli draw.
  std::optional<double> success_override;
  /// Same for the broadband link.
  std::optional<double> broadband_success_override;

  std::uint64_t seed = 1;

  void validate() const;
  bool operator==(const SimConfig&) const = default;
  /// One packet of L bytes per slot.
  [[nodiscard]] double intermittent_rate_bps() const { return 8.0 * packet_bytes / frame.slot_seconds; }
};

struct IntermittentMetrics {
  double tare = 0.0;
  double tacae = 0.0;
  std::optional<double> udc;  // absent without deliveries
  std::uint64_t attempts = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t deliveries = 0;
};

struct BroadbandMetrics {
  bool active = false;  // false when the broadband sub-band is empty
  double rate_bps = 0.0;
  double power_w = 0.0;
  double throughput_bps = 0.0;
  std::optional<double> energy_efficiency;
  std::uint64_t blocks_done = 0;
  double mean_frames_per_block = 0.0;
  std::uint64_t slot_attempts = 0;
  std::uint64_t slot_successes = 0;
};

struct RunResult {
  IntermittentMetrics intermittent;
  BroadbandMetrics broadband;
  std::uint64_t measured_slots = 0;
  SimConfig config;
  std::uint64_t seed = 0;
};

/// One measured slot, kept only when a trace is requested.
struct SlotRecord {
  source::SourceState x = 0;
  source::SourceState x_hat = 0;
  std::optional<phy::Decode> broadband;
  std::optional<phy::Decode> intermittent;
};

/// Running time averages of the reconstruction error and actuation cost.
class Accumulator {
 public:
  explicit Accumulator(source::CostMatrix costs) : costs_(costs) {}

  void record(source::SourceState x, source::SourceState x_hat) {
    ++slots_;
    if (x != x_hat) {
      ++errors_;
      cost_ += source::slot_cost(x, x_hat, costs_);
    }
  }

  [[nodiscard]] std::uint64_t slots() const { return slots_; }
  [[nodiscard]] double tare() const { return slots_ ? static_cast<double>(errors_) / slots_ : 0.0; }
  [[nodiscard]] double tacae() const { return slots_ ? cost_ / slots_ : 0.0; }

 private:
  source::CostMatrix costs_;
  std::uint64_t slots_ = 0;
  std::uint64_t errors_ = 0;
  double cost_ = 0.0;
};

/// Retransmissions per delivered update; nullopt when nothing was delivered.
[[nodiscard]] std::optional<double> compute_udc(std::uint64_t retransmissions,
                                                std::uint64_t deliveries);

/// Time averages over a recorded trace.
[[nodiscard]] IntermittentMetrics accumulate(std::span<const SlotRecord> trace,
                                             const source::CostMatrix& costs);

[[nodiscard]] RunResult run_frame_based(const SimConfig& config,
                                        std::vector<SlotRecord>* trace = nullptr);
[[nodiscard]] RunResult run_idealistic(const SimConfig& config,
                                       std::vector<SlotRecord>* trace = nullptr);
/// Dispatches on config.model.
[[nodiscard]] RunResult run(const SimConfig& config, std::vector<SlotRecord>* trace = nullptr);

}  // namespace coex::engine
