#pragma once

#include <cstdint>
#include <utility>

namespace coex::broadband {

/// Rate/power selection inputs. Only the mean channel gain is known.
struct BroadbandPolicy {
  double target_error = 0.1;     // epsilon*
  double max_rate_bps = 5e6;
  double max_power_w = 0.2;
  double mean_gain = 0.0;        // beta_1

  void validate() const;
};

/// Progress of the current rateless-coded source block.
struct BlockState {
  std::uint32_t block_size = 32;
  std::uint32_t received = 0;
  std::uint32_t frames_elapsed = 0;
};

/// Largest rate (capped at max_rate_bps) whose interference-free outage at
/// max power equals the target error.
[[nodiscard]] double select_rate(const BroadbandPolicy& policy, double subband_hz, double sigma2_w);

/// Power meeting the target error at `rate_bps`, clamped to max_power_w.
[[nodiscard]] double select_power(const BroadbandPolicy& policy, double rate_bps,
                                  double subband_hz, double sigma2_w);

/// Adds the packets received since the last call. Completion is only
/// evaluated at frame end, where the ACK is sent; surplus packets are dropped.
[[nodiscard]] std::pair<BlockState, bool> block_advance(BlockState state,
                                                        std::uint32_t slot_successes,
                                                        bool frame_ended);

/// Useful bits per second: r K blocks / (frames T_F).
[[nodiscard]] double throughput(std::uint64_t blocks_done, std::uint64_t frames_total,
                                double rate_bps, std::uint32_t block_size,
                                std::uint32_t frame_slots);

[[nodiscard]] double energy_efficiency(double throughput_bps, double power_w);

}  // namespace coex::broadband
