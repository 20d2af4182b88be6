#pragma once

#include <array>
#include <cstdint>

#include "coex/phy.hpp"
#include "coex/source.hpp"

/// Closed-form and semi-analytical oracles for the simulator.
namespace coex::analysis {

using Matrix4 = std::array<std::array<double, 4>, 4>;
using Vector4 = std::array<double, 4>;

/// Time-averaged reconstruction error of semantics-aware sampling with
/// instantaneous feedback, from the two-state error chain averaged over the
/// stationary source marginal:
///   2 p_s q_s (1 - p) / (p (p_s + q_s) + 4 p_s q_s (1 - p)).
[[nodiscard]] double tare_idealistic_closed_form(double p_s, double q_s, double p);

/// Joint sampling/transmission/decoding probabilities for the next slot.
struct StxEvents {
  double sample_no_tx = 0.0;  // sampled, not transmitted
  double sample_tx = 0.0;     // sampled and transmitted
  double decoded = 0.0;       // sampled, transmitted, decoded
  double failed = 0.0;        // sampled, transmitted, not decoded

  /// Throws InvalidParameter unless all lie in [0, 1], decoded + failed ==
  /// sample_tx and sample_no_tx + sample_tx <= 1.
  void validate() const;
};

/// Events conditioned on the two situations that matter for the error chain:
/// the source just left a synced state, or the system is in error and the
/// source did not move.
struct EventProbabilities {
  StxEvents on_change;
  StxEvents in_error;
};

/// Instantaneous-feedback instantiation for `policy` with per-attempt success p.
/// Uniform sampling is only Markov in (X, E) for period 1.
[[nodiscard]] EventProbabilities idealistic_events(const source::SamplingPolicy& policy, double p);

/// 4-state chain over (X, E) in the order (0,0), (1,0), (0,1), (1,1).
struct JointChain {
  Matrix4 transition{};
  EventProbabilities events;
  source::DtmcParams dtmc;

  [[nodiscard]] static constexpr std::size_t index(int x, int e) {
    return static_cast<std::size_t>(x + 2 * e);
  }
};

[[nodiscard]] JointChain build_joint_chain(const source::DtmcParams& dtmc,
                                           const EventProbabilities& events);

struct ChainMetrics {
  double tare = 0.0;
  double tacae = 0.0;
  Vector4 stationary{};
};

/// Direct solve of pi P = pi, sum(pi) = 1. Throws NoUniqueStationary when the
/// balance system is singular or the residual exceeds 1e-12.
[[nodiscard]] Vector4 stationary_distribution(const Matrix4& transition);

[[nodiscard]] ChainMetrics chain_metrics(const JointChain& chain, const source::CostMatrix& costs);

/// Two-state error chain with the X-conditional rows averaged over the
/// stationary source marginal. Its TARE equals the closed form above for the
/// idealistic semantics-aware events.
struct ErrorChain {
  double p00 = 0.0;
  double p11 = 0.0;
  double tare = 0.0;
};

[[nodiscard]] ErrorChain averaged_error_chain(const JointChain& chain);

/// E[F(K)]: expected frames to collect K packets when each of the T_F - 1
/// uplink slots of a frame succeeds independently with probability p.
[[nodiscard]] double expected_frames(std::uint32_t block_size, double p,
                                     std::uint32_t slots_per_frame);

/// Interference-free decoding probability of the intermittent user on its own
/// sub-band at fixed power.
[[nodiscard]] double fdma_intermittent_success(const phy::LinkGeometry& geom,
                                               const phy::NoiseModel& noise, double b2_hz,
                                               double rate_bps, double power_w);

}  // namespace coex::analysis
