#include "coex/broadband.hpp"

#include <algorithm>
#include <cmath>

#include "coex/error.hpp"

namespace coex::broadband {

namespace {

// ln(1 / (1 - eps)): the outage-inversion factor for Rayleigh fading.
double outage_factor(double target_error) { return -std::log1p(-target_error); }

}  // namespace

void BroadbandPolicy::validate() const {
  if (!(target_error > 0.0 && target_error < 1.0))
    throw InvalidParameter("target error must lie in (0, 1)");
  if (!(max_rate_bps > 0.0)) throw InvalidParameter("max rate must be > 0");
  if (!(max_power_w > 0.0)) throw InvalidParameter("max power must be > 0");
  if (!(mean_gain > 0.0)) throw InvalidParameter("mean channel gain must be > 0");
}

double select_rate(const BroadbandPolicy& policy, double subband_hz, double sigma2_w) {
  policy.validate();
  if (!(subband_hz > 0.0) || !(sigma2_w > 0.0))
    throw InfeasibleLink("broadband sub-band is empty");
  const double snr = policy.max_power_w * policy.mean_gain * outage_factor(policy.target_error) / sigma2_w;
  const double achievable = subband_hz * std::log2(1.0 + snr);
  if (!(achievable > 0.0)) throw InfeasibleLink("no positive rate is achievable on this link");
  return std::min(policy.max_rate_bps, achievable);
}

double select_power(const BroadbandPolicy& policy, double rate_bps, double subband_hz,
                    double sigma2_w) {
  policy.validate();
  if (!(subband_hz > 0.0)) throw InfeasibleBand("broadband sub-band is empty");
  const double required = (std::exp2(rate_bps / subband_hz) - 1.0) * sigma2_w /
                          (policy.mean_gain * outage_factor(policy.target_error));
  return std::min(required, policy.max_power_w);
}

std::pair<BlockState, bool> block_advance(BlockState state, std::uint32_t slot_successes,
                                          bool frame_ended) {
  state.received = std::min(state.block_size, state.received + slot_successes);
  if (!frame_ended) return {state, false};
  ++state.frames_elapsed;
  return {state, state.received == state.block_size};
}

double throughput(std::uint64_t blocks_done, std::uint64_t frames_total, double rate_bps,
                  std::uint32_t block_size, std::uint32_t frame_slots) {
  if (frames_total == 0) throw InvalidParameter("throughput needs at least one frame");
  return rate_bps * block_size * static_cast<double>(blocks_done) /
         (static_cast<double>(frames_total) * frame_slots);
}

double energy_efficiency(double throughput_bps, double power_w) {
  if (!(power_w > 0.0)) throw UndefinedRatio("energy efficiency needs a positive transmit power");
  return throughput_bps / power_w;
}

}  // namespace coex::broadband
