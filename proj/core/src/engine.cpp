#include "coex/engine.hpp"

#include <string>

#include "coex/error.hpp"

namespace coex::engine {

void FrameConfig::validate() const {
  if (slots_per_frame < 2)
    throw InvalidConfig("slots_per_frame must be >= 2 (one uplink and one feedback slot)");
  if (!(slot_seconds > 0.0)) throw InvalidConfig("slot_seconds must be > 0");
  if (horizon_frames <= warmup_frames())
    throw InvalidConfig("horizon of " + std::to_string(horizon_frames) +
                        " frames does not exceed the warm-up of " +
                        std::to_string(warmup_frames()) + " frames");
}

std::uint64_t FrameConfig::warmup_frames() const {
  const std::uint64_t one_percent = horizon_frames / 100;
  return one_percent > 100 ? one_percent : 100;
}

void SimConfig::validate() const {
  frame.validate();
  band.validate();
  broadband_link.validate();
  intermittent_link.validate();
  noise.validate();
  dtmc.validate_ergodic();
  costs.validate();
  if (policy.kind == source::SamplingPolicy::Kind::Uniform && policy.period < 1)
    throw InvalidConfig("uniform sampling period must be >= 1");
  if (!(target_error > 0.0 && target_error < 1.0))
    throw InvalidConfig("target_error must lie in (0, 1)");
  if (!(max_rate_bps > 0.0)) throw InvalidConfig("max_rate_bps must be > 0");
  if (!(max_power_w > 0.0)) throw InvalidConfig("max_power_w must be > 0");
  if (block_size < 1) throw InvalidConfig("block_size must be >= 1");
  if (packet_bytes < 1) throw InvalidConfig("packet_bytes must be >= 1");
  for (const auto& o : {success_override, broadband_success_override}) {
    if (o && !(*o >= 0.0 && *o <= 1.0))
      throw InvalidConfig("success overrides must lie in [0, 1]");
  }
  if (band.intermittent_hz() <= 0.0 && !success_override)
    throw InvalidConfig("the intermittent user has no bandwidth");
}

std::optional<double> compute_udc(std::uint64_t retransmissions, std::uint64_t deliveries) {
  if (deliveries == 0) return std::nullopt;
  return static_cast<double>(retransmissions) / static_cast<double>(deliveries);
}

IntermittentMetrics accumulate(std::span<const SlotRecord> trace, const source::CostMatrix& costs) {
  Accumulator acc(costs);
  IntermittentMetrics m;
  for (const auto& rec : trace) {
    acc.record(rec.x, rec.x_hat);
    if (rec.intermittent) {
      ++m.attempts;
      if (phy::is_decoded(*rec.intermittent)) ++m.deliveries;
    }
  }
  m.tare = acc.tare();
  m.tacae = acc.tacae();
  return m;
}

namespace {

enum Stream : std::uint64_t { kSource = 0, kBroadbandChannel, kIntermittentChannel,
                              kIntermittentCoin, kBroadbandCoin };

struct Packet {
  source::SourceState value = 0;
  bool retransmission = false;
  bool sent = false;
};

RunResult simulate(const SimConfig& cfg, bool idealistic, std::vector<SlotRecord>* trace) {
  cfg.validate();

  Rng src_rng = make_stream(cfg.seed, kSource);
  Rng bb_channel = make_stream(cfg.seed, kBroadbandChannel);
  Rng im_channel = make_stream(cfg.seed, kIntermittentChannel);
  Rng im_coin = make_stream(cfg.seed, kIntermittentCoin);
  Rng bb_coin = make_stream(cfg.seed, kBroadbandCoin);

  const bool noma = cfg.band.scheme == phy::Scheme::Noma;
  const double beta_bb = phy::large_scale_gain(cfg.broadband_link);
  const double beta_im = phy::large_scale_gain(cfg.intermittent_link);
  const double bb_hz = cfg.band.broadband_hz();
  const double im_hz = cfg.band.intermittent_hz();
  const double sigma2_bb = phy::noise_power(cfg.noise, bb_hz);
  const double sigma2_im = phy::noise_power(cfg.noise, im_hz);

  RunResult result;
  result.config = cfg;
  result.seed = cfg.seed;

  BroadbandMetrics& bbm = result.broadband;
  bbm.active = bb_hz > 0.0;
  double bb_threshold = 0.0;
  if (bbm.active) {
    const broadband::BroadbandPolicy policy{cfg.target_error, cfg.max_rate_bps, cfg.max_power_w,
                                           beta_bb};
    bbm.rate_bps = broadband::select_rate(policy, bb_hz, sigma2_bb);
    bbm.power_w = broadband::select_power(policy, bbm.rate_bps, bb_hz, sigma2_bb);
    bb_threshold = phy::decode_threshold(bbm.rate_bps, bb_hz);
  }
  const double im_threshold =
      im_hz > 0.0 ? phy::decode_threshold(cfg.intermittent_rate_bps(), im_hz) : 0.0;
  const double im_power = cfg.max_power_w;

  // The idealistic model has no frame structure: every slot is an uplink slot
  // followed by instantaneous feedback, so it behaves like one-slot frames.
  const std::uint64_t slots_per_frame = cfg.frame.slots_per_frame;
  const std::uint64_t total_slots = cfg.frame.horizon_frames * slots_per_frame;
  const std::uint64_t warmup_slots = cfg.frame.warmup_frames() * slots_per_frame;
  const std::uint64_t bb_frame_len = idealistic ? 1 : slots_per_frame;

  Accumulator acc(cfg.costs);
  IntermittentMetrics& im = result.intermittent;

  source::SourceState x = 0;
  source::SourceState x_hat = 0;
  bool known_error = false;
  std::optional<Packet> queue;
  // Outcome of the latest intermittent transmission in the current frame.
  enum class FrameTx : std::uint8_t { None, Failed, Decoded };
  FrameTx frame_last_tx = FrameTx::None;

  broadband::BlockState block{cfg.block_size, 0, 0};
  bool block_counts = warmup_slots == 0;
  std::uint64_t frames_in_counted_blocks = 0;

  if (trace) trace->clear();

  for (std::uint64_t t = 0; t < total_slots; ++t) {
    const bool measuring = t >= warmup_slots;
    const std::uint64_t k = t % slots_per_frame;
    const bool uplink = idealistic || k + 1 < slots_per_frame;
    const bool frame_end = idealistic || k + 1 == slots_per_frame;

    const source::SourceState x_prev = x;
    if (t > 0) x = source::dtmc_step(x, cfg.dtmc, src_rng);

    if (source::sampling_decision(cfg.policy, x, x_prev, known_error, t)) {
      const bool feedback_driven = cfg.policy.uses_feedback() && known_error;
      queue = Packet{x, feedback_driven, false};
      if (cfg.policy.uses_feedback()) known_error = false;
    }

    std::optional<phy::Transmission> bb_tx;
    std::optional<phy::Transmission> im_tx;
    if (uplink && bbm.active) {
      bb_tx = phy::Transmission{phy::draw_fading_power(beta_bb, bb_channel), bbm.power_w, bb_threshold};
    }
    const bool im_sends = uplink && queue && !queue->sent;
    if (im_sends) {
      im_tx = phy::Transmission{phy::draw_fading_power(beta_im, im_channel), im_power, im_threshold};
    }

    phy::DecodeOutcome outcome;
    if (bb_tx || im_tx) {
      outcome = noma ? phy::decode_noma_slot(bb_tx, im_tx, sigma2_bb)
                     : phy::decode_fdma_slot(bb_tx, sigma2_bb, im_tx, sigma2_im);
    }
    if (im_tx && cfg.success_override) {
      outcome.intermittent = bernoulli(im_coin, *cfg.success_override) ? phy::Decode::DecodedDirect
                                                                       : phy::Decode::Failed;
    }
    if (bb_tx && cfg.broadband_success_override) {
      outcome.broadband = bernoulli(bb_coin, *cfg.broadband_success_override)
                              ? phy::Decode::DecodedDirect
                              : phy::Decode::Failed;
    }

    if (im_sends) {
      queue->sent = true;
      const bool ok = phy::is_decoded(*outcome.intermittent);
      if (measuring) {
        ++im.attempts;
        if (queue->retransmission) ++im.retransmissions;
        if (ok) ++im.deliveries;
      }
      if (ok) x_hat = source::estimator_update(x_hat, queue->value);
      if (idealistic) {
        if (cfg.policy.uses_feedback()) known_error = !ok;
      } else {
        frame_last_tx = ok ? FrameTx::Decoded : FrameTx::Failed;
      }
    }

    std::uint32_t bb_ok = 0;
    if (bb_tx) {
      bb_ok = phy::is_decoded(*outcome.broadband) ? 1 : 0;
      if (measuring) {
        ++bbm.slot_attempts;
        bbm.slot_successes += bb_ok;
      }
    }

    if (measuring) {
      acc.record(x, x_hat);
      if (trace) trace->push_back(SlotRecord{x, x_hat, outcome.broadband, outcome.intermittent});
    }

    if (!idealistic && frame_end) {
      if (frame_last_tx != FrameTx::None && cfg.policy.uses_feedback())
        known_error = frame_last_tx == FrameTx::Failed;
      frame_last_tx = FrameTx::None;
    }

    if (bbm.active && (bb_tx || frame_end)) {
      auto [next, done] = broadband::block_advance(block, bb_ok, frame_end);
      block = next;
      if (done) {
        if (block_counts) {
          ++bbm.blocks_done;
          frames_in_counted_blocks += block.frames_elapsed;
        }
        block = broadband::BlockState{cfg.block_size, 0, 0};
        // A block counts only if it starts inside the measurement window.
        block_counts = t + 1 >= warmup_slots;
      }
    }
  }

  const std::uint64_t measured_slots = total_slots - warmup_slots;
  result.measured_slots = measured_slots;
  im.tare = acc.tare();
  im.tacae = acc.tacae();
  im.udc = compute_udc(im.retransmissions, im.deliveries);

  if (bbm.active) {
    bbm.throughput_bps = broadband::throughput(bbm.blocks_done, measured_slots / bb_frame_len,
                                               bbm.rate_bps, cfg.block_size,
                                               static_cast<std::uint32_t>(bb_frame_len));
    bbm.energy_efficiency = broadband::energy_efficiency(bbm.throughput_bps, bbm.power_w);
    if (bbm.blocks_done > 0)
      bbm.mean_frames_per_block = static_cast<double>(frames_in_counted_blocks) / bbm.blocks_done;
  }
  return result;
}

}  // namespace

RunResult run_frame_based(const SimConfig& config, std::vector<SlotRecord>* trace) {
  if (config.model != Model::FrameBased)
    throw InvalidConfig("run_frame_based called with a non frame-based config");
  return simulate(config, false, trace);
}

RunResult run_idealistic(const SimConfig& config, std::vector<SlotRecord>* trace) {
  if (config.model != Model::Idealistic)
    throw InvalidConfig("run_idealistic called with a non idealistic config");
  return simulate(config, true, trace);
}

RunResult run(const SimConfig& config, std::vector<SlotRecord>* trace) {
  return config.model == Model::Idealistic ? run_idealistic(config, trace)
                                           : run_frame_based(config, trace);
}

}  // namespace coex::engine
