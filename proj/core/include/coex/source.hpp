#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "coex/rng.hpp"

namespace coex::source {

/// Two-state Markov source: p_s = P(0 -> 1), q_s = P(1 -> 0).
struct DtmcParams {
  double p_s = 0.1;
  double q_s = 0.15;

  /// Throws InvalidParameter unless 0 < p_s, q_s < 1.
  void validate_ergodic() const;
  bool operator==(const DtmcParams&) const = default;
};

/// Source state X_t in {0, 1}.
using SourceState = std::uint8_t;

struct ReconstructionState {
  SourceState x_hat = 0;
  bool error = false;
};

/// c01 is charged when X = 0 and the estimate is 1, c10 when X = 1 and the estimate is 0.
struct CostMatrix {
  double c01 = 5.0;
  double c10 = 1.0;

  void validate() const;
  bool operator==(const CostMatrix&) const = default;
  [[nodiscard]] double max_cost() const { return c01 > c10 ? c01 : c10; }
};

struct SamplingPolicy {
  enum class Kind { SemanticsAware, ChangeAware, Uniform };
  Kind kind = Kind::SemanticsAware;
  std::uint64_t period = 1;  // Uniform only

  static SamplingPolicy semantics_aware() { return {Kind::SemanticsAware, 1}; }
  static SamplingPolicy change_aware() { return {Kind::ChangeAware, 1}; }
  static SamplingPolicy uniform(std::uint64_t period);

  [[nodiscard]] bool uses_feedback() const { return kind == Kind::SemanticsAware; }
  bool operator==(const SamplingPolicy&) const = default;
};

/// One step of the source chain. Accepts the boundary values 0 and 1.
[[nodiscard]] SourceState dtmc_step(SourceState state, const DtmcParams& params, Rng& rng);

/// (P(X = 0), P(X = 1)) of the ergodic chain.
[[nodiscard]] std::pair<double, double> dtmc_stationary(const DtmcParams& params);

/// Whether to generate a sample at `slot`. `known_error` must only reflect
/// feedback the transmitter actually received.
[[nodiscard]] bool sampling_decision(const SamplingPolicy& policy, SourceState x_now,
                                     SourceState x_prev, bool known_error, std::uint64_t slot);

/// The estimate takes the delivered content, whatever its age.
[[nodiscard]] SourceState estimator_update(SourceState x_hat_prev,
                                           std::optional<SourceState> delivered);

[[nodiscard]] double slot_cost(SourceState x, SourceState x_hat, const CostMatrix& costs);

}  // namespace coex::source
