#include "coex/source.hpp"

#include "coex/error.hpp"

namespace coex::source {

void DtmcParams::validate_ergodic() const {
  if (!(p_s > 0.0 && p_s < 1.0) || !(q_s > 0.0 && q_s < 1.0))
    throw InvalidParameter("source transition probabilities must lie in (0, 1)");
}

void CostMatrix::validate() const {
  if (!(c01 >= 0.0) || !(c10 >= 0.0)) throw InvalidParameter("actuation costs must be >= 0");
}

SamplingPolicy SamplingPolicy::uniform(std::uint64_t period) {
  if (period < 1) throw InvalidParameter("uniform sampling period must be >= 1");
  return {Kind::Uniform, period};
}

SourceState dtmc_step(SourceState state, const DtmcParams& params, Rng& rng) {
  const double flip = state == 0 ? params.p_s : params.q_s;
  return bernoulli(rng, flip) ? static_cast<SourceState>(1 - state) : state;
}

std::pair<double, double> dtmc_stationary(const DtmcParams& params) {
  params.validate_ergodic();
  const double sum = params.p_s + params.q_s;
  return {params.q_s / sum, params.p_s / sum};
}

bool sampling_decision(const SamplingPolicy& policy, SourceState x_now, SourceState x_prev,
                       bool known_error, std::uint64_t slot) {
  switch (policy.kind) {
    case SamplingPolicy::Kind::SemanticsAware:
      return x_now != x_prev || known_error;
    case SamplingPolicy::Kind::ChangeAware:
      return x_now != x_prev;
    case SamplingPolicy::Kind::Uniform:
      return slot % policy.period == 0;
  }
  return false;
}

SourceState estimator_update(SourceState x_hat_prev, std::optional<SourceState> delivered) {
  return delivered.value_or(x_hat_prev);
}

double slot_cost(SourceState x, SourceState x_hat, const CostMatrix& costs) {
  if (x == x_hat) return 0.0;
  return x == 0 ? costs.c01 : costs.c10;
}

}  // namespace coex::source
