#include "coex/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "coex/error.hpp"

namespace coex::analysis {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

constexpr double kEventTolerance = 1e-12;

}  // namespace

double tare_idealistic_closed_form(double p_s, double q_s, double p) {
  source::DtmcParams{p_s, q_s}.validate_ergodic();
  if (!in_unit(p)) throw InvalidParameter("success probability must lie in [0, 1]");
  const double fail = 1.0 - p;
  return 2.0 * p_s * q_s * fail / (p * (p_s + q_s) + 4.0 * p_s * q_s * fail);
}

void StxEvents::validate() const {
  if (!in_unit(sample_no_tx) || !in_unit(sample_tx) || !in_unit(decoded) || !in_unit(failed))
    throw InvalidParameter("event probabilities must lie in [0, 1]");
  if (std::abs(decoded + failed - sample_tx) > kEventTolerance)
    throw InvalidParameter("decoded + failed must equal the transmit probability");
  if (sample_no_tx + sample_tx > 1.0 + kEventTolerance)
    throw InvalidParameter("sampling probabilities exceed 1");
}

EventProbabilities idealistic_events(const source::SamplingPolicy& policy, double p) {
  if (!in_unit(p)) throw InvalidParameter("success probability must lie in [0, 1]");
  const StxEvents always{0.0, 1.0, p, 1.0 - p};
  const StxEvents never{0.0, 0.0, 0.0, 0.0};
  using Kind = source::SamplingPolicy::Kind;
  switch (policy.kind) {
    case Kind::SemanticsAware:
      return {always, always};
    case Kind::ChangeAware:
      return {always, never};
    case Kind::Uniform:
      if (policy.period != 1)
        throw InvalidParameter("uniform sampling with period > 1 is not Markov in (X, E)");
      return {always, always};
  }
  return {};
}

JointChain build_joint_chain(const source::DtmcParams& dtmc, const EventProbabilities& events) {
  dtmc.validate_ergodic();
  events.on_change.validate();
  events.in_error.validate();

  JointChain chain;
  chain.events = events;
  chain.dtmc = dtmc;
  auto& P = chain.transition;

  for (int x = 0; x < 2; ++x) {
    const double flip = x == 0 ? dtmc.p_s : dtmc.q_s;
    const int y = 1 - x;

    // Synced: a flip opens an error unless the triggered update gets through.
    const auto synced = JointChain::index(x, 0);
    P[synced][JointChain::index(x, 0)] += 1.0 - flip;
    P[synced][JointChain::index(y, 0)] += flip * events.on_change.decoded;
    P[synced][JointChain::index(y, 1)] += flip * (1.0 - events.on_change.decoded);

    // In error the estimate is y, so a flip resyncs on its own.
    const auto erroneous = JointChain::index(x, 1);
    P[erroneous][JointChain::index(y, 0)] += flip;
    P[erroneous][JointChain::index(x, 0)] += (1.0 - flip) * events.in_error.decoded;
    P[erroneous][JointChain::index(x, 1)] += (1.0 - flip) * (1.0 - events.in_error.decoded);
  }
  return chain;
}

Vector4 stationary_distribution(const Matrix4& transition) {
  for (const auto& row : transition) {
    double sum = 0.0;
    for (double v : row) {
      if (!in_unit(v)) throw InvalidParameter("transition entries must lie in [0, 1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidParameter("transition rows must sum to 1");
  }

  // (P^T - I) pi = 0 with the last balance equation replaced by sum(pi) = 1.
  std::array<std::array<double, 5>, 4> a{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) a[i][j] = transition[j][i] - (i == j ? 1.0 : 0.0);
  }
  for (std::size_t j = 0; j < 4; ++j) a[3][j] = 1.0;
  a[3][4] = 1.0;

  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < 4; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-13)
      throw NoUniqueStationary("balance equations are singular; chain is not irreducible");
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
    }
  }

  Vector4 pi{};
  for (std::size_t i = 0; i < 4; ++i) pi[i] = a[i][4] / a[i][i];

  double residual = std::abs(pi[0] + pi[1] + pi[2] + pi[3] - 1.0);
  for (std::size_t j = 0; j < 4; ++j) {
    double next = 0.0;
    for (std::size_t i = 0; i < 4; ++i) next += pi[i] * transition[i][j];
    residual = std::max(residual, std::abs(next - pi[j]));
  }
  if (residual > 1e-12) throw NoUniqueStationary("stationary residual above 1e-12");
  return pi;
}

ChainMetrics chain_metrics(const JointChain& chain, const source::CostMatrix& costs) {
  costs.validate();
  ChainMetrics m;
  m.stationary = stationary_distribution(chain.transition);
  const double err0 = m.stationary[JointChain::index(0, 1)];  // X = 0, estimate 1
  const double err1 = m.stationary[JointChain::index(1, 1)];  // X = 1, estimate 0
  m.tare = err0 + err1;
  m.tacae = err0 * costs.c01 + err1 * costs.c10;
  return m;
}

ErrorChain averaged_error_chain(const JointChain& chain) {
  const auto [pi0, pi1] = source::dtmc_stationary(chain.dtmc);
  const double weight[2] = {pi0, pi1};
  const auto& P = chain.transition;
  ErrorChain e;
  for (int x = 0; x < 2; ++x) {
    const auto synced = JointChain::index(x, 0);
    const auto erroneous = JointChain::index(x, 1);
    e.p00 += weight[x] * (P[synced][JointChain::index(0, 0)] + P[synced][JointChain::index(1, 0)]);
    e.p11 += weight[x] * (P[erroneous][JointChain::index(0, 1)] +
                          P[erroneous][JointChain::index(1, 1)]);
  }
  const double leave_sync = 1.0 - e.p00;
  const double leave_error = 1.0 - e.p11;
  if (leave_sync + leave_error <= 0.0) throw NoUniqueStationary("error chain never moves");
  e.tare = leave_sync / (leave_sync + leave_error);
  return e;
}

double expected_frames(std::uint32_t block_size, double p, std::uint32_t slots_per_frame) {
  if (block_size < 1) throw InvalidParameter("block size must be >= 1");
  if (slots_per_frame < 2) throw InvalidParameter("frames need at least one uplink slot");
  if (!(p > 0.0 && p <= 1.0)) {
    if (p == 0.0) throw Divergence("expected frames diverge at zero success probability");
    throw InvalidParameter("success probability must lie in (0, 1]");
  }

  const std::uint32_t m = slots_per_frame - 1;
  std::vector<double> pmf(m + 1, 0.0);
  if (p == 1.0) {
    pmf[m] = 1.0;
  } else {
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (std::uint32_t j = 0; j <= m; ++j) {
      const double log_choose = std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0);
      pmf[j] = std::exp(log_choose + j * lp + (m - j) * lq);
    }
  }

  // frames[n]: expected frames to finish when n packets are still missing.
  std::vector<double> frames(block_size + 1, 0.0);
  for (std::uint32_t n = 1; n <= block_size; ++n) {
    double acc = 1.0;
    for (std::uint32_t j = 1; j <= m; ++j) acc += pmf[j] * frames[n > j ? n - j : 0];
    frames[n] = acc / (1.0 - pmf[0]);
  }
  return frames[block_size];
}

double fdma_intermittent_success(const phy::LinkGeometry& geom, const phy::NoiseModel& noise,
                                 double b2_hz, double rate_bps, double power_w) {
  const double beta = phy::large_scale_gain(geom);
  const double sigma2 = phy::noise_power(noise, b2_hz);
  const double gamma_min = phy::decode_threshold(rate_bps, b2_hz);
  return phy::closed_form_success_prob(beta, power_w, sigma2, gamma_min);
}

}  // namespace coex::analysis
