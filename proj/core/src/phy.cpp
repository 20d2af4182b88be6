#include "coex/phy.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "coex/error.hpp"

namespace coex::phy {

void LinkGeometry::validate() const {
  if (!(distance_m > 0.0)) throw InvalidParameter("distance_m must be > 0");
  if (!(carrier_hz > 0.0)) throw InvalidParameter("carrier_hz must be > 0");
  if (!(pathloss_exp >= 2.0)) throw InvalidParameter("pathloss_exp must be >= 2");
  if (!(antenna_gain_product > 0.0)) throw InvalidParameter("antenna_gain_product must be > 0");
}

void NoiseModel::validate() const {
  if (!(noise_temp_k > 0.0)) throw InvalidParameter("noise_temp_k must be > 0");
  if (!std::isfinite(noise_figure_db)) throw InvalidParameter("noise_figure_db must be finite");
}

BandPlan BandPlan::fdma(double total_hz, double b2_fraction) {
  if (!(b2_fraction >= 0.0 && b2_fraction <= 1.0))
    throw InvalidParameter("b2 fraction must lie in [0, 1]");
  BandPlan plan;
  plan.total_hz = total_hz;
  plan.b2_hz = total_hz * b2_fraction;
  plan.b1_hz = total_hz - plan.b2_hz;
  plan.b3_hz = 0.0;
  plan.scheme = Scheme::Fdma;
  plan.validate();
  return plan;
}

BandPlan BandPlan::noma(double total_hz) {
  BandPlan plan;
  plan.total_hz = total_hz;
  plan.b1_hz = 0.0;
  plan.b2_hz = 0.0;
  plan.b3_hz = total_hz;
  plan.scheme = Scheme::Noma;
  plan.validate();
  return plan;
}

bool BandPlan::assigned(int user, int subband) const {
  if (scheme == Scheme::Fdma) return (user == 1 && subband == 1) || (user == 2 && subband == 2);
  return subband == 3 && (user == 1 || user == 2);
}

void BandPlan::validate() const {
  if (!(total_hz > 0.0)) throw InvalidParameter("total bandwidth must be > 0");
  if (b1_hz < 0.0 || b2_hz < 0.0 || b3_hz < 0.0)
    throw InvalidParameter("sub-band widths must be >= 0");
  const double sum = b1_hz + b2_hz + b3_hz;
  if (std::abs(sum - total_hz) > 1e-9 * total_hz)
    throw InvalidParameter("b1 + b2 + b3 must equal the total bandwidth");
  if (scheme == Scheme::Fdma && b3_hz != 0.0)
    throw InvalidParameter("FDMA requires b3 = 0");
  if (scheme == Scheme::Noma && (b1_hz != 0.0 || b2_hz != 0.0))
    throw InvalidParameter("NOMA requires b1 = b2 = 0");
}

double large_scale_gain(const LinkGeometry& geom) {
  geom.validate();
  const double four_pi_f = 4.0 * std::numbers::pi * geom.carrier_hz;
  return geom.antenna_gain_product * kSpeedOfLight * kSpeedOfLight /
         (four_pi_f * four_pi_f * std::pow(geom.distance_m, geom.pathloss_exp));
}

double noise_power(const NoiseModel& noise, double subband_hz) {
  noise.validate();
  if (!(subband_hz >= 0.0)) throw InvalidParameter("sub-band width must be >= 0");
  return subband_hz * kBoltzmann * noise.noise_temp_k * std::pow(10.0, noise.noise_figure_db / 10.0);
}

double decode_threshold(double rate_bps, double subband_hz) {
  if (rate_bps < 0.0) throw InvalidParameter("rate must be >= 0");
  if (rate_bps == 0.0) return 0.0;
  if (!(subband_hz > 0.0))
    throw InfeasibleBand("positive rate " + std::to_string(rate_bps) + " b/s over an empty sub-band");
  return std::exp2(rate_bps / subband_hz) - 1.0;
}

FadingDraw draw_fading_power(double beta, Rng& rng) {
  // |h|^2 of a CSCG coefficient with variance beta is exponential with mean beta.
  return FadingDraw{std::exponential_distribution<double>(1.0)(rng) * beta};
}

double sinr(FadingDraw own, double own_power_w, std::optional<FadingDraw> other,
            double other_power_w, double sigma2_w) {
  const double interference = other ? other->power_gain * other_power_w : 0.0;
  return own.power_gain * own_power_w / (interference + sigma2_w);
}

double closed_form_success_prob(double beta, double power_w, double sigma2_w, double gamma_min) {
  if (gamma_min < 0.0) throw InvalidParameter("gamma_min must be >= 0");
  if (gamma_min == 0.0) return 1.0;
  if (power_w <= 0.0) return 0.0;
  if (!(beta > 0.0)) throw InvalidParameter("beta must be > 0");
  return std::exp(-gamma_min * sigma2_w / (beta * power_w));
}

std::optional<Decode> decode_single(const std::optional<Transmission>& tx, double sigma2_w) {
  if (!tx) return std::nullopt;
  const double snr = sinr(tx->gain, tx->power_w, std::nullopt, 0.0, sigma2_w);
  return snr >= tx->threshold ? Decode::DecodedDirect : Decode::Failed;
}

DecodeOutcome decode_fdma_slot(const std::optional<Transmission>& broadband,
                               double sigma2_broadband_w,
                               const std::optional<Transmission>& intermittent,
                               double sigma2_intermittent_w) {
  return DecodeOutcome{decode_single(broadband, sigma2_broadband_w),
                       decode_single(intermittent, sigma2_intermittent_w)};
}

DecodeOutcome decode_noma_slot(const std::optional<Transmission>& broadband,
                               const std::optional<Transmission>& intermittent,
                               double sigma2_w) {
  if (!broadband || !intermittent) {
    return DecodeOutcome{decode_single(broadband, sigma2_w), decode_single(intermittent, sigma2_w)};
  }
  const auto& a = *broadband;
  const auto& b = *intermittent;

  const bool a_direct = sinr(a.gain, a.power_w, b.gain, b.power_w, sigma2_w) >= a.threshold;
  const bool b_direct = sinr(b.gain, b.power_w, a.gain, a.power_w, sigma2_w) >= b.threshold;

  DecodeOutcome out{Decode::Failed, Decode::Failed};
  if (a_direct) out.broadband = Decode::DecodedDirect;
  if (b_direct) out.intermittent = Decode::DecodedDirect;

  // Capture of exactly one signal: cancel it, retry the other against noise only.
  if (a_direct && !b_direct) {
    if (sinr(b.gain, b.power_w, std::nullopt, 0.0, sigma2_w) >= b.threshold)
      out.intermittent = Decode::DecodedAfterSic;
  } else if (b_direct && !a_direct) {
    if (sinr(a.gain, a.power_w, std::nullopt, 0.0, sigma2_w) >= a.threshold)
      out.broadband = Decode::DecodedAfterSic;
  }
  return out;
}

}  // namespace coex::phy
