#pragma once

#include <optional>

#include "coex/rng.hpp"

/// Physical-layer math: path loss, thermal noise, Rayleigh block fading and
/// per-slot decoding for orthogonal (FDMA) and overlapping (NOMA) sub-bands.
///
/// User 1 is the broadband user, user 2 the intermittent user.
namespace coex::phy {

inline constexpr double kSpeedOfLight = 2.998e8;      // m/s
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K

struct LinkGeometry {
  double distance_m = 50.0;
  double carrier_hz = 2e9;
  double pathloss_exp = 2.6;
  double antenna_gain_product = 10.0;

  void validate() const;
  bool operator==(const LinkGeometry&) const = default;
};

struct NoiseModel {
  double noise_temp_k = 190.0;
  double noise_figure_db = 5.0;

  void validate() const;
  bool operator==(const NoiseModel&) const = default;
};

enum class Scheme { Fdma, Noma };

/// Split of the total band into a broadband-only sub-band (1), an
/// intermittent-only sub-band (2) and a shared sub-band (3).
struct BandPlan {
  double total_hz = 1e6;
  double b1_hz = 0.6e6;
  double b2_hz = 0.4e6;
  double b3_hz = 0.0;
  Scheme scheme = Scheme::Fdma;

  static BandPlan fdma(double total_hz, double b2_fraction);
  static BandPlan noma(double total_hz);

  /// alpha_{user,subband}; user in {1,2}, subband in {1,2,3}.
  [[nodiscard]] bool assigned(int user, int subband) const;
  [[nodiscard]] double broadband_hz() const { return scheme == Scheme::Fdma ? b1_hz : b3_hz; }
  [[nodiscard]] double intermittent_hz() const { return scheme == Scheme::Fdma ? b2_hz : b3_hz; }

  void validate() const;
  bool operator==(const BandPlan&) const = default;
};

struct FadingDraw {
  double power_gain = 0.0;  // |h|^2
};

enum class Decode { Failed, DecodedDirect, DecodedAfterSic };

/// Outcome classes used for NOMA accounting: I (intended signal decoded) or E.
enum class OutcomeClass { I, E };

[[nodiscard]] constexpr bool is_decoded(Decode d) { return d != Decode::Failed; }
[[nodiscard]] constexpr OutcomeClass outcome_class(Decode d) {
  return is_decoded(d) ? OutcomeClass::I : OutcomeClass::E;
}

/// What one user put on the air in a slot.
struct Transmission {
  FadingDraw gain;
  double power_w = 0.0;
  double threshold = 0.0;  // gamma_min on the sub-band it occupies
};

/// Per-user result of one slot; nullopt when the user did not transmit.
struct DecodeOutcome {
  std::optional<Decode> broadband;
  std::optional<Decode> intermittent;
};

[[nodiscard]] double large_scale_gain(const LinkGeometry& geom);
[[nodiscard]] double noise_power(const NoiseModel& noise, double subband_hz);
[[nodiscard]] double decode_threshold(double rate_bps, double subband_hz);
[[nodiscard]] FadingDraw draw_fading_power(double beta, Rng& rng);

/// SINR of the own signal; `other` is nullopt when the other user is silent
/// or sits on a different sub-band.
[[nodiscard]] double sinr(FadingDraw own, double own_power_w,
                          std::optional<FadingDraw> other, double other_power_w,
                          double sigma2_w);

/// Interference-free success probability exp(-gamma_min sigma^2 / (beta P)).
[[nodiscard]] double closed_form_success_prob(double beta, double power_w, double sigma2_w,
                                              double gamma_min);

/// Single user on its own sub-band: decoded iff SNR >= threshold.
[[nodiscard]] std::optional<Decode> decode_single(const std::optional<Transmission>& tx,
                                                  double sigma2_w);

[[nodiscard]] DecodeOutcome decode_fdma_slot(const std::optional<Transmission>& broadband,
                                             double sigma2_broadband_w,
                                             const std::optional<Transmission>& intermittent,
                                             double sigma2_intermittent_w);

/// Capture + SIC on the shared band.
[[nodiscard]] DecodeOutcome decode_noma_slot(const std::optional<Transmission>& broadband,
                                             const std::optional<Transmission>& intermittent,
                                             double sigma2_w);

}  // namespace coex::phy
