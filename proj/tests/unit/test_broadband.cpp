#include <gtest/gtest.h>

#include <cmath>

#include "coex/broadband.hpp"
#include "coex/error.hpp"
#include "coex/phy.hpp"

namespace {

using namespace coex;
using namespace coex::broadband;

const double kBeta50 = phy::large_scale_gain({50.0, 2e9, 2.6, 10.0});

double sigma2(double hz) { return phy::noise_power({190.0, 5.0}, hz); }

TEST(SelectRate, CappedAtMaximum) {
  const BroadbandPolicy p{0.1, 5e6, 0.2, kBeta50};
  EXPECT_DOUBLE_EQ(select_rate(p, 1e6, sigma2(1e6)), 5e6);
}

TEST(SelectRate, UncappedAchievableRate) {
  const BroadbandPolicy p{0.1, 1e9, 0.2, kBeta50};
  const double oracle = 1e6 * std::log2(1.0 + 0.2 * kBeta50 * std::log(1.0 / 0.9) / sigma2(1e6));
  EXPECT_NEAR(select_rate(p, 1e6, sigma2(1e6)), oracle, oracle * 1e-12);
  EXPECT_NEAR(oracle, 17.1e6, 0.1e6);
}

TEST(SelectRate, InfeasibleWhenNoiseDominates) {
  const BroadbandPolicy p{0.1, 5e6, 0.2, kBeta50};
  EXPECT_THROW((void)select_rate(p, 1e6, 1e300), InfeasibleLink);
  EXPECT_THROW((void)select_rate(p, 0.0, sigma2(1e6)), InfeasibleLink);
}

TEST(SelectRate, MonotoneInTargetError) {
  double prev = 0.0;
  for (double eps : {0.01, 0.05, 0.1, 0.3, 0.6, 0.9, 0.99}) {
    const double r = select_rate({eps, 1e12, 0.2, kBeta50}, 1e6, sigma2(1e6));
    EXPECT_GT(r, prev);
    prev = r;
  }
}

TEST(SelectPower, ReferenceValues) {
  const BroadbandPolicy p{0.1, 5e6, 0.2, kBeta50};
  EXPECT_NEAR(select_power(p, 5e6, 1e6, 8.295e-15), 4.47e-5, 4.47e-7);
  EXPECT_NEAR(select_power(p, 5e6, 0.6e6, sigma2(0.6e6)), 2.78e-4, 2.78e-6);
}

TEST(SelectPower, ClampedAtMaximum) {
  const BroadbandPolicy p{0.1, 5e6, 0.2, 1e-14};
  EXPECT_DOUBLE_EQ(select_power(p, 5e6, 1e6, sigma2(1e6)), 0.2);
}

TEST(SelectPower, NeverExceedsMaximum) {
  for (double d : {10.0, 50.0, 200.0, 800.0, 3000.0}) {
    for (double b : {0.1e6, 0.5e6, 1e6}) {
      const BroadbandPolicy p{0.1, 5e6, 0.2, phy::large_scale_gain({d, 2e9, 2.6, 10.0})};
      const double r = select_rate(p, b, sigma2(b));
      EXPECT_LE(select_power(p, r, b, sigma2(b)), 0.2);
    }
  }
}

// Driving every uplink slot of one frame through block_advance.
std::pair<BlockState, bool> run_frame(BlockState s, int uplink_slots, bool all_success) {
  bool done = false;
  for (int k = 0; k < uplink_slots; ++k) {
    auto [next, d] = block_advance(s, all_success ? 1 : 0, false);
    s = next;
    done = done || d;
  }
  return block_advance(s, 0, true);
}

TEST(BlockAdvance, OneFrameBlock) {
  auto [s, done] = run_frame({9, 0, 0}, 9, true);
  EXPECT_TRUE(done);
  EXPECT_EQ(s.frames_elapsed, 1u);
}

TEST(BlockAdvance, FourFramesForThirtyTwoPackets) {
  BlockState s{32, 0, 0};
  int frames = 0;
  bool done = false;
  while (!done) {
    std::tie(s, done) = run_frame(s, 9, true);
    ++frames;
  }
  EXPECT_EQ(frames, 4);
  EXPECT_EQ(s.frames_elapsed, 4u);
  EXPECT_EQ(s.received, 32u);
}

TEST(BlockAdvance, DoneOnlyAtFrameEnd) {
  auto [mid, mid_done] = block_advance({32, 31, 3}, 3, false);
  EXPECT_EQ(mid.received, 32u);
  EXPECT_FALSE(mid_done);
  auto [end, end_done] = block_advance(mid, 0, true);
  EXPECT_TRUE(end_done);
  EXPECT_EQ(end.frames_elapsed, 4u);
}

TEST(Throughput, Examples) {
  EXPECT_DOUBLE_EQ(throughput(1, 4, 5e6, 32, 10), 0.8 * 5e6);
  EXPECT_DOUBLE_EQ(throughput(0, 10, 5e6, 32, 10), 0.0);
  EXPECT_DOUBLE_EQ(throughput(7, 7, 5e6, 9, 10), 0.9 * 5e6);
  EXPECT_THROW((void)throughput(1, 0, 5e6, 32, 10), InvalidParameter);
}

TEST(EnergyEfficiency, Examples) {
  EXPECT_NEAR(energy_efficiency(4e6, 4.47e-5), 8.95e10, 8.95e8);
  EXPECT_DOUBLE_EQ(energy_efficiency(4e6, 2.0) / energy_efficiency(4e6, 4.0), 2.0);
  EXPECT_DOUBLE_EQ(energy_efficiency(0.0, 1.0), 0.0);
  EXPECT_THROW((void)energy_efficiency(1.0, 0.0), UndefinedRatio);
}

}  // namespace
