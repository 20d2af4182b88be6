#include <benchmark/benchmark.h>

#include "coex/analysis.hpp"
#include "coex/engine.hpp"
#include "coex/phy.hpp"

namespace {

using namespace coex;

void BM_DecodeNomaSlot(benchmark::State& state) {
  Rng rng = make_stream(1, 0);
  for (auto _ : state) {
    const phy::Transmission bb{phy::draw_fading_power(5e-8, rng), 4e-5, 31.0};
    const phy::Transmission im{phy::draw_fading_power(2.4e-10, rng), 0.2, 1.1};
    benchmark::DoNotOptimize(phy::decode_noma_slot(bb, im, 8.3e-15));
  }
}
BENCHMARK(BM_DecodeNomaSlot);

void BM_RunFrames(benchmark::State& state) {
  engine::SimConfig c;
  c.model = state.range(0) ? engine::Model::Idealistic : engine::Model::FrameBased;
  c.band = state.range(1) ? phy::BandPlan::noma(1e6) : phy::BandPlan::fdma(1e6, 0.4);
  c.frame.horizon_frames = 10000;
  for (auto _ : state) benchmark::DoNotOptimize(engine::run(c));
  state.SetItemsProcessed(state.iterations() * c.frame.horizon_frames * c.frame.slots_per_frame);
}
BENCHMARK(BM_RunFrames)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ExpectedFrames(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(analysis::expected_frames(static_cast<std::uint32_t>(state.range(0)), 0.9, 10));
}
BENCHMARK(BM_ExpectedFrames)->Arg(32)->Arg(1024);

void BM_ChainMetrics(benchmark::State& state) {
  for (auto _ : state) {
    const auto chain = analysis::build_joint_chain(
        {0.1, 0.15}, analysis::idealistic_events(source::SamplingPolicy::semantics_aware(), 0.62));
    benchmark::DoNotOptimize(analysis::chain_metrics(chain, {5.0, 1.0}));
  }
}
BENCHMARK(BM_ChainMetrics);

}  // namespace

BENCHMARK_MAIN();
