#include <benchmark/benchmark.h>

#include "lvs/scenario.hpp"
#include "lvs/scheduler.hpp"

namespace {

lvs::Dataset bench_dataset(int slaves, int walks) {
  lvs::ScenarioConfig cfg;
  cfg.seed = 7;
  cfg.num_slaves = slaves;
  cfg.num_persons = 4;
  cfg.walks_per_person = walks;
  cfg.canvas_width = 96;
  cfg.canvas_height = 72;
  cfg.episode_frames = 600;
  cfg.confusion_temperature = 0.5;
  cfg.top1_recall = 0.7;
  return lvs::generate(cfg).dataset;
}

lvs::EngineConfig bench_engine() {
  lvs::EngineConfig cfg;
  cfg.decision_interval = 10;
  return cfg;
}

void BM_GreedySelect(benchmark::State& state) {
  const lvs::Dataset ds = bench_dataset(1, static_cast<int>(state.range(0)));
  const lvs::CameraId cam = ds.slave_ids()[0];
  const auto pool = ds.tubes_of(cam);
  lvs::SelectionState st;
  st.camera = cam;
  st.now = 0;
  const lvs::MasterObservationSet obs{0, {0, 1, 2, 3}};
  const lvs::EngineConfig cfg = bench_engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lvs::greedy_select(pool, st, obs, ds.reid, cfg));
  }
}
BENCHMARK(BM_GreedySelect)->Arg(2)->Arg(4)->Arg(8);

void BM_RunEpisode(benchmark::State& state) {
  const lvs::Dataset ds = bench_dataset(static_cast<int>(state.range(0)), 3);
  const lvs::EngineConfig cfg = bench_engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lvs::run_episode(ds, cfg));
  }
}
BENCHMARK(BM_RunEpisode)->Arg(1)->Arg(3);

void BM_OracleExhaustive(benchmark::State& state) {
  const lvs::Dataset ds = bench_dataset(1, 3);  // 12-tube pool
  const lvs::CameraId cam = ds.slave_ids()[0];
  const auto pool = ds.tubes_of(cam);
  lvs::SelectionState st;
  st.camera = cam;
  st.now = 0;
  const lvs::MasterObservationSet obs{0, {0, 1, 2, 3}};
  const lvs::EngineConfig cfg = bench_engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lvs::oracle_exhaustive(pool, st, obs, ds.reid, cfg));
  }
}
BENCHMARK(BM_OracleExhaustive);

}  // namespace
