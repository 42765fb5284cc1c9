#include <benchmark/benchmark.h>

#include "hetsynth/scenario.hpp"
#include "hetsynth/synthesis.hpp"

using namespace hetsynth;

namespace {

const Scenario& case1()
{
    static const Scenario sc = load_scenario(std::string(HETSYNTH_SCENARIO_DIR) + "/case1.scn");
    return sc;
}

Gr1Spec ground_spec()
{
    const auto& w = case1().world;
    return spec_for_agent(w, "Digit", View::Synthesis, w.agent("Digit").objective);
}

void BM_BuildGame(benchmark::State& state)
{
    const Gr1Spec spec = ground_spec();
    for (auto _ : state) benchmark::DoNotOptimize(build_game(spec));
}
BENCHMARK(BM_BuildGame)->Unit(benchmark::kMillisecond);

void BM_SolveGround(benchmark::State& state)
{
    const GameGraph game = build_game(ground_spec());
    for (auto _ : state) benchmark::DoNotOptimize(solve_gr1(game));
}
BENCHMARK(BM_SolveGround)->Unit(benchmark::kMillisecond);

void BM_SynthesizeGround(benchmark::State& state)
{
    const Gr1Spec spec = ground_spec();
    for (auto _ : state) benchmark::DoNotOptimize(synthesize(spec));
}
BENCHMARK(BM_SynthesizeGround)->Unit(benchmark::kMillisecond);

void BM_MissionCase(benchmark::State& state)
{
    const std::string name = "case" + std::to_string(state.range(0));
    const Scenario sc = load_scenario(std::string(HETSYNTH_SCENARIO_DIR) + "/" + name + ".scn");
    for (auto _ : state) benchmark::DoNotOptimize(run_scenario(sc));
    state.SetLabel(name);
}
BENCHMARK(BM_MissionCase)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
