#include <benchmark/benchmark.h>

#include "sdesym/kozlov.hpp"
#include "sdesym/model.hpp"
#include "sdesym/oracles.hpp"
#include "sdesym/rng.hpp"
#include "sdesym/simulate.hpp"

using namespace sdesym;

namespace {

ModelFile fixture(const char* name)
{
    return load_model_file(std::string(SDESYM_MODELS_DIR) + "/" + name);
}

}  // namespace

static void BM_NormalStream(benchmark::State& state)
{
    const NormalStream s(7, 0, 0);
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(s.normal(i++));
}
BENCHMARK(BM_NormalStream);

// Arg: worker threads.
static void BM_SimulateEuler(benchmark::State& state)
{
    const auto mf = fixture("expnoise.sde");
    auto cfg = config_from(mf);
    cfg.paths = 1000;
    cfg.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(mf.system, cfg));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.paths));
}
BENCHMARK(BM_SimulateEuler)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_SimulateHeun(benchmark::State& state)
{
    const auto mf = fixture("expnoise_stratonovich.sde");
    auto cfg = config_from(mf);
    cfg.paths = 1000;
    cfg.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(simulate(mf.system, cfg));
}
BENCHMARK(BM_SimulateHeun)->Unit(benchmark::kMillisecond);

static void BM_PathwiseCheck(benchmark::State& state)
{
    const auto mf = fixture("expnoise.sde");
    const auto r = reduce_deterministic(mf.system, mf.candidates[0].field);
    const auto cfg = config_from(mf);
    for (auto _ : state) benchmark::DoNotOptimize(pathwise_check(mf.system, r.transformed, r.map.Phi, cfg));
}
BENCHMARK(BM_PathwiseCheck)->Unit(benchmark::kMillisecond);

static void BM_EpsilonScaling(benchmark::State& state)
{
    const auto mf = fixture("expnoise.sde");
    const auto cfg = config_from(mf);
    for (auto _ : state) benchmark::DoNotOptimize(epsilon_symmetry_scaling(mf.system, mf.candidates[0].field, cfg));
}
BENCHMARK(BM_EpsilonScaling)->Unit(benchmark::kMillisecond);
