#include <benchmark/benchmark.h>

#include "sdesym/antiderivative.hpp"
#include "sdesym/equivalence.hpp"
#include "sdesym/model.hpp"
#include "sdesym/parse.hpp"
#include "sdesym/symmetry.hpp"

using namespace sdesym;

namespace {

const char* kText = "exp(-y) - 0.5*exp(-2*y) + y^3*sin(t - w)/(1 + y^2)";

ModelFile fixture(const char* name)
{
    return load_model_file(std::string(SDESYM_MODELS_DIR) + "/" + name);
}

}  // namespace

static void BM_Parse(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(parse(kText));
}
BENCHMARK(BM_Parse);

static void BM_Differentiate(benchmark::State& state)
{
    const Expr e = parse(kText);
    for (auto _ : state) benchmark::DoNotOptimize(differentiate(e, "y"));
}
BENCHMARK(BM_Differentiate);

static void BM_Equivalent(benchmark::State& state)
{
    const Expr a = parse("(1 + y)^3*exp(t)");
    const Expr b = expand(a);
    const Domain d;
    for (auto _ : state) benchmark::DoNotOptimize(equivalent(a, b, d));
}
BENCHMARK(BM_Equivalent);

static void BM_Antiderivative(benchmark::State& state)
{
    const Expr e = parse("y*exp(y^2) + 1/(1 + y^2) + cos(2*y)");
    for (auto _ : state) benchmark::DoNotOptimize(antiderivative(e, "y"));
}
BENCHMARK(BM_Antiderivative);

static void BM_CheckSymmetry(benchmark::State& state)
{
    const auto mf = fixture("expnoise.sde");
    for (auto _ : state) benchmark::DoNotOptimize(check_symmetry(mf.system, mf.candidates[0].field));
}
BENCHMARK(BM_CheckSymmetry)->Unit(benchmark::kMicrosecond);
