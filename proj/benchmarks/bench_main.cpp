#include <benchmark/benchmark.h>

#include <random>

#include "riccmp/comparison.hpp"
#include "riccmp/riccati.hpp"
#include "riccmp/suites.hpp"
#include "riccmp/surface.hpp"
#include "riccmp/warped_models.hpp"

using namespace riccmp;

static void BM_PsdCheck(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(1);
    const InnerSpace s = InnerSpace::standard(n, n / 2);
    const Operator a = Operator::from_form(s, random_psd_form(n, rng));
    for (auto _ : state) benchmark::DoNotOptimize(psd_check(a));
}
BENCHMARK(BM_PsdCheck)->Arg(2)->Arg(4)->Arg(8);

static void BM_WedgeLeq(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const InnerSpace s = InnerSpace::standard(4, 2);
    const auto [a, b] = random_monotone_pair(s, 3);
    for (auto _ : state) benchmark::DoNotOptimize(wedge_leq(a, b));
}
BENCHMARK(BM_WedgeLeq);

static void BM_RiccatiBlowUp(benchmark::State& state) {
    const InnerSpace g = InnerSpace::from_gram(Eigen::Vector2d(1.0, -1.0).asDiagonal());
    const Operator r(g, Eigen::Vector2d(1.0, 0.0).asDiagonal().toDenseMatrix());
    const auto prof = CurvatureProfile::constant(r);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_riccati(prof, Operator::zero(g), 3.0).blow_up());
}
BENCHMARK(BM_RiccatiBlowUp)->Unit(benchmark::kMicrosecond);

static void BM_RiccatiRandom(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(4);
    const InnerSpace s = InnerSpace::standard(n, 1);
    const auto prof = random_piecewise_profile(s, rng, 1.0, 0.4);
    const Operator s0 = random_self_adjoint(s, rng, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_riccati(prof, s0, 1.0).t_reached());
}
BENCHMARK(BM_RiccatiRandom)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

static void BM_ComparisonSuite(benchmark::State& state) {
    SuiteOptions o;
    o.instances = 20;
    o.seed = 9;
    for (auto _ : state) benchmark::DoNotOptimize(comparison_suite(o).violations);
}
BENCHMARK(BM_ComparisonSuite)->Unit(benchmark::kMillisecond);

static void BM_Table1Check(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(table1_check(3, 2.0).passed);
}
BENCHMARK(BM_Table1Check)->Unit(benchmark::kMillisecond);

static void BM_CalabiStep(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(calabi_ode(CalabiProfile::step(0.8)).beta);
}
BENCHMARK(BM_CalabiStep)->Unit(benchmark::kMicrosecond);

static void BM_GaussBonnet(benchmark::State& state) {
    const SurfaceMetric m =
        SurfaceMetric::conformal_flat(bump_field(0.3, 0, 0, 1, 1), 1, -1, Box{-1, 1, -1, 1});
    GaussBonnetOptions opt;
    opt.grids = {static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(gauss_bonnet_defect(m, Box{-2, 2, -2, 2}, opt).defect);
}
BENCHMARK(BM_GaussBonnet)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
