// Serial reference kernels against their OpenMP twins.

#include "bertini/geometry.hpp"
#include "bertini/sieve.hpp"
#include "bertini/smoothness.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

using namespace bertini;

namespace {

const gf::FieldDesc F2 = gf::field_of_order(2);

void threads(benchmark::State& state) { omp_set_num_threads(static_cast<int>(state.range(0))); }

void BM_census_serial(benchmark::State& state) {
    auto p2 = geometry::projective_space(F2, 2);
    sieve::Predicate pred{sieve::SmoothIntersection{p2, 6}};
    for (auto _ : state) benchmark::DoNotOptimize(sieve::exhaustive_density_serial(F2, 2, 3, pred).hits);
}

void BM_census_parallel(benchmark::State& state) {
    threads(state);
    auto p2 = geometry::projective_space(F2, 2);
    sieve::Predicate pred{sieve::SmoothIntersection{p2, 6}};
    for (auto _ : state) benchmark::DoNotOptimize(sieve::exhaustive_density(F2, 2, 3, pred).hits);
}

void BM_mc_serial(benchmark::State& state) {
    auto p2 = geometry::projective_space(F2, 2);
    sieve::Predicate pred{sieve::SmoothAtPointsBelow{p2, 2}};
    for (auto _ : state) benchmark::DoNotOptimize(sieve::mc_density_serial(F2, 2, 20, pred, 5000, 1).hits);
}

void BM_mc_parallel(benchmark::State& state) {
    threads(state);
    auto p2 = geometry::projective_space(F2, 2);
    sieve::Predicate pred{sieve::SmoothAtPointsBelow{p2, 2}};
    for (auto _ : state) benchmark::DoNotOptimize(sieve::mc_density(F2, 2, 20, pred, 5000, 1).hits);
}

void BM_points_serial(benchmark::State& state) {
    auto x = geometry::hypersurface(geometry::katz_form(2, 1));
    for (auto _ : state) benchmark::DoNotOptimize(geometry::count_points_serial(x, 5));
}

void BM_points_parallel(benchmark::State& state) {
    threads(state);
    auto x = geometry::hypersurface(geometry::katz_form(2, 1));
    for (auto _ : state) benchmark::DoNotOptimize(geometry::count_points(x, 5));
}

mpoly::HomogPoly quartic() {
    return mpoly::poly_parse("x0^3*x1 + x0^2*x1^2 + x0^3*x2 + x1^3*x2 + x1^2*x2^2 + x0*x2^3", gf::base_field(F2), 2);
}

void BM_singular_serial(benchmark::State& state) {
    auto p2 = geometry::projective_space(F2, 2);
    auto f = quartic();
    for (auto _ : state) benchmark::DoNotOptimize(smooth::singular_points_serial(f, p2, 9).size());
}

void BM_singular_parallel(benchmark::State& state) {
    threads(state);
    auto p2 = geometry::projective_space(F2, 2);
    auto f = quartic();
    for (auto _ : state) benchmark::DoNotOptimize(smooth::singular_points(f, p2, 9).size());
}

}  // namespace

BENCHMARK(BM_census_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_census_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_mc_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_points_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_points_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_singular_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_singular_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
