#include <benchmark/benchmark.h>

#include "trajectoid/mesh.hpp"
#include "trajectoid/path.hpp"
#include "trajectoid/rolling.hpp"
#include "trajectoid/solver.hpp"
#include "trajectoid/sphere_area.hpp"

using namespace trajectoid;

namespace {

const PlanarPath& wiggly_path() {
    static const PlanarPath p = gen_fourier_random(11, 4, 0.6, 1024);
    return p;
}

void BM_holonomy(benchmark::State& state) {
    const PlanarPath& p = wiggly_path();
    const double r = sigma_to_radius(p.total_length(), 0.8);
    for (auto _ : state) benchmark::DoNotOptimize(holonomy(p, r));
}
BENCHMARK(BM_holonomy);

void BM_sphere_trace(benchmark::State& state) {
    const PlanarPath& p = wiggly_path();
    const double r = sigma_to_radius(p.total_length(), 0.8);
    for (auto _ : state) benchmark::DoNotOptimize(sphere_trace(p, r));
}
BENCHMARK(BM_sphere_trace);

void BM_normalized_area(benchmark::State& state) {
    const PlanarPath& p = wiggly_path();
    for (auto _ : state) benchmark::DoNotOptimize(normalized_area(p, 0.8));
}
BENCHMARK(BM_normalized_area);

void BM_scan(benchmark::State& state) {
    const PlanarPath& p = wiggly_path();
    const int rows = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(scan(p, 0.05, 4.0, rows));
}
BENCHMARK(BM_scan)->Arg(64)->Arg(256);

void BM_solve_two_path(benchmark::State& state) {
    const PlanarPath& p = wiggly_path();
    for (auto _ : state) benchmark::DoNotOptimize(solve_n(p, 2, 0.05, 4.0, 400));
}
BENCHMARK(BM_solve_two_path);

void BM_carve(benchmark::State& state) {
    const PlanarPath& p = wiggly_path();
    const auto sols = solve_n(p, 2, 0.05, 4.0, 400);
    const double r = sols.empty() ? sigma_to_radius(p.total_length(), 0.8) : sols.front().r;
    const SphereTrace trace = sphere_trace(repeat_path(p, 2), r);
    const int cuts = int(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(carve(trace, 1.4 * r, 3, {1e-3, cuts}));
}
BENCHMARK(BM_carve)->Arg(200)->Arg(800);

void BM_support_height(benchmark::State& state) {
    const PlanarPath& p = wiggly_path();
    const auto sols = solve_n(p, 2, 0.05, 4.0, 400);
    const double r = sols.empty() ? sigma_to_radius(p.total_length(), 0.8) : sols.front().r;
    const SphereTrace trace = sphere_trace(repeat_path(p, 2), r);
    const TrajectoidSolid solid = carve(trace, 1.4 * r, 4, {1e-3, 800});
    for (auto _ : state) benchmark::DoNotOptimize(support_height(solid, {0.3, -0.5, 0.81}));
}
BENCHMARK(BM_support_height);

}  // namespace

BENCHMARK_MAIN();
