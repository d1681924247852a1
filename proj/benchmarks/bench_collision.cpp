#include <benchmark/benchmark.h>

#include "blz/collision.hpp"
#include "blz/families.hpp"
#include "blz/functionals.hpp"

namespace {

blz::CrossSection maxwell_xs() {
  blz::CrossSection xs;
  xs.gamma = 0.0;
  xs.s = 0.25;
  return xs;
}

void bm_forward_transform(benchmark::State& state) {
  const auto grid = blz::make_grid(static_cast<int>(state.range(0)), 4.0);
  const auto f = blz::make_maxwellian(grid);
  for (auto _ : state) benchmark::DoNotOptimize(blz::forward_transform(f));
}
BENCHMARK(bm_forward_transform)->Arg(16)->Arg(32)->Arg(64);

void bm_apply_q(benchmark::State& state) {
  const auto grid = blz::make_grid(static_cast<int>(state.range(0)), 4.0);
  blz::WorkspaceOptions opt;
  opt.xi_max = 0.6 * grid.freq_spacing() * (grid.n() / 2);
  const blz::CollisionWorkspace ws(grid, maxwell_xs(), opt);
  const auto f = blz::make_maxwellian(grid);
  for (auto _ : state) benchmark::DoNotOptimize(blz::apply_q(f, f, ws));
}
BENCHMARK(bm_apply_q)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void bm_weak_form(benchmark::State& state) {
  const auto grid = blz::make_grid(8, 4.0);
  const blz::CollisionWorkspace ws(grid, maxwell_xs());
  const auto f = blz::make_maxwellian(grid);
  for (auto _ : state)
    benchmark::DoNotOptimize(blz::weak_form_pairing(f, f, f, ws));
}
BENCHMARK(bm_weak_form)->Unit(benchmark::kMillisecond);

void bm_sobolev_norm(benchmark::State& state) {
  const auto grid = blz::make_grid(32, 4.0);
  const auto f = blz::make_maxwellian(grid);
  const auto req = blz::NormRequest::sobolev(0.5, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(blz::norm(f, req));
}
BENCHMARK(bm_sobolev_norm);

}  // namespace

BENCHMARK_MAIN();
