#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <vector>

#include "pmelab/grid.hpp"
#include "pmelab/paraboloid.hpp"
#include "pmelab/pucci.hpp"
#include "pmelab/refsol.hpp"
#include "pmelab/scheme.hpp"

namespace {

using namespace pmelab;

SolverConfig front_config(int dim) {
  SolverConfig cfg;
  cfg.ell = EllipticityInterval(1.0, 1.0);
  cfg.b_coeff = 1.0;
  cfg.sign = PucciSign::Minus;
  cfg.stencil = dim == 1 ? DirectionStencil::axis(1)
                         : DirectionStencil::standard2d();
  FrontSolution front = make_front(dim, {1.0, 0.0}, 1.0);
  cfg.boundary = [front](const Vec2& x, double t) { return front.value(x, t); };
  return cfg;
}

GridFunction front_slice(int dim, int nx) {
  double h = 8.0 / (nx - 1);
  Vec2 origin{-4.0, dim == 2 ? -4.0 : 0.0};
  auto g = std::make_shared<SpaceTimeGrid>(
      dim, origin, std::array<int, 2>{nx, dim == 2 ? nx : 1}, h, 0.0,
      std::vector<double>{});
  FrontSolution front = make_front(dim, {1.0, 0.0}, 1.0);
  return sample([&front](const Vec2& x, double t) { return front.value(x, t); },
                g);
}

void BM_Step1d(benchmark::State& state) {
  int nx = static_cast<int>(state.range(0));
  GridFunction u0 = front_slice(1, nx);
  SolverConfig cfg = front_config(1);
  std::vector<double> slice(u0.values);
  double dt = cfl_dt(slice.data(), *u0.grid, cfg, 1.0);
  for (auto _ : state) {
    std::vector<double> out = step(slice, 0.0, dt, *u0.grid, cfg);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * nx);
}
BENCHMARK(BM_Step1d)->Arg(129)->Arg(513)->Arg(2049);

void BM_Step2d(benchmark::State& state) {
  int nx = static_cast<int>(state.range(0));
  GridFunction u0 = front_slice(2, nx);
  SolverConfig cfg = front_config(2);
  std::vector<double> slice(u0.values);
  double dt = cfl_dt(slice.data(), *u0.grid, cfg, 1.0);
  for (auto _ : state) {
    std::vector<double> out = step(slice, 0.0, dt, *u0.grid, cfg);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * nx * nx);
}
BENCHMARK(BM_Step2d)->Arg(65)->Arg(129);

void BM_SolveFront1d(benchmark::State& state) {
  int nx = static_cast<int>(state.range(0));
  GridFunction u0 = front_slice(1, nx);
  SolverConfig cfg = front_config(1);
  for (auto _ : state) {
    Trajectory tr = solve(u0, cfg, 0.05);
    benchmark::DoNotOptimize(tr.u.values.data());
  }
}
BENCHMARK(BM_SolveFront1d)->Arg(129)->Arg(257);

void BM_ContactSet(benchmark::State& state) {
  int nx = static_cast<int>(state.range(0));
  GridFunction u0 = front_slice(1, nx);
  SolverConfig cfg = front_config(1);
  Trajectory tr = solve(u0, cfg, 0.25);
  std::vector<std::pair<Vec2, double>> vertices;
  for (int i = 0; i < nx; i += 4)
    vertices.push_back({tr.u.grid->position(i), 0.0});
  for (auto _ : state) {
    ContactSet cs = contact_set(tr.u, vertices, 100.0, 100.0);
    benchmark::DoNotOptimize(cs.entries.data());
  }
  state.SetItemsProcessed(state.iterations() * vertices.size());
}
BENCHMARK(BM_ContactSet)->Arg(129)->Arg(257);

void BM_PucciSlice2d(benchmark::State& state) {
  int nx = static_cast<int>(state.range(0));
  GridFunction u0 = front_slice(2, nx);
  EllipticityInterval ell(0.5, 3.0);
  DirectionStencil st = DirectionStencil::standard2d();
  for (auto _ : state) {
    double acc = 0.0;
    for (int j = 1; j < nx - 1; ++j)
      for (int i = 1; i < nx - 1; ++i)
        acc += discrete_pucci_slice(u0.values.data(), i, j, nx, 2,
                                    u0.grid->h(), ell, PucciSign::Plus, st);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * (nx - 2) * (nx - 2));
}
BENCHMARK(BM_PucciSlice2d)->Arg(65)->Arg(129);

}  // namespace

BENCHMARK_MAIN();
