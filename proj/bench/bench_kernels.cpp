// Serial reference vs OpenMP quotient/gradient kernels on refined square meshes.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "anisorobin/fem_2d.hpp"

namespace {

using namespace anisorobin;

struct Fixture {
  TriMesh mesh;
  FemOperator op;
  std::vector<double> u, grad;

  explicit Fixture(int refinements)
      : mesh(mesh_polygon(unit_square(), refinements)), op(make_operator(mesh, FinslerNorm::lp(4.0), -1.0)) {
    u.resize(mesh.vertices.size());
    grad.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + 0.3 * std::sin(3.0 * mesh.vertices[i].x() + mesh.vertices[i].y());
  }
};

void BM_QuotientSerial(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(quotient_serial(f.op, f.u, f.grad));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.op.triangles.size()));
}

void BM_QuotientParallel(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(quotient_parallel(f.op, f.u, f.grad));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.op.triangles.size()));
}

BENCHMARK(BM_QuotientSerial)->DenseRange(4, 7);
BENCHMARK(BM_QuotientParallel)->DenseRange(4, 7);

}  // namespace

BENCHMARK_MAIN();
