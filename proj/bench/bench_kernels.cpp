// Serial reference vs OpenMP kernel timings. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "sgbm/clustering.hpp"
#include "sgbm/model.hpp"
#include "sgbm/parallel_kernels.hpp"
#include "sgbm/verification.hpp"

namespace {

using namespace sgbm;

struct Fixture {
  SgbmInstance inst;
  std::vector<int> labels;
  Matrix points;
  Matrix centers;
};

const Fixture& fixture(int n) {
  static std::vector<std::pair<int, Fixture>> cache;
  for (const auto& [size, f] : cache)
    if (size == n) return f;
  Fixture f;
  f.inst = sample_instance(ConnectivityKernel::gbm(0.43, 0.11), n, 4, 1, 1);
  f.labels = f.inst.assignment.labels();
  f.points = random_gaussian(n, 3, 2);
  f.centers = random_gaussian(4, 3, 3);
  cache.emplace_back(n, std::move(f));
  return cache.back().second;
}

template <bool Parallel>
void BM_edge_probabilities(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Matrix P = Parallel ? kernels::edge_probabilities(f.inst.kernel, f.inst.points, f.labels)
                        : kernels::edge_probabilities_reference(f.inst.kernel, f.inst.points, f.labels);
    benchmark::DoNotOptimize(P.data());
  }
}

template <bool Parallel>
void BM_neighbor_votes(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto v = Parallel ? kernels::neighbor_votes(f.inst.adjacency, f.labels, 4)
                      : kernels::neighbor_votes_reference(f.inst.adjacency, f.labels, 4);
    benchmark::DoNotOptimize(v.data());
  }
}

template <bool Parallel>
void BM_assign_nearest(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  std::vector<int> assignment(f.points.rows());
  std::vector<double> sq(f.points.rows());
  for (auto _ : state) {
    const double obj = Parallel ? kernels::assign_nearest(f.points, f.centers, assignment, sq)
                                : kernels::assign_nearest_reference(f.points, f.centers, assignment, sq);
    benchmark::DoNotOptimize(obj);
  }
}

template <bool Parallel>
void BM_fourier_box(benchmark::State& state) {
  const auto g = gaussian_kernel(0.9, 0.15, 0.4, 0.05);
  const KernelFn fn = [&](std::span<const double> x) { return eval_kernel(g, x, true); };
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto c = Parallel ? kernels::fourier_box_quadrature(fn, 2, 8, grid)
                      : kernels::fourier_box_quadrature_reference(fn, 2, 8, grid);
    benchmark::DoNotOptimize(c.data());
  }
}

}  // namespace

BENCHMARK(BM_edge_probabilities<false>)->Name("edge_probabilities/serial")->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_edge_probabilities<true>)->Name("edge_probabilities/omp")->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_neighbor_votes<false>)->Name("neighbor_votes/serial")->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_neighbor_votes<true>)->Name("neighbor_votes/omp")->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assign_nearest<false>)->Name("assign_nearest/serial")->Arg(1000)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_assign_nearest<true>)->Name("assign_nearest/omp")->Arg(1000)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_fourier_box<false>)->Name("fourier_box_2d/serial")->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fourier_box<true>)->Name("fourier_box_2d/omp")->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
