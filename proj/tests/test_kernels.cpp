#include <doctest.h>

#include <omp.h>

#include "sgbm/parallel_kernels.hpp"
#include "sgbm/random.hpp"
#include "sgbm/verification.hpp"

using namespace sgbm;

// Several threads even on a single core, so the parallel paths interleave.
struct ThreadSetup {
  ThreadSetup() { omp_set_num_threads(4); }
} const thread_setup;

TEST_CASE("edge probabilities: parallel equals reference") {
  const auto pts = sample_uniform(2, 150, 1);
  const auto labels = CommunityAssignment::shuffled(150, 3, 2).labels();
  for (const auto& k : {ConnectivityKernel::gbm(0.3, 0.1), ConnectivityKernel::sbm(0.7, 0.2),
                        gaussian_kernel(0.9, 0.2, 0.5, 0.1)}) {
    const Matrix a = kernels::edge_probabilities(k, pts, labels);
    const Matrix b = kernels::edge_probabilities_reference(k, pts, labels);
    CHECK(a == b);
    CHECK(a.diagonal().isZero());
    CHECK(a == a.transpose());
  }
}

TEST_CASE("edge probabilities propagate kernel errors out of the parallel region") {
  CustomKernel c;
  c.name = "bad";
  c.eval_in = [](std::span<const double>) { return 2.0; };
  c.eval_out = [](std::span<const double>) { return 0.1; };
  const auto pts = sample_uniform(1, 20, 3);
  const auto labels = CommunityAssignment::canonical(20, 2).labels();
  CHECK_THROWS_AS(kernels::edge_probabilities(ConnectivityKernel::custom(c), pts, labels),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernels::edge_probabilities(ConnectivityKernel::sbm(0.5, 0.1), pts,
                                              std::vector<int>(19, 1)),
                  std::invalid_argument);
}

TEST_CASE("neighbor votes: parallel equals reference") {
  const auto inst = sample_instance(ConnectivityKernel::sbm(0.3, 0.1), 120, 4, 1, 5);
  Rng rng(6);
  std::vector<int> labels(120);
  for (auto& l : labels) l = static_cast<int>(rng.below(4)) + 1;
  const auto a = kernels::neighbor_votes(inst.adjacency, labels, 4);
  const auto b = kernels::neighbor_votes_reference(inst.adjacency, labels, 4);
  CHECK(a == b);
  CHECK(a.rowwise().sum().cast<double>() == inst.adjacency.rowwise().sum());
}

TEST_CASE("nearest-center assignment: parallel equals reference") {
  const Matrix pts = random_gaussian(300, 3, 7);
  const Matrix centers = random_gaussian(5, 3, 8);
  std::vector<int> a(300), b(300);
  std::vector<double> da(300), db(300);
  const double oa = kernels::assign_nearest(pts, centers, a, da);
  const double ob = kernels::assign_nearest_reference(pts, centers, b, db);
  CHECK(a == b);
  CHECK(da == db);
  CHECK(oa == ob);

  // Equidistant centers: the lower index wins.
  Matrix two(2, 1);
  two << -1, 1;
  Matrix origin = Matrix::Zero(1, 1);
  std::vector<int> one(1);
  std::vector<double> d(1);
  kernels::assign_nearest(origin, two, one, d);
  CHECK(one[0] == 0);
}

TEST_CASE("Fourier quadrature: parallel equals reference") {
  const auto g = gaussian_kernel(0.9, 0.15, 0.4, 0.05);
  const KernelFn fn = [&](std::span<const double> x) { return eval_kernel(g, x, true); };
  for (const auto& z : {std::vector<int>{0, 0}, std::vector<int>{3, -1}, std::vector<int>{-2, 5}}) {
    const auto a = kernels::fourier_quadrature(fn, z, 128);
    const auto b = kernels::fourier_quadrature_reference(fn, z, 128);
    CHECK(a.re == doctest::Approx(b.re).epsilon(1e-12));
    CHECK(std::abs(a.im - b.im) <= 1e-12);
  }
}

TEST_CASE("parallel results do not depend on the thread count") {
  const auto pts = sample_uniform(1, 200, 9);
  const auto labels = CommunityAssignment::canonical(200, 4).labels();
  const auto k = ConnectivityKernel::gbm(0.43, 0.11);
  omp_set_num_threads(1);
  const Matrix one = kernels::edge_probabilities(k, pts, labels);
  const auto inst1 = sample_instance(k, 200, 4, 1, 10);
  omp_set_num_threads(3);
  const Matrix three = kernels::edge_probabilities(k, pts, labels);
  const auto inst3 = sample_instance(k, 200, 4, 1, 10);
  omp_set_num_threads(4);
  CHECK(one == three);
  CHECK(inst1.adjacency == inst3.adjacency);
}
