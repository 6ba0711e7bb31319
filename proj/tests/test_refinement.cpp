#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "sgbm/model.hpp"
#include "sgbm/refinement.hpp"
#include "sgbm/random.hpp"

using namespace sgbm;

namespace {

Matrix cliques(int count, int size) {
  Matrix A = Matrix::Zero(count * size, count * size);
  for (int c = 0; c < count; ++c) A.block(c * size, c * size, size, size).setOnes();
  A.diagonal().setZero();
  return A;
}

}  // namespace

TEST_CASE("majority refinement fixes a single mislabel") {
  const Matrix A = cliques(1, 10);
  std::vector<int> labels(10, 1);
  labels[4] = 2;
  const auto r = majority_refine(A, labels, 2);
  CHECK(r.labels == std::vector<int>(10, 1));
  CHECK(r.changed == 1);
}

TEST_CASE("correctly labeled cliques are a fixed point") {
  const Matrix A = cliques(3, 5);
  std::vector<int> labels;
  for (int i = 0; i < 15; ++i) labels.push_back(i / 5 + 1);
  const auto r = majority_refine(A, labels, 3);
  CHECK(r.labels == labels);
  CHECK(r.changed == 0);
}

TEST_CASE("isolated vertices keep their label") {
  Matrix A = cliques(1, 4);
  A.conservativeResize(5, 5);
  A.row(4).setZero();
  A.col(4).setZero();
  const auto r = majority_refine(A, {2, 2, 2, 2, 1}, 2);
  CHECK(r.labels[4] == 1);
  CHECK(r.isolated == std::vector<int>{4});
}

TEST_CASE("ties keep the current label, otherwise the lowest") {
  Matrix A = Matrix::Zero(5, 5);
  // vertex 0 has neighbors 1 (label 2) and 2 (label 3)
  A(0, 1) = A(1, 0) = 1;
  A(0, 2) = A(2, 0) = 1;
  A(3, 4) = A(4, 3) = 1;
  auto r = majority_refine(A, {3, 2, 3, 1, 1}, 3);
  CHECK(r.labels[0] == 3);
  r = majority_refine(A, {1, 2, 3, 1, 1}, 3);
  CHECK(r.labels[0] == 2);
}

TEST_CASE("refinement is synchronous") {
  // Path 0-1-2 labeled 1,2,1: every vertex looks at the input labeling only.
  Matrix A = Matrix::Zero(3, 3);
  A(0, 1) = A(1, 0) = 1;
  A(1, 2) = A(2, 1) = 1;
  const auto r = majority_refine(A, {1, 2, 1}, 2);
  CHECK(r.labels == std::vector<int>{2, 1, 2});
}

TEST_CASE("parallel and reference refinement agree on random graphs") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = sample_instance(ConnectivityKernel::sbm(0.3, 0.1), 90, 3, 1, seed);
    Rng rng(seed);
    std::vector<int> labels(90);
    for (auto& l : labels) l = static_cast<int>(rng.below(3)) + 1;
    const auto a = majority_refine(inst.adjacency, labels, 3);
    const auto b = majority_refine_reference(inst.adjacency, labels, 3);
    CHECK(a.labels == b.labels);
    CHECK(a.isolated == b.isolated);
    CHECK(a.changed == b.changed);
  }
}

TEST_CASE("iterated refinement stops at a fixed point") {
  const auto inst = sample_instance(ConnectivityKernel::sbm(0.6, 0.05), 60, 3, 1, 2);
  std::vector<int> labels = inst.assignment.labels();
  for (int i = 0; i < 60; i += 4) labels[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(i)] % 3 + 1;
  const auto r = majority_refine_iterated(inst.adjacency, labels, 3, 10);
  CHECK(r.passes <= 10);
  CHECK(majority_refine(inst.adjacency, r.labels, 3).changed == 0);
}

TEST_CASE("refinement input validation") {
  const Matrix A = cliques(1, 3);
  CHECK_THROWS_AS(majority_refine(A, {1, 2}, 2), std::invalid_argument);
  CHECK_THROWS_AS(majority_refine(A, {1, 2, 3}, 2), std::invalid_argument);
}

TEST_CASE("hamming_min examples") {
  const std::vector<int> truth = {1, 1, 2, 2, 3, 3};
  const auto same = hamming_min(truth, truth, 3);
  CHECK(same.absolute_error == 0);
  CHECK(same.loss_rate == 0.0);
  CHECK(same.best_permutation == std::vector<int>{1, 2, 3});

  const auto perm = hamming_min({3, 3, 1, 1, 2, 2}, truth, 3);
  CHECK(perm.absolute_error == 0);
  CHECK(perm.best_permutation == std::vector<int>{2, 3, 1});

  const auto one = hamming_min({2, 2, 1, 1, 1, 3}, truth, 3);
  CHECK(one.absolute_error == 1);
  CHECK(one.loss_rate == doctest::Approx(1.0 / 6));
  CHECK(hamming_min_bruteforce({2, 2, 1, 1, 1, 3}, truth, 3) == 1);

  CHECK_THROWS_AS(hamming_min({1, 2}, {1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(hamming_min({1, 4}, {1, 2}, 2), std::invalid_argument);
}

TEST_CASE("assignment-based loss equals the brute-force minimum") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const int k = 2 + static_cast<int>(seed % 5);
    const int n = 5 + static_cast<int>(rng.below(40));
    std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(k))) + 1;
      b[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(k))) + 1;
    }
    CHECK(hamming_min(a, b, k).absolute_error == hamming_min_bruteforce(a, b, k));
  }
}

TEST_CASE("algorithm2 on a block model") {
  const auto inst = sample_instance(ConnectivityKernel::sbm(0.8, 0.2), 300, 3, 1, 4);
  const auto r = algorithm2(inst.adjacency, 3, 0.8, 0.2, 5);
  CHECK(hamming_min(r.labels(), inst.assignment.labels(), 3).absolute_error == 0);
}

TEST_CASE("loss report document") {
  const auto doc = hamming_min({2, 2, 1, 1}, {1, 1, 2, 2}, 2).to_doc();
  CHECK(doc.get("loss", "absolute_error") == "0");
  CHECK(doc.get("loss", "best_permutation") == "2 1");
  CHECK(doc.get("confusion", "estimate_1") == "0 2");
}
