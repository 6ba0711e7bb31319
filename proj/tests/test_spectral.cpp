#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "sgbm/fourier.hpp"
#include "sgbm/model.hpp"
#include "sgbm/spectral.hpp"
#include "sgbm/theory.hpp"

using namespace sgbm;

namespace {

SpectrumResult diagonal_spectrum(std::vector<double> values) {
  const Eigen::Index n = static_cast<Eigen::Index>(values.size());
  SpectrumResult s;
  s.eigenvalues = Eigen::Map<Vector>(values.data(), n);
  s.eigenvectors = Matrix::Identity(n, n);
  return s;
}

}  // namespace

TEST_CASE("full_spectrum small cases") {
  const auto j4 = full_spectrum(Matrix::Ones(4, 4));
  CHECK(j4.eigenvalues(0) == doctest::Approx(4.0));
  for (int i = 1; i < 4; ++i) CHECK(std::abs(j4.eigenvalues(i)) < 1e-12);

  const auto id = full_spectrum(Matrix::Identity(5, 5));
  for (int i = 0; i < 5; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0));

  const auto b = full_spectrum(build_B_sigma(CommunityAssignment::canonical(12, 3), 0.9, 0.3));
  CHECK(b.eigenvalues(0) == doctest::Approx(6.0));
  CHECK(b.eigenvalues(1) == doctest::Approx(2.4));
  CHECK(b.eigenvalues(2) == doctest::Approx(2.4));
  for (int i = 3; i < 12; ++i) CHECK(std::abs(b.eigenvalues(i)) < 1e-10);
}

TEST_CASE("full_spectrum rejects bad input") {
  Matrix a = Matrix::Identity(3, 3);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(full_spectrum(a), std::invalid_argument);
  CHECK_THROWS_AS(full_spectrum(Matrix::Ones(2, 3)), std::invalid_argument);
}

TEST_CASE("full_spectrum invariants on a sampled graph, against an independent solver") {
  const auto inst = sample_instance(ConnectivityKernel::gbm(0.3, 0.1), 120, 3, 1, 8);
  const Matrix& A = inst.adjacency;
  const auto s = full_spectrum(A);
  for (Eigen::Index i = 1; i < s.size(); ++i) CHECK(s.eigenvalues(i - 1) >= s.eigenvalues(i));
  const double residual_tol = 1e-8 * A.norm();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    CHECK((A * s.eigenvectors.col(i) - s.eigenvalues(i) * s.eigenvectors.col(i)).norm() <= residual_tol);
  }
  const Matrix gram = s.eigenvectors.transpose() * s.eigenvectors;
  CHECK((gram - Matrix::Identity(120, 120)).cwiseAbs().maxCoeff() <= 1e-10);

  Eigen::SelfAdjointEigenSolver<Matrix> oracle(A, Eigen::EigenvaluesOnly);
  CHECK((s.eigenvalues - oracle.eigenvalues().reverse()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("select_near picks the nearest eigenvalues") {
  const auto s = diagonal_spectrum({10, 5, 1});
  const auto sel = select_near(s, 5, 1);
  REQUIRE(sel.indices.size() == 1);
  CHECK(sel.indices[0] == 1);
  CHECK(sel.eigenvalues(0) == 5);
  CHECK(sel.gap == doctest::Approx(4));
  CHECK(sel.V.col(0) == Vector::Unit(3, 1));

  const auto tie = select_near(diagonal_spectrum({7, 3, 0}), 5, 1);
  CHECK(tie.eigenvalues(0) == 7);
  CHECK(tie.gap == 2);

  const auto two = select_near(diagonal_spectrum({9, 6, 4.5, 4, 1}), 5, 2);
  CHECK(two.indices == std::vector<int>{1, 2});
  CHECK(two.gap == doctest::Approx(1.0));
  CHECK_THROWS_AS(select_near(s, 5, 4), std::invalid_argument);
}

TEST_CASE("select_near minimizes the worst distance over count-subsets") {
  const std::vector<double> vals = {9.5, 7.2, 6.1, 5.05, 4.9, 3.3, 1.0, -2.0};
  const auto s = diagonal_spectrum(vals);
  for (double t : {0.0, 3.0, 5.0, 6.6, 8.0}) {
    for (int count = 1; count <= 4; ++count) {
      const auto sel = select_near(s, t, count);
      double worst = 0.0;
      for (int i : sel.indices) worst = std::max(worst, std::abs(vals[static_cast<std::size_t>(i)] - t));
      std::vector<double> dist;
      for (double v : vals) dist.push_back(std::abs(v - t));
      std::sort(dist.begin(), dist.end());
      CHECK(worst == doctest::Approx(dist[static_cast<std::size_t>(count - 1)]));
    }
  }
}

TEST_CASE("select_top") {
  const auto s = diagonal_spectrum({10, 5, 1, -3});
  const auto sel = select_top(s, 2, 1);
  CHECK(sel.indices == std::vector<int>{1, 2});
  CHECK_THROWS_AS(select_top(s, 4, 1), std::invalid_argument);
}

TEST_CASE("empirical_measure_count") {
  const Vector ev = (Vector(4) << 8, 4, 2, -4).finished();
  CHECK(empirical_measure_count(ev, 4, -10, 10).count == 4);
  CHECK(empirical_measure_count(ev, 4, 0.4, 0.6).count == 1);
  CHECK(empirical_measure_count(ev, 4, 0.3, 0.3).count == 0);
  CHECK(empirical_measure_count(ev, 4, 0.5, 2).count == 1);  // open interval excludes 0.5
  CHECK(empirical_measure_count(ev, 4, -0.1, 0.1).contains_zero);
  CHECK_FALSE(empirical_measure_count(ev, 4, 0.1, 0.2).contains_zero);
}

TEST_CASE("trace moments") {
  const auto inst = sample_instance(ConnectivityKernel::sbm(0.3, 0.1), 60, 3, 1, 4);
  const Matrix& A = inst.adjacency;
  const double n = 60;
  CHECK(trace_moment(A, 1) == 0.0);
  CHECK(trace_moment(A, 2) == doctest::Approx(2.0 * inst.edge_count() / (n * n)));
  const auto s = full_spectrum(A);
  for (int m = 1; m <= 6; ++m) {
    const Matrix P = [&] {
      Matrix p = Matrix::Identity(60, 60);
      for (int i = 0; i < m; ++i) p = p * A;
      return p;
    }();
    CHECK(trace_moment(A, m) == doctest::Approx(P.trace() / std::pow(n, m)).epsilon(1e-12));
    CHECK(spectral_moment(s.eigenvalues, 60, m) ==
          doctest::Approx(trace_moment(A, m)).epsilon(1e-9).scale(1e-6));
  }
  CHECK_THROWS_AS(trace_moment(A, 9), std::invalid_argument);
}

TEST_CASE("write_spectrum format") {
  std::ostringstream out;
  write_spectrum(out, (Vector(2) << 4, -2).finished(), 4);
  CHECK(out.str() == "#index\teigenvalue\tscaled\n1\t4\t1\n2\t-2\t-0.5\n");
}
