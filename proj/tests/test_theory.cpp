#include <doctest.h>

#include <cmath>

#include "sgbm/fourier.hpp"
#include "sgbm/theory.hpp"
#include "sgbm/verification.hpp"

using namespace sgbm;

TEST_CASE("build_B_sigma layout") {
  const Matrix B = build_B_sigma(CommunityAssignment::canonical(4, 2), 1.0, 0.0);
  Matrix expected = Matrix::Zero(4, 4);
  expected.topLeftCorner(2, 2).setOnes();
  expected.bottomRightCorner(2, 2).setOnes();
  CHECK(B == expected);

  const Matrix EA = build_B_sigma(CommunityAssignment::canonical(4, 2), 0.7, 0.2, true);
  CHECK(EA.diagonal().isZero());
  CHECK(EA(0, 1) == 0.7);
  CHECK(EA(0, 2) == 0.2);
  CHECK_THROWS_AS(build_B_sigma(CommunityAssignment::from_labels({1, 1, 2}, 2), 0.5, 0.1),
                  std::invalid_argument);
}

TEST_CASE("B_sigma equals its Kronecker construction") {
  const int k = 3;
  const int n = 12;
  const double mi = 0.9, mo = 0.3;
  const Matrix core = (mi - mo) * Matrix::Identity(k, k) + mo * Matrix::Ones(k, k);
  const Matrix K = kron(core, Matrix::Ones(n / k, n / k));
  CHECK(K.isApprox(build_B_sigma(CommunityAssignment::canonical(n, k), mi, mo), 1e-15));
}

TEST_CASE("closed-form B_sigma spectrum") {
  const auto s = b_sigma_spectrum(12, 3, 0.9, 0.3);
  REQUIRE(s.size() == 3);
  CHECK(s[0].value == doctest::Approx(6.0));
  CHECK(s[0].multiplicity == 1);
  CHECK(s[1].value == doctest::Approx(2.4));
  CHECK(s[1].multiplicity == 2);
  CHECK(s[2].value == 0.0);
  CHECK(s[2].multiplicity == 9);

  const auto flat = b_sigma_spectrum(12, 3, 0.5, 0.5);
  REQUIRE(flat.size() == 2);
  CHECK(flat[0].value == doctest::Approx(6.0));
  CHECK(flat[1].multiplicity == 11);

  bool found = false;
  for (const auto& e : b_sigma_spectrum(1000, 4, 0.86, 0.22))
    found = found || (std::abs(e.value - 160) < 1e-9 && e.multiplicity == 3);
  CHECK(found);
}

TEST_CASE("Kronecker products") {
  Matrix expected = Matrix::Zero(4, 4);
  expected.topLeftCorner(2, 2).setOnes();
  expected.bottomRightCorner(2, 2).setOnes();
  CHECK(kron(Matrix::Identity(2, 2), Matrix::Ones(2, 2)) == expected);
  const Vector ones = Vector::Ones(6);
  CHECK((kron(Matrix::Ones(2, 2), Matrix::Ones(3, 3)) * ones - 6 * ones).norm() < 1e-12);
}

TEST_CASE("canonical basis invariants") {
  const Matrix U = canonical_U(100, 4).U;
  CHECK((U.transpose() * U - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  const auto a = CommunityAssignment::canonical(100, 4);
  CHECK(min_community_row_distance(U, a) == doctest::Approx(std::sqrt(0.08)).epsilon(1e-10));
  // Column j is positive on community 1 and negative on community j + 2 before
  // orthonormalization; the first column is untouched by Gram-Schmidt.
  CHECK(U(0, 0) > 0);
  CHECK(U(25, 0) < 0);
  CHECK(U(50, 0) == 0.0);

  const Matrix B = build_B_sigma(a, 0.9, 0.3);
  CHECK((B * U - lambda_star(100, 4, 0.9, 0.3) * U).norm() < 1e-8 * 15);

  const Matrix P = canonical_U(5, 5).U * canonical_U(5, 5).U.transpose();
  CHECK((P - (Matrix::Identity(5, 5) - Matrix::Ones(5, 5) / 5)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("community basis of a shuffled assignment spans the same projector") {
  const auto a = CommunityAssignment::shuffled(24, 4, 3);
  const Matrix U = community_eigenbasis(a).U;
  const Matrix B = build_B_sigma(a, 0.9, 0.3);
  CHECK((B * U - lambda_star(24, 4, 0.9, 0.3) * U).norm() < 1e-10);
  CHECK(min_community_row_distance(U, a) == doctest::Approx(std::sqrt(8.0 / 24)));
}

TEST_CASE("Procrustes alignment") {
  const Matrix U = random_orthonormal(50, 3, 1);
  const auto self = procrustes_align(U, U);
  CHECK(self.residual < 1e-12);
  CHECK((self.Q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  const Matrix R = random_orthonormal(3, 3, 2);
  const auto rot = procrustes_align(U * R, U);
  CHECK(rot.residual < 1e-10);
  CHECK((rot.Q - R.transpose()).cwiseAbs().maxCoeff() < 1e-10);

  const Matrix V = random_orthonormal(50, 3, 3);
  const auto a = procrustes_align(V, U);
  CHECK((a.Q.transpose() * a.Q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(a.residual == doctest::Approx(a.residual_formula).epsilon(1e-10));
  CHECK(a.residual <= a.projector_distance + 1e-12);
  CHECK(a.projector_distance ==
        doctest::Approx((U * U.transpose() - V * V.transpose()).norm()).epsilon(1e-12));
  CHECK(a.projector_distance / std::sqrt(2.0) == doctest::Approx(subspace_sin_theta(U, V)).epsilon(1e-10));
  for (int s = 0; s < 1000; ++s) {
    const Matrix Q = random_orthonormal(3, 3, 100 + static_cast<std::uint64_t>(s));
    CHECK(a.residual <= (V * Q - U).norm() + 1e-12);
  }

  CHECK_THROWS_AS(procrustes_align(2.0 * V, U), std::invalid_argument);
  CHECK_THROWS_AS(procrustes_align(V.leftCols(2), U), std::invalid_argument);
}

TEST_CASE("Davis-Kahan bound") {
  const double b = davis_kahan_bound(1000, 4, 0.075);
  CHECK(b == doctest::Approx(std::sqrt(12 * 1024 * std::log(1000.0)) / (0.075 * std::sqrt(1000.0))));
  CHECK(b == doctest::Approx(122.8).epsilon(1e-3));
  CHECK(davis_kahan_bound(1000, 4, 0.15) == doctest::Approx(b / 2));
  double prev = davis_kahan_bound(10, 3, 0.1);
  for (int n = 20; n <= 100000; n *= 2) {
    const double cur = davis_kahan_bound(n, 3, 0.1);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(davis_kahan_bound(100, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(davis_kahan_bound(1, 3, 0.1), std::invalid_argument);
}

TEST_CASE("k-means error bound") {
  const Matrix V = random_gaussian(10, 2, 4);
  CHECK(kmeans_error_bound(V, V, 0.3, 0.05) == 0.0);
  Matrix W = V;
  W(0, 0) += 0.1;
  CHECK(kmeans_error_bound(W, V, std::sqrt(0.004), 0.05) == doctest::Approx(20.5));
  CHECK_THROWS_AS(kmeans_error_bound(W, V, 0.0, 0.05), std::invalid_argument);
}

TEST_CASE("k-means bound check on an exact embedding") {
  const auto truth = CommunityAssignment::canonical(40, 4);
  const Matrix U = community_eigenbasis(truth).U;
  const Matrix R = random_orthonormal(3, 3, 9);
  const auto c = kmeans_bound_check(U * R, truth, truth.labels(), 0.0);
  CHECK(c.residual < 1e-10);
  CHECK(c.hypothesis_holds);
  CHECK(c.observed == 0);
  CHECK(c.holds);
}

TEST_CASE("circular counts") {
  CHECK(circular_count_formula(3, 3, 2) == 18);
  CHECK(circular_count_bruteforce(3, 3, 2) == 18);
  CHECK(circular_count_formula(4, 5, 0) == 4);
  CHECK(circular_count_formula(2, 4, 3) == 0);
  for (int k = 2; k <= 5; ++k) {
    for (int m = 1; m <= 8; ++m) {
      long long total = 0;
      for (int p = 0; p <= m; ++p) {
        CHECK(circular_count_formula(k, m, p) == circular_count_bruteforce(k, m, p));
        total += circular_count_formula(k, m, p);
      }
      CHECK(total == static_cast<long long>(std::llround(std::pow(k, m))));
    }
  }
  CHECK_THROWS_AS(circular_count_bruteforce(10, 8, 2), std::invalid_argument);
  CHECK_THROWS_AS(circular_count_formula(1, 3, 1), std::invalid_argument);
}

TEST_CASE("verification suite passes and catches a perturbed formula") {
  VerificationOptions o;
  o.fourier_two_dimensional = false;
  o.sampled_rotations = 100;
  const auto ok = run_verification(o);
  for (const auto& c : ok.checks) {
    INFO(c.name << " computed " << c.computed << " expected " << c.expected);
    CHECK(c.passed);
  }
  o.circular_formula = [](int k, int m, int p) {
    return circular_count_formula(k, m, p) + (p == 2 ? 1 : 0);
  };
  const auto bad = run_verification(o);
  CHECK_FALSE(bad.all_passed());
  bool flagged = false;
  for (const auto& c : bad.checks)
    if (c.name == "circular_count.sweep") flagged = !c.passed && c.detail.find("mismatch") != std::string::npos;
  CHECK(flagged);
  CHECK(bad.to_doc().get("summary", "status") == "fail");
}
