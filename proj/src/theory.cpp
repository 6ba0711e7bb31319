#include "sgbm/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgbm/refinement.hpp"

namespace sgbm {

Matrix build_B_sigma(const CommunityAssignment& assignment, double mu_in, double mu_out,
                     bool expected_adjacency) {
  const int n = assignment.n();
  Matrix B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = assignment[i] == assignment[j] ? mu_in : mu_out;
  if (expected_adjacency) B.diagonal().setZero();
  return B;
}

std::vector<EigenvalueMultiplicity> b_sigma_spectrum(int n, int k, double mu_in, double mu_out) {
  if (k < 1 || n % k != 0) throw InvalidArgument("b_sigma_spectrum: n must be divisible by k");
  const double block = static_cast<double>(n) / k;
  std::vector<EigenvalueMultiplicity> raw = {
      {block * (mu_in + (k - 1) * mu_out), 1},
      {block * (mu_in - mu_out), k - 1},
      {0.0, n - k},
  };
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.value > b.value; });
  std::vector<EigenvalueMultiplicity> out;
  for (const auto& e : raw) {
    if (e.multiplicity == 0) continue;
    if (!out.empty() && out.back().value == e.value) {
      out.back().multiplicity += e.multiplicity;
    } else {
      out.push_back(e);
    }
  }
  return out;
}

Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

CanonicalEigenbasis community_eigenbasis(const CommunityAssignment& assignment) {
  const int n = assignment.n();
  const int k = assignment.k();
  if (k < 2) throw InvalidArgument("community_eigenbasis: k must be >= 2");
  Matrix U = Matrix::Zero(n, k - 1);
  for (int i = 0; i < n; ++i) {
    const int c = assignment[i];
    if (c == 1) {
      U.row(i).setOnes();
    } else {
      U(i, c - 2) = -1.0;
    }
  }
  // Modified Gram-Schmidt, fixed column order.
  for (int j = 0; j < k - 1; ++j) {
    for (int p = 0; p < j; ++p) U.col(j) -= U.col(p).dot(U.col(j)) * U.col(p);
    U.col(j).normalize();
  }
  return {U};
}

CanonicalEigenbasis canonical_U(int n, int k) {
  return community_eigenbasis(CommunityAssignment::canonical(n, k));
}

double min_community_row_distance(const Matrix& U, const CommunityAssignment& assignment) {
  const int k = assignment.k();
  std::vector<int> rep(static_cast<std::size_t>(k), -1);
  for (int i = 0; i < assignment.n(); ++i) {
    if (rep[static_cast<std::size_t>(assignment[i] - 1)] < 0) rep[static_cast<std::size_t>(assignment[i] - 1)] = i;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      best = std::min(best, (U.row(rep[static_cast<std::size_t>(a)]) - U.row(rep[static_cast<std::size_t>(b)])).norm());
  return best;
}

namespace {

void require_orthonormal(const Matrix& M, const char* name) {
  const auto m = M.cols();
  const double err = (M.transpose() * M - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw InvalidArgument(std::string("procrustes_align: ") + name +
                          " does not have orthonormal columns");
  }
}

}  // namespace

double projector_distance(const Matrix& U, const Matrix& V) {
  if (U.rows() != V.rows()) throw InvalidArgument("projector_distance: row counts differ");
  const Matrix Ut = U.transpose();
  const Matrix Vt = V.transpose();
  double sum = 0.0;
  Vector row(U.rows());
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    row.noalias() = U.row(i) * Ut;
    row.noalias() -= V.row(i) * Vt;
    sum += row.squaredNorm();
  }
  return std::sqrt(sum);
}

double subspace_sin_theta(const Matrix& U, const Matrix& V) {
  const double t = static_cast<double>(U.cols()) - (U.transpose() * V).squaredNorm();
  return std::sqrt(std::max(0.0, t));
}

AlignmentReport procrustes_align(const Matrix& V, const Matrix& U) {
  if (U.rows() != V.rows() || U.cols() != V.cols()) {
    throw InvalidArgument("procrustes_align: U and V must have the same shape");
  }
  require_orthonormal(U, "U");
  require_orthonormal(V, "V");
  const auto m = static_cast<double>(U.cols());
  Eigen::JacobiSVD<Matrix> svd(U.transpose() * V, Eigen::ComputeFullU | Eigen::ComputeFullV);
  AlignmentReport r;
  r.singular_values = svd.singularValues();
  r.Q = svd.matrixV() * svd.matrixU().transpose();
  r.residual = (V * r.Q - U).norm();
  r.residual_formula = std::sqrt(std::max(0.0, 2.0 * m - 2.0 * r.singular_values.sum()));
  r.projector_distance = projector_distance(U, V);
  return r;
}

double davis_kahan_bound(int n, int k, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("davis_kahan_bound: epsilon must be positive");
  if (n < 2) throw InvalidArgument("davis_kahan_bound: n must be >= 2");
  return std::sqrt(12.0 * std::pow(k, 5) * std::log(static_cast<double>(n))) /
         (epsilon * std::sqrt(static_cast<double>(n)));
}

double kmeans_error_bound(const Matrix& V, const Matrix& Vbar, double delta, double eps_approx) {
  if (!(delta > 0.0)) throw InvalidArgument("kmeans_error_bound: delta must be positive");
  return 4.0 * (2.0 + eps_approx) * (V - Vbar).squaredNorm() / (delta * delta);
}

KMeansBoundCheck kmeans_bound_check(const Matrix& V, const CommunityAssignment& truth,
                                    const std::vector<int>& estimate, double eps_approx) {
  const Matrix U = community_eigenbasis(truth).U;
  const auto align = procrustes_align(V, U);
  // ||V - U Q^T||_F = ||V Q - U||_F for orthogonal Q.
  const Matrix Vbar = U * align.Q.transpose();
  KMeansBoundCheck c;
  c.residual = (V - Vbar).norm();
  c.delta = min_community_row_distance(U, truth);
  c.bound = kmeans_error_bound(V, Vbar, c.delta, eps_approx);
  c.hypothesis_holds = c.bound <= static_cast<double>(truth.n()) / truth.k();
  c.observed = hamming_min(estimate, truth.labels(), truth.k()).absolute_error;
  c.holds = !c.hypothesis_holds || static_cast<double>(c.observed) <= c.bound;
  return c;
}

long long binomial(int m, int p) {
  if (p < 0 || p > m) return 0;
  long long r = 1;
  for (int i = 1; i <= p; ++i) r = r * (m - p + i) / i;
  return r;
}

long long circular_count_formula(int k, int m, int p) {
  if (k < 2 || m < 1 || p < 0 || p > m) {
    throw InvalidArgument("circular_count_formula: need k >= 2, m >= 1, 0 <= p <= m");
  }
  long long power = 1;
  for (int i = 0; i < p; ++i) power *= (k - 1);
  const long long sign = p % 2 == 0 ? 1 : -1;
  return binomial(m, p) * (power + sign * (k - 1));
}

long long circular_count_bruteforce(int k, int m, int p) {
  if (k < 2 || m < 1 || p < 0 || p > m) {
    throw InvalidArgument("circular_count_bruteforce: need k >= 2, m >= 1, 0 <= p <= m");
  }
  const double total = std::pow(static_cast<double>(k), m);
  if (total > 1e7) throw InvalidArgument("circular_count_bruteforce: k^m exceeds 1e7");
  std::vector<int> x(static_cast<std::size_t>(m), 0);
  long long count = 0;
  while (true) {
    int mismatches = 0;
    for (int i = 0; i < m; ++i) {
      if (x[static_cast<std::size_t>(i)] != x[static_cast<std::size_t>((i + 1) % m)]) ++mismatches;
    }
    if (mismatches == p) ++count;
    int j = 0;
    while (j < m && x[static_cast<std::size_t>(j)] == k - 1) x[static_cast<std::size_t>(j++)] = 0;
    if (j == m) break;
    ++x[static_cast<std::size_t>(j)];
  }
  return count;
}

}  // namespace sgbm
