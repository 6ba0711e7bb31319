#pragma once

#include <cstdint>
#include <vector>

#include "sgbm/common.hpp"
#include "sgbm/model.hpp"

namespace sgbm {

// b_ij = mu_in if sigma_i = sigma_j else mu_out (diagonal included). With
// `expected_adjacency`, the diagonal is zeroed, giving B - mu_in I.
Matrix build_B_sigma(const CommunityAssignment& assignment, double mu_in, double mu_out,
                     bool expected_adjacency = false);

struct EigenvalueMultiplicity {
  double value = 0.0;
  int multiplicity = 0;
};

// Closed-form spectrum of B_sigma, descending, equal values merged.
std::vector<EigenvalueMultiplicity> b_sigma_spectrum(int n, int k, double mu_in, double mu_out);

// Kronecker product, block (i, j) = A(i, j) * B.
Matrix kron(const Matrix& A, const Matrix& B);

// Orthonormal basis of the lambda* eigenspace of B_sigma: the vectors
// (e_1 - e_{j+1}) (x) 1_{n/k} (positive on community 1, negative on
// community j+1), orthonormalized by Gram-Schmidt in column order.
struct CanonicalEigenbasis {
  Matrix U;  // n x (k-1)
};

CanonicalEigenbasis canonical_U(int n, int k);
// The same construction for an arbitrary balanced assignment.
CanonicalEigenbasis community_eigenbasis(const CommunityAssignment& assignment);

// Smallest distance between rows of U belonging to different communities.
double min_community_row_distance(const Matrix& U, const CommunityAssignment& assignment);

struct AlignmentReport {
  Matrix Q;                     // argmin over orthogonal Q of ||V Q - U||_F
  Vector singular_values;       // of U^T V
  double residual = 0.0;        // ||V Q - U||_F, computed directly
  double residual_formula = 0.0;  // sqrt(2m - 2 tr Sigma)
  double projector_distance = 0.0;  // ||U U^T - V V^T||_F, computed directly
};

// Orthogonal Procrustes alignment of V onto U through the SVD U^T V = S Sigma P^T,
// Q = P S^T. Both inputs need orthonormal columns (1e-10).
AlignmentReport procrustes_align(const Matrix& V, const Matrix& U);

// sqrt(m - tr(U^T V V^T U)): the projector distance over sqrt 2, without
// forming n x n matrices.
double subspace_sin_theta(const Matrix& U, const Matrix& V);

// ||U U^T - V V^T||_F by rows, O(n) memory.
double projector_distance(const Matrix& U, const Matrix& V);

// sqrt(12 k^5 ln n) / (epsilon sqrt n).
double davis_kahan_bound(int n, int k, double epsilon);

// 4 (2 + eps) ||V - Vbar||_F^2 / delta^2.
double kmeans_error_bound(const Matrix& V, const Matrix& Vbar, double delta, double eps_approx);

struct KMeansBoundCheck {
  double residual = 0.0;  // ||V - Vbar||_F with Vbar = U Q^T
  double delta = 0.0;     // min distance between community rows of U
  double bound = 0.0;
  bool hypothesis_holds = false;  // bound <= n / k
  long long observed = 0;         // d*_H(estimate, truth)
  bool holds = true;              // observed <= bound whenever the hypothesis holds
};

// Evaluates the k-means misclassification bound against an observed labeling.
KMeansBoundCheck kmeans_bound_check(const Matrix& V, const CommunityAssignment& truth,
                                    const std::vector<int>& estimate, double eps_approx);

// Number of k-ary cyclic m-tuples with exactly p positions where x_i != x_{i+1}
// (x_{m+1} = x_1): C(m,p) ((k-1)^p + (-1)^p (k-1)).
long long circular_count_formula(int k, int m, int p);
// Exhaustive enumeration of the same count; k^m <= 1e7.
long long circular_count_bruteforce(int k, int m, int p);

long long binomial(int m, int p);

}  // namespace sgbm
