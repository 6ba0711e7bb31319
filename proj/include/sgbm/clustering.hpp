#pragma once

#include <cstdint>
#include <vector>

#include "sgbm/common.hpp"
#include "sgbm/spectral.hpp"

namespace sgbm {

struct KMeansResult {
  std::vector<int> labels;  // 1-based cluster of each row
  Matrix centers;           // k x m
  double objective = 0.0;   // ||P X - V||_F^2
  int iterations = 0;
  int restart_index = 0;
  bool converged = true;    // false when max_iter was hit
  std::vector<double> objective_trace;  // objective after each assignment step
};

struct KMeansOptions {
  int restarts = 20;
  int max_iter = 300;
};

// Lloyd iterations from k-means++ seeds; best of `restarts` runs. Restart r
// draws from derive_seed(seed, r); the winner is the lowest
// (objective, restart index) pair.
KMeansResult kmeans(const Matrix& V, int k, std::uint64_t seed, const KMeansOptions& options = {});

// A single Lloyd run from the given initial centers.
KMeansResult lloyd(const Matrix& V, Matrix centers, int max_iter);

// Exact minimizer by enumerating all k^n assignments (k^n <= 2e6).
KMeansResult brute_force_kmeans(const Matrix& V, int k);

// Objective of a labeling with centers at the centroids.
double kmeans_objective(const Matrix& V, const std::vector<int>& labels, int k);

enum class EmbeddingMode {
  hosc,       // k-1 eigenvectors nearest lambda*
  classical,  // eigenvectors of the k largest eigenvalues
};

const char* to_string(EmbeddingMode mode);

struct ClusterOptions {
  EmbeddingMode mode = EmbeddingMode::hosc;
  KMeansOptions kmeans;
};

struct Algorithm1Result {
  std::vector<int> labels;
  SpectralSelection selection;
  KMeansResult kmeans;
};

// Spectral embedding of an already-decomposed adjacency matrix.
SpectralSelection spectral_embedding(const SpectrumResult& spectrum, int k, double mu_in,
                                     double mu_out, EmbeddingMode mode);

Algorithm1Result algorithm1(const Matrix& A, int k, double mu_in, double mu_out, std::uint64_t seed,
                            const ClusterOptions& options = {});
Algorithm1Result algorithm1(const SpectrumResult& spectrum, int k, double mu_in, double mu_out,
                            std::uint64_t seed, const ClusterOptions& options = {});

}  // namespace sgbm
