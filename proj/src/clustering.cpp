#include "sgbm/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgbm/fourier.hpp"
#include "sgbm/parallel_kernels.hpp"
#include "sgbm/random.hpp"

namespace sgbm {

namespace {

Matrix kmeanspp_seeds(const Matrix& V, int k, Rng& rng) {
  const auto n = V.rows();
  Matrix centers(k, V.cols());
  centers.row(0) = V.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  Vector d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = (V.row(i) - centers.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = V.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (V.row(i) - centers.row(c)).squaredNorm());
    }
  }
  return centers;
}

// Centroids of nonempty clusters; returns cluster sizes. Empty clusters keep
// their previous center.
std::vector<int> update_centroids(const Matrix& V, const std::vector<int>& assign, Matrix& centers) {
  const int k = static_cast<int>(centers.rows());
  std::vector<int> count(static_cast<std::size_t>(k), 0);
  Matrix sums = Matrix::Zero(k, V.cols());
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    sums.row(assign[static_cast<std::size_t>(i)]) += V.row(i);
    ++count[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
  }
  for (int c = 0; c < k; ++c) {
    if (count[static_cast<std::size_t>(c)] > 0) {
      centers.row(c) = sums.row(c) / count[static_cast<std::size_t>(c)];
    }
  }
  return count;
}

}  // namespace

KMeansResult lloyd(const Matrix& V, Matrix centers, int max_iter) {
  const auto n = V.rows();
  const int k = static_cast<int>(centers.rows());
  if (n < k || k < 1) throw InvalidArgument("kmeans: need n >= k >= 1");
  KMeansResult r;
  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  std::vector<int> next(static_cast<std::size_t>(n), 0);
  std::vector<double> sq(static_cast<std::size_t>(n), 0.0);
  r.converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const double obj = kernels::assign_nearest(V, centers, next, sq);
    r.objective_trace.push_back(obj);
    ++r.iterations;
    if (next == assign) {
      r.converged = true;
      break;
    }
    assign = next;
    const auto count = update_centroids(V, assign, centers);
    // Empty clusters take the point farthest from its current centroid.
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int c = 0; c < k; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) continue;
      Eigen::Index far = -1;
      double best = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        const double dist = (V.row(i) - centers.row(assign[static_cast<std::size_t>(i)])).squaredNorm();
        if (dist > best) {
          best = dist;
          far = i;
        }
      }
      used[static_cast<std::size_t>(far)] = true;
      centers.row(c) = V.row(far);
    }
  }
  if (assign.front() < 0) assign = next;
  update_centroids(V, assign, centers);
  r.labels.resize(static_cast<std::size_t>(n));
  r.objective = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = assign[static_cast<std::size_t>(i)];
    r.labels[static_cast<std::size_t>(i)] = c + 1;
    r.objective += (V.row(i) - centers.row(c)).squaredNorm();
  }
  r.centers = std::move(centers);
  return r;
}

KMeansResult kmeans(const Matrix& V, int k, std::uint64_t seed, const KMeansOptions& options) {
  if (k < 1 || V.rows() < k) throw InvalidArgument("kmeans: need n >= k >= 1");
  if (options.restarts < 1) throw InvalidArgument("kmeans: restarts must be >= 1");
  if (options.max_iter < 1) throw InvalidArgument("kmeans: max_iter must be >= 1");
  std::vector<KMeansResult> runs(static_cast<std::size_t>(options.restarts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    runs[static_cast<std::size_t>(r)] = lloyd(V, kmeanspp_seeds(V, k, rng), options.max_iter);
    runs[static_cast<std::size_t>(r)].restart_index = r;
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].objective < runs[best].objective) best = r;
  }
  return std::move(runs[best]);
}

double kmeans_objective(const Matrix& V, const std::vector<int>& labels, int k) {
  if (static_cast<Eigen::Index>(labels.size()) != V.rows()) {
    throw InvalidArgument("kmeans_objective: label count != rows");
  }
  Matrix centers = Matrix::Zero(k, V.cols());
  std::vector<int> assign(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) assign[i] = labels[i] - 1;
  update_centroids(V, assign, centers);
  double obj = 0.0;
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    obj += (V.row(i) - centers.row(assign[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return obj;
}

KMeansResult brute_force_kmeans(const Matrix& V, int k) {
  const auto n = V.rows();
  if (k < 1 || n < 1) throw InvalidArgument("brute_force_kmeans: need n >= 1, k >= 1");
  const double total = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (total > 2e6) throw InvalidArgument("brute_force_kmeans: k^n exceeds 2e6");
  const long combos = std::lround(total);
  const double norm_sum = V.rowwise().squaredNorm().sum();

  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  std::vector<int> best_assign = assign;
  double best = std::numeric_limits<double>::infinity();
  Matrix sums(k, V.cols());
  std::vector<int> count(static_cast<std::size_t>(k));
  for (long code = 0; code < combos; ++code) {
    long c = code;
    for (Eigen::Index i = 0; i < n; ++i) {
      assign[static_cast<std::size_t>(i)] = static_cast<int>(c % k);
      c /= k;
    }
    sums.setZero();
    std::fill(count.begin(), count.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += V.row(i);
      ++count[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    // sum ||v - centroid||^2 = sum ||v||^2 - sum_c ||S_c||^2 / n_c
    double obj = norm_sum;
    for (int j = 0; j < k; ++j) {
      if (count[static_cast<std::size_t>(j)] > 0) obj -= sums.row(j).squaredNorm() / count[static_cast<std::size_t>(j)];
    }
    if (obj < best - 1e-15) {
      best = obj;
      best_assign = assign;
    }
  }
  KMeansResult r;
  r.centers = Matrix::Zero(k, V.cols());
  update_centroids(V, best_assign, r.centers);
  r.labels.resize(static_cast<std::size_t>(n));
  r.objective = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = best_assign[static_cast<std::size_t>(i)];
    r.labels[static_cast<std::size_t>(i)] = c + 1;
    r.objective += (V.row(i) - r.centers.row(c)).squaredNorm();
  }
  return r;
}

const char* to_string(EmbeddingMode mode) {
  return mode == EmbeddingMode::hosc ? "hosc" : "classical";
}

SpectralSelection spectral_embedding(const SpectrumResult& spectrum, int k, double mu_in,
                                     double mu_out, EmbeddingMode mode) {
  const int n = static_cast<int>(spectrum.size());
  if (k < 2 || k > n) throw InvalidArgument("spectral embedding: need 2 <= k <= n");
  if (mode == EmbeddingMode::classical) return select_top(spectrum, k);
  return select_near(spectrum, lambda_star(n, k, mu_in, mu_out), k - 1);
}

Algorithm1Result algorithm1(const SpectrumResult& spectrum, int k, double mu_in, double mu_out,
                            std::uint64_t seed, const ClusterOptions& options) {
  Algorithm1Result r;
  r.selection = spectral_embedding(spectrum, k, mu_in, mu_out, options.mode);
  r.kmeans = kmeans(r.selection.V, k, seed, options.kmeans);
  r.labels = r.kmeans.labels;
  return r;
}

Algorithm1Result algorithm1(const Matrix& A, int k, double mu_in, double mu_out, std::uint64_t seed,
                            const ClusterOptions& options) {
  return algorithm1(full_spectrum(A), k, mu_in, mu_out, seed, options);
}

}  // namespace sgbm
