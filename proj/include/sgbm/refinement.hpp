#pragma once

#include <cstdint>
#include <vector>

#include "sgbm/clustering.hpp"
#include "sgbm/keyvalue.hpp"

namespace sgbm {

struct RefineResult {
  std::vector<int> labels;
  std::vector<int> isolated;  // 0-based vertices with no neighbors (label kept)
  int changed = 0;
  int passes = 1;
};

// One synchronous majority pass: every vertex takes the label most common
// among its neighbors under the input labeling. Ties keep the current label
// when it is among the maxima, else the lowest label. A must be symmetric.
RefineResult majority_refine(const Matrix& A, const std::vector<int>& labels, int k);

// Serial reference of the same pass.
RefineResult majority_refine_reference(const Matrix& A, const std::vector<int>& labels, int k);

// Repeats synchronous passes until nothing changes or max_passes is reached.
RefineResult majority_refine_iterated(const Matrix& A, const std::vector<int>& labels, int k,
                                      int max_passes);

struct LossReport {
  long long absolute_error = 0;
  double loss_rate = 0.0;
  std::vector<int> best_permutation;  // best_permutation[l-1] = truth label for estimate label l
  Eigen::MatrixXi confusion;          // confusion(estimate-1, truth-1)

  KeyValueDoc to_doc() const;
};

// Permutation-minimized Hamming distance, via optimal assignment on the
// confusion matrix.
LossReport hamming_min(const std::vector<int>& estimate, const std::vector<int>& truth, int k);

// Same quantity by enumerating all k! relabelings; k <= 8.
long long hamming_min_bruteforce(const std::vector<int>& estimate, const std::vector<int>& truth,
                                 int k);

// Maximum-weight perfect matching on a square integer matrix (Hungarian
// method). Returns assignment[row] = column.
std::vector<int> max_weight_assignment(const Eigen::MatrixXi& weight);

struct Algorithm2Result {
  Algorithm1Result initial;
  RefineResult refined;
  const std::vector<int>& labels() const { return refined.labels; }
};

Algorithm2Result algorithm2(const Matrix& A, int k, double mu_in, double mu_out, std::uint64_t seed,
                            const ClusterOptions& options = {});
Algorithm2Result algorithm2(const Matrix& A, const SpectrumResult& spectrum, int k, double mu_in,
                            double mu_out, std::uint64_t seed, const ClusterOptions& options = {});

}  // namespace sgbm
