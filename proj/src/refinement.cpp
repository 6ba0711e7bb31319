#include "sgbm/refinement.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "sgbm/parallel_kernels.hpp"

namespace sgbm {

namespace {

void check_labels(const Matrix& A, const std::vector<int>& labels, int k) {
  if (A.rows() != A.cols() || static_cast<Eigen::Index>(labels.size()) != A.rows()) {
    throw InvalidArgument("majority_refine: labels must match the matrix dimension");
  }
  for (int l : labels) {
    if (l < 1 || l > k) throw InvalidArgument("majority_refine: label out of range 1..k");
  }
}

RefineResult decide(const Eigen::MatrixXi& votes, const std::vector<int>& labels, int k) {
  RefineResult r;
  r.labels = labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto row = votes.row(static_cast<Eigen::Index>(i));
    const int best = row.maxCoeff();
    if (best == 0) {
      r.isolated.push_back(static_cast<int>(i));
      continue;
    }
    int pick = labels[i];
    if (row(pick - 1) != best) {
      for (int l = 0; l < k; ++l) {
        if (row(l) == best) {
          pick = l + 1;
          break;
        }
      }
    }
    if (pick != labels[i]) ++r.changed;
    r.labels[i] = pick;
  }
  return r;
}

}  // namespace

RefineResult majority_refine(const Matrix& A, const std::vector<int>& labels, int k) {
  check_labels(A, labels, k);
  return decide(kernels::neighbor_votes(A, labels, k), labels, k);
}

RefineResult majority_refine_reference(const Matrix& A, const std::vector<int>& labels, int k) {
  check_labels(A, labels, k);
  return decide(kernels::neighbor_votes_reference(A, labels, k), labels, k);
}

RefineResult majority_refine_iterated(const Matrix& A, const std::vector<int>& labels, int k,
                                      int max_passes) {
  RefineResult r = majority_refine(A, labels, k);
  int total_changed = r.changed;
  while (r.changed > 0 && r.passes < max_passes) {
    const int passes = r.passes;
    r = majority_refine(A, r.labels, k);
    r.passes = passes + 1;
    total_changed += r.changed;
  }
  r.changed = total_changed;
  return r;
}

std::vector<int> max_weight_assignment(const Eigen::MatrixXi& weight) {
  // Hungarian method (potentials form) on cost = -weight, 1-based internals.
  const int n = static_cast<int>(weight.rows());
  if (weight.cols() != n) throw InvalidArgument("max_weight_assignment: matrix must be square");
  const long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      long long delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = -static_cast<long long>(weight(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= n; ++j) assignment[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  return assignment;
}

namespace {

Eigen::MatrixXi confusion_matrix(const std::vector<int>& estimate, const std::vector<int>& truth,
                                 int k) {
  if (estimate.size() != truth.size()) throw InvalidArgument("hamming_min: lengths differ");
  if (k < 1) throw InvalidArgument("hamming_min: k must be >= 1");
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(k, k);
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    if (estimate[i] < 1 || estimate[i] > k || truth[i] < 1 || truth[i] > k) {
      throw InvalidArgument("hamming_min: label out of range 1..k");
    }
    ++c(estimate[i] - 1, truth[i] - 1);
  }
  return c;
}

}  // namespace

LossReport hamming_min(const std::vector<int>& estimate, const std::vector<int>& truth, int k) {
  LossReport r;
  r.confusion = confusion_matrix(estimate, truth, k);
  const auto match = max_weight_assignment(r.confusion);
  long long agree = 0;
  r.best_permutation.resize(static_cast<std::size_t>(k));
  for (int l = 0; l < k; ++l) {
    r.best_permutation[static_cast<std::size_t>(l)] = match[static_cast<std::size_t>(l)] + 1;
    agree += r.confusion(l, match[static_cast<std::size_t>(l)]);
  }
  r.absolute_error = static_cast<long long>(estimate.size()) - agree;
  r.loss_rate = estimate.empty() ? 0.0 : static_cast<double>(r.absolute_error) / estimate.size();
  return r;
}

long long hamming_min_bruteforce(const std::vector<int>& estimate, const std::vector<int>& truth,
                                 int k) {
  if (k > 8) throw InvalidArgument("hamming_min_bruteforce: k must be <= 8");
  const auto c = confusion_matrix(estimate, truth, k);
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  long long best_agree = -1;
  do {
    long long agree = 0;
    for (int l = 0; l < k; ++l) agree += c(l, perm[static_cast<std::size_t>(l)]);
    best_agree = std::max(best_agree, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<long long>(estimate.size()) - best_agree;
}

KeyValueDoc LossReport::to_doc() const {
  KeyValueDoc doc;
  doc.set("loss", "absolute_error", absolute_error);
  doc.set("loss", "loss_rate", loss_rate);
  std::string perm;
  for (std::size_t l = 0; l < best_permutation.size(); ++l) {
    if (l) perm += ' ';
    perm += std::to_string(best_permutation[l]);
  }
  doc.set("loss", "best_permutation", perm);
  for (Eigen::Index r = 0; r < confusion.rows(); ++r) {
    std::string row;
    for (Eigen::Index c = 0; c < confusion.cols(); ++c) {
      if (c) row += ' ';
      row += std::to_string(confusion(r, c));
    }
    doc.set("confusion", "estimate_" + std::to_string(r + 1), row);
  }
  return doc;
}

Algorithm2Result algorithm2(const Matrix& A, const SpectrumResult& spectrum, int k, double mu_in,
                            double mu_out, std::uint64_t seed, const ClusterOptions& options) {
  Algorithm2Result r;
  r.initial = algorithm1(spectrum, k, mu_in, mu_out, seed, options);
  r.refined = majority_refine(A, r.initial.labels, k);
  return r;
}

Algorithm2Result algorithm2(const Matrix& A, int k, double mu_in, double mu_out, std::uint64_t seed,
                            const ClusterOptions& options) {
  return algorithm2(A, full_spectrum(A), k, mu_in, mu_out, seed, options);
}

}  // namespace sgbm
