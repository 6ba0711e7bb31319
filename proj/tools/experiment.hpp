#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgbm/clustering.hpp"
#include "sgbm/fourier.hpp"
#include "sgbm/keyvalue.hpp"
#include "sgbm/model.hpp"
#include "sgbm/spectral.hpp"

namespace sgbm::cli {

enum class Algorithm { algorithm1, algorithm2, classical_topk };

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& text);
EmbeddingMode parse_mode(const std::string& text);

struct ExperimentConfig {
  ConnectivityKernel kernel = ConnectivityKernel::sbm(0.8, 0.2);
  int n = 300;
  int k = 3;
  int d = 1;
  bool shuffle_assignment = false;
  std::vector<std::uint64_t> seeds = {1};
  Algorithm algorithm = Algorithm::algorithm2;
  std::optional<EmbeddingMode> mode;  // overrides the algorithm's embedding
  std::string out_dir = "sgbm_out";
  int z_max = 0;
  int restarts = 20;
  int max_iter = 300;
  double tau = 0.02;
  bool estimate_mu = false;
  std::string instance_dir;  // load instances written by `generate` from here

  EmbeddingMode embedding_mode() const;
  void validate() const;
};

// Reads [model], [run] and [output] sections.
ExperimentConfig config_from_doc(const KeyValueDoc& doc);
ExperimentConfig load_config(const std::string& path);

// seeds base, base+1, ..., base+count-1
std::vector<std::uint64_t> seed_range(std::uint64_t base, int count);
// Comma- or space-separated list.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

// Instance for a seed: loaded from `instance_dir` when set, else sampled.
SgbmInstance make_instance(const ExperimentConfig& config, std::uint64_t seed);

// mu_in / mu_out handed to the algorithms: kernel densities by default, or
// within/between edge densities of the sampled graph under its true labels.
EdgeDensities algorithm_densities(const ExperimentConfig& config, const SgbmInstance& instance);

struct SeedRun {
  std::uint64_t seed = 0;
  double mu_in = 0.0;
  double mu_out = 0.0;
  double target = 0.0;
  std::vector<double> selected;
  double gap = 0.0;
  double loss_initial = 0.0;  // labels from the embedding + k-means
  double loss_refined = 0.0;  // after one majority pass
  long long errors_initial = 0;
  long long errors_refined = 0;
  double kmeans_objective = 0.0;
  double runtime_seconds = 0.0;
  std::vector<int> labels;  // labels returned by the configured algorithm
  std::vector<int> truth;

  double loss() const;
  Algorithm algorithm = Algorithm::algorithm2;
};

SeedRun run_cluster_seed(const ExperimentConfig& config, std::uint64_t seed);

// Runs every seed (OpenMP over seeds) and returns the rows sorted by seed.
std::vector<SeedRun> run_cluster(const ExperimentConfig& config);

void write_cluster_table(std::ostream& out, const std::vector<SeedRun>& runs);
// Inverse of write_cluster_table for the numeric columns (labels are not stored).
std::vector<SeedRun> read_cluster_table(std::istream& in);
KeyValueDoc cluster_summary(const ExperimentConfig& config, const std::vector<SeedRun>& runs);

struct SweepRow {
  int n = 0;
  std::uint64_t seed = 0;
  double gap = 0.0;
  double residual = 0.0;       // Procrustes residual against the canonical basis
  double projector = 0.0;      // ||U U^T - V V^T||_F
  double dk_bound = 0.0;
  double epsilon = 0.0;
  double loss_initial = 0.0;
  double loss_refined = 0.0;
  double trace_moment2 = 0.0;  // tr(A^2) / n^2
  double measure_moment2 = 0.0;
};

// Same model at several n, reporting the quantities of the perturbation and
// moment bounds. The embedding is always the lambda*-nearest one.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::vector<int>& sizes);
void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows);
KeyValueDoc sweep_summary(const std::vector<SweepRow>& rows);

double median(std::vector<double> values);

// Output helpers: open a file under `dir` (created on demand) or throw with the path.
std::string output_path(const std::string& dir, const std::string& name);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace sgbm::cli
