#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "sgbm/model_io.hpp"
#include "sgbm/refinement.hpp"
#include "sgbm/theory.hpp"

namespace sgbm::cli {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::algorithm1: return "algorithm1";
    case Algorithm::algorithm2: return "algorithm2";
    default: return "classical_topk";
  }
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "algorithm1") return Algorithm::algorithm1;
  if (text == "algorithm2") return Algorithm::algorithm2;
  if (text == "classical_topk") return Algorithm::classical_topk;
  throw InvalidArgument("unknown algorithm '" + text +
                        "' (expected algorithm1, algorithm2 or classical_topk)");
}

EmbeddingMode parse_mode(const std::string& text) {
  if (text == "hosc") return EmbeddingMode::hosc;
  if (text == "classical") return EmbeddingMode::classical;
  throw InvalidArgument("unknown mode '" + text + "' (expected hosc or classical)");
}

EmbeddingMode ExperimentConfig::embedding_mode() const {
  if (mode) return *mode;
  return algorithm == Algorithm::classical_topk ? EmbeddingMode::classical : EmbeddingMode::hosc;
}

void ExperimentConfig::validate() const {
  if (k < 2) throw InvalidArgument("config: k must be >= 2");
  if (d < 1) throw InvalidArgument("config: d must be >= 1");
  if (n < k || n % k != 0) {
    throw InvalidArgument("config: n=" + std::to_string(n) + " must be a positive multiple of k=" +
                          std::to_string(k));
  }
  if (seeds.empty()) throw InvalidArgument("config: no seeds");
  if (restarts < 1 || max_iter < 1) throw InvalidArgument("config: restarts and max_iter must be >= 1");
  if (!(tau > 0.0)) throw InvalidArgument("config: tau must be positive");
  if (z_max < 0) throw InvalidArgument("config: zmax must be >= 0");
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, int count) {
  if (count < 1) throw InvalidArgument("seed count must be >= 1");
  std::vector<std::uint64_t> out;
  for (int i = 0; i < count; ++i) out.push_back(base + static_cast<std::uint64_t>(i));
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<std::uint64_t> out;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.front() == '-') {
      throw InvalidArgument("seed list: '" + token + "' is not a nonnegative integer");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("seed list is empty");
  return out;
}

ExperimentConfig config_from_doc(const KeyValueDoc& doc) {
  ExperimentConfig c;
  c.kernel = read_kernel(doc, "model");
  c.n = static_cast<int>(doc.require_int("model", "n"));
  c.k = static_cast<int>(doc.require_int("model", "k"));
  c.d = static_cast<int>(doc.get_int("model", "d", 1));
  const std::string assignment = doc.get_or("model", "assignment", "canonical");
  if (assignment != "canonical" && assignment != "shuffled") {
    throw InvalidArgument("[model] assignment must be canonical or shuffled");
  }
  c.shuffle_assignment = assignment == "shuffled";

  if (auto list = doc.get("run", "seed_list")) {
    c.seeds = parse_seed_list(*list);
  } else {
    c.seeds = seed_range(static_cast<std::uint64_t>(doc.get_int("run", "base_seed", 1)),
                         static_cast<int>(doc.get_int("run", "seeds", 1)));
  }
  c.algorithm = parse_algorithm(doc.get_or("run", "algorithm", "algorithm2"));
  if (auto m = doc.get("run", "mode")) c.mode = parse_mode(*m);
  c.restarts = static_cast<int>(doc.get_int("run", "restarts", c.restarts));
  c.max_iter = static_cast<int>(doc.get_int("run", "max_iter", c.max_iter));
  c.tau = doc.get_double("run", "tau", c.tau);
  c.z_max = static_cast<int>(doc.get_int("run", "zmax", 0));
  const std::string est = doc.get_or("run", "estimate_mu", "false");
  if (est != "true" && est != "false") throw InvalidArgument("[run] estimate_mu must be true or false");
  c.estimate_mu = est == "true";
  c.out_dir = doc.get_or("output", "dir", c.out_dir);
  return c;
}

ExperimentConfig load_config(const std::string& path) { return config_from_doc(KeyValueDoc::load(path)); }

SgbmInstance make_instance(const ExperimentConfig& config, std::uint64_t seed) {
  if (!config.instance_dir.empty()) {
    const std::string stem = config.instance_dir + "/instance_" + std::to_string(seed);
    auto inst = load_instance(stem + ".edges", stem + ".meta");
    if (inst.n() != config.n || inst.k() != config.k || inst.d != config.d) {
      throw InvalidArgument(stem + ": instance does not match the configured n, k, d");
    }
    return inst;
  }
  SampleOptions options;
  if (config.shuffle_assignment) {
    options.assignment = CommunityAssignment::shuffled(config.n, config.k, derive_seed(seed, 2));
  }
  return sample_instance(config.kernel, config.n, config.k, config.d, seed, options);
}

EdgeDensities algorithm_densities(const ExperimentConfig& config, const SgbmInstance& instance) {
  if (!config.estimate_mu) return edge_densities(config.kernel, config.d);
  const int n = instance.n();
  double within = 0.0;
  double between = 0.0;
  double within_pairs = 0.0;
  double between_pairs = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (instance.assignment[i] == instance.assignment[j]) {
        within += instance.adjacency(i, j);
        within_pairs += 1.0;
      } else {
        between += instance.adjacency(i, j);
        between_pairs += 1.0;
      }
    }
  }
  return {within / within_pairs, between / between_pairs, 0.0};
}

double SeedRun::loss() const {
  return algorithm == Algorithm::algorithm2 ? loss_refined : loss_initial;
}

SeedRun run_cluster_seed(const ExperimentConfig& config, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const SgbmInstance inst = make_instance(config, seed);
  const EdgeDensities mu = algorithm_densities(config, inst);

  ClusterOptions options;
  options.mode = config.embedding_mode();
  options.kmeans.restarts = config.restarts;
  options.kmeans.max_iter = config.max_iter;
  const auto result =
      algorithm2(inst.adjacency, config.k, mu.mu_in, mu.mu_out, derive_seed(seed, 3), options);

  SeedRun r;
  r.seed = seed;
  r.algorithm = config.algorithm;
  r.mu_in = mu.mu_in;
  r.mu_out = mu.mu_out;
  r.target = options.mode == EmbeddingMode::hosc
                 ? lambda_star(config.n, config.k, mu.mu_in, mu.mu_out)
                 : std::numeric_limits<double>::quiet_NaN();
  const auto& sel = result.initial.selection;
  r.selected.assign(sel.eigenvalues.data(), sel.eigenvalues.data() + sel.eigenvalues.size());
  r.gap = sel.gap;
  r.truth = inst.assignment.labels();
  const auto pre = hamming_min(result.initial.labels, r.truth, config.k);
  const auto post = hamming_min(result.refined.labels, r.truth, config.k);
  r.loss_initial = pre.loss_rate;
  r.errors_initial = pre.absolute_error;
  r.loss_refined = post.loss_rate;
  r.errors_refined = post.absolute_error;
  r.kmeans_objective = result.initial.kmeans.objective;
  r.labels = config.algorithm == Algorithm::algorithm2 ? result.refined.labels
                                                       : result.initial.labels;
  r.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

template <class Row, class Fn>
std::vector<Row> over_seeds(std::size_t count, Fn fn) {
  std::vector<Row> rows(count);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < static_cast<long>(count); ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(sgbm_seed_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::string join(const std::vector<double>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_double(v[i]);
  }
  return s;
}

}  // namespace

std::vector<SeedRun> run_cluster(const ExperimentConfig& config) {
  config.validate();
  auto runs = over_seeds<SeedRun>(config.seeds.size(), [&](std::size_t i) {
    return run_cluster_seed(config, config.seeds[i]);
  });
  std::stable_sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.seed < b.seed; });
  return runs;
}

void write_cluster_table(std::ostream& out, const std::vector<SeedRun>& runs) {
  out << "#seed\talgorithm\tmu_in\tmu_out\ttarget\tselected\tgap\tloss_initial\tloss_refined\t"
         "errors_initial\terrors_refined\tkmeans_objective\n";
  for (const auto& r : runs) {
    out << r.seed << '\t' << to_string(r.algorithm) << '\t' << format_double(r.mu_in) << '\t'
        << format_double(r.mu_out) << '\t' << format_double(r.target) << '\t'
        << join(r.selected, ',') << '\t' << format_double(r.gap) << '\t'
        << format_double(r.loss_initial) << '\t' << format_double(r.loss_refined) << '\t'
        << r.errors_initial << '\t' << r.errors_refined << '\t'
        << format_double(r.kmeans_objective) << '\n';
  }
}

std::vector<SeedRun> read_cluster_table(std::istream& in) {
  std::vector<SeedRun> runs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, '\t')) f.push_back(cell);
    if (f.size() != 12) throw InvalidArgument("cluster table: expected 12 columns, got " + std::to_string(f.size()));
    SeedRun r;
    r.seed = std::stoull(f[0]);
    r.algorithm = parse_algorithm(f[1]);
    r.mu_in = std::stod(f[2]);
    r.mu_out = std::stod(f[3]);
    r.target = std::stod(f[4]);
    std::istringstream sel(f[5]);
    for (std::string v; std::getline(sel, v, ',');) r.selected.push_back(std::stod(v));
    r.gap = std::stod(f[6]);
    r.loss_initial = std::stod(f[7]);
    r.loss_refined = std::stod(f[8]);
    r.errors_initial = std::stoll(f[9]);
    r.errors_refined = std::stoll(f[10]);
    r.kmeans_objective = std::stod(f[11]);
    runs.push_back(std::move(r));
  }
  return runs;
}

KeyValueDoc cluster_summary(const ExperimentConfig& config, const std::vector<SeedRun>& runs) {
  KeyValueDoc doc;
  doc.set("experiment", "kernel", config.kernel.describe());
  doc.set("experiment", "n", config.n);
  doc.set("experiment", "k", config.k);
  doc.set("experiment", "d", config.d);
  doc.set("experiment", "algorithm", std::string(to_string(config.algorithm)));
  doc.set("experiment", "mode", std::string(to_string(config.embedding_mode())));
  doc.set("experiment", "seeds", static_cast<int>(runs.size()));
  double pre = 0.0, post = 0.0, ret = 0.0;
  int exact_pre = 0, exact_post = 0;
  std::vector<double> gaps;
  for (const auto& r : runs) {
    pre += r.loss_initial;
    post += r.loss_refined;
    ret += r.loss();
    exact_pre += r.errors_initial == 0;
    exact_post += r.errors_refined == 0;
    gaps.push_back(r.gap);
  }
  const double count = static_cast<double>(runs.size());
  doc.set("summary", "mean_loss", ret / count);
  doc.set("summary", "mean_loss_initial", pre / count);
  doc.set("summary", "mean_loss_refined", post / count);
  doc.set("summary", "exact_recovery_initial", exact_pre / count);
  doc.set("summary", "exact_recovery_refined", exact_post / count);
  doc.set("summary", "median_gap", median(gaps));
  return doc;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t h = values.size() / 2;
  return values.size() % 2 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::vector<int>& sizes) {
  if (sizes.empty()) throw InvalidArgument("sweep: no sizes");
  const auto mu = edge_densities(config.kernel, config.d);
  FourierOptions fo;
  fo.z_max = config.z_max;
  const auto table = build_fourier_table(config.kernel, config.d, fo);
  const auto cond = check_conditions(table, config.k, mu.mu_in, mu.mu_out);
  const double eps = cond.status == ConditionStatus::certified
                         ? separation_epsilon(table, config.k, mu.mu_in, mu.mu_out)
                         : std::numeric_limits<double>::quiet_NaN();
  const double moment2 = measure_moment(build_limiting_measure(table, config.k), 2).value;

  std::vector<std::pair<int, std::uint64_t>> jobs;
  for (int n : sizes) {
    ExperimentConfig c = config;
    c.n = n;
    c.validate();
    for (auto s : config.seeds) jobs.emplace_back(n, s);
  }
  auto rows = over_seeds<SweepRow>(jobs.size(), [&](std::size_t i) {
    ExperimentConfig c = config;
    c.n = jobs[i].first;
    c.estimate_mu = false;
    c.mode = EmbeddingMode::hosc;
    const std::uint64_t seed = jobs[i].second;
    const SgbmInstance inst = make_instance(c, seed);
    const SpectrumResult spectrum = full_spectrum(inst.adjacency);
    ClusterOptions options;
    options.kmeans.restarts = c.restarts;
    options.kmeans.max_iter = c.max_iter;
    const auto result = algorithm2(inst.adjacency, spectrum, c.k, mu.mu_in, mu.mu_out,
                                   derive_seed(seed, 3), options);
    const Matrix U = community_eigenbasis(inst.assignment).U;
    const auto align = procrustes_align(result.initial.selection.V, U);
    SweepRow r;
    r.n = c.n;
    r.seed = seed;
    r.gap = result.initial.selection.gap;
    r.residual = align.residual;
    r.projector = align.projector_distance;
    r.epsilon = eps;
    r.dk_bound = std::isnan(eps) ? std::numeric_limits<double>::infinity()
                                 : davis_kahan_bound(c.n, c.k, eps);
    r.loss_initial = hamming_min(result.initial.labels, inst.assignment.labels(), c.k).loss_rate;
    r.loss_refined = hamming_min(result.refined.labels, inst.assignment.labels(), c.k).loss_rate;
    r.trace_moment2 = trace_moment(inst.adjacency, 2);
    r.measure_moment2 = moment2;
    return r;
  });
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.n != b.n ? a.n < b.n : a.seed < b.seed;
  });
  return rows;
}

void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "#n\tseed\tgap\tresidual\tprojector_distance\tdk_bound\tepsilon\tloss_initial\t"
         "loss_refined\ttrace_moment2\tmeasure_moment2\n";
  for (const auto& r : rows) {
    out << r.n << '\t' << r.seed << '\t' << format_double(r.gap) << '\t'
        << format_double(r.residual) << '\t' << format_double(r.projector) << '\t'
        << format_double(r.dk_bound) << '\t' << format_double(r.epsilon) << '\t'
        << format_double(r.loss_initial) << '\t' << format_double(r.loss_refined) << '\t'
        << format_double(r.trace_moment2) << '\t' << format_double(r.measure_moment2) << '\n';
  }
}

KeyValueDoc sweep_summary(const std::vector<SweepRow>& rows) {
  KeyValueDoc doc;
  std::vector<int> sizes;
  for (const auto& r : rows)
    if (std::find(sizes.begin(), sizes.end(), r.n) == sizes.end()) sizes.push_back(r.n);
  for (int n : sizes) {
    std::vector<double> residual, loss, moment_err;
    for (const auto& r : rows) {
      if (r.n != n) continue;
      residual.push_back(r.residual);
      loss.push_back(r.loss_refined);
      moment_err.push_back(std::abs(r.trace_moment2 - r.measure_moment2) / r.measure_moment2);
    }
    const std::string s = "n=" + std::to_string(n);
    doc.set(s, "seeds", static_cast<int>(residual.size()));
    doc.set(s, "median_residual", median(residual));
    doc.set(s, "median_loss_refined", median(loss));
    doc.set(s, "median_moment2_relative_error", median(moment_err));
  }
  return doc;
}

std::string output_path(const std::string& dir, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
  return (std::filesystem::path(dir) / name).string();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace sgbm::cli
