#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "experiment.hpp"
#include "sgbm/fourier.hpp"
#include "sgbm/model_io.hpp"
#include "sgbm/spectral.hpp"
#include "sgbm/verification.hpp"

namespace {

using namespace sgbm;
using namespace sgbm::cli;

constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string config;
  int seeds = 0;
  std::string seed_list;
  std::string out;
  std::string mode;
  double tau = 0.0;
  int zmax = -1;
  int restarts = 0;
  bool estimate_mu = false;
  std::string instances;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Experiment configuration file")->required()->check(CLI::ExistingFile);
  auto* seeds = cmd->add_option("--seeds", f.seeds, "Number of seeds, starting at [run] base_seed")
                    ->check(CLI::PositiveNumber);
  cmd->add_option("--seed-list", f.seed_list, "Explicit comma-separated seeds")->excludes(seeds);
  cmd->add_option("--out", f.out, "Output directory (overrides [output] dir)");
}

ExperimentConfig resolve(const CommonFlags& f) {
  KeyValueDoc doc = KeyValueDoc::load(f.config);
  ExperimentConfig c = config_from_doc(doc);
  if (f.seeds > 0) {
    c.seeds = seed_range(static_cast<std::uint64_t>(doc.get_int("run", "base_seed", 1)), f.seeds);
  }
  if (!f.seed_list.empty()) c.seeds = parse_seed_list(f.seed_list);
  if (!f.out.empty()) c.out_dir = f.out;
  if (!f.mode.empty()) c.mode = parse_mode(f.mode);
  if (f.tau > 0.0) c.tau = f.tau;
  if (f.zmax >= 0) c.z_max = f.zmax;
  if (f.restarts > 0) c.restarts = f.restarts;
  if (f.estimate_mu) c.estimate_mu = true;
  if (!f.instances.empty()) c.instance_dir = f.instances;
  c.validate();
  return c;
}

template <class Fn>
std::string render(Fn fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

int cmd_generate(const ExperimentConfig& c) {
  for (auto seed : c.seeds) {
    const auto inst = make_instance(c, seed);
    const std::string stem = "instance_" + std::to_string(seed);
    write_text_file(output_path(c.out_dir, stem + ".edges"),
                    render([&](std::ostream& o) { write_edge_list(o, inst); }));
    write_text_file(output_path(c.out_dir, stem + ".meta"), instance_metadata(inst).to_string());
    std::cout << "seed " << seed << ": " << inst.edge_count() << " edges\n";
  }
  return 0;
}

int cmd_cluster(const ExperimentConfig& c, bool timing) {
  const auto runs = run_cluster(c);
  write_text_file(output_path(c.out_dir, "cluster.tsv"),
                  render([&](std::ostream& o) { write_cluster_table(o, runs); }));
  const auto summary = cluster_summary(c, runs);
  write_text_file(output_path(c.out_dir, "cluster_summary.txt"), summary.to_string());
  for (const auto& r : runs) {
    write_text_file(output_path(c.out_dir, "labels_" + std::to_string(r.seed) + ".txt"),
                    render([&](std::ostream& o) { write_labels(o, r.labels); }));
  }
  if (timing) {
    write_text_file(output_path(c.out_dir, "cluster_timing.tsv"), render([&](std::ostream& o) {
                      o << "#seed\truntime_seconds\n";
                      for (const auto& r : runs) o << r.seed << '\t' << r.runtime_seconds << '\n';
                    }));
  }
  for (const auto& r : runs) {
    std::cout << "seed " << r.seed << ": loss " << r.loss() << " (initial " << r.loss_initial
              << ", refined " << r.loss_refined << "), gap " << r.gap << '\n';
  }
  std::cout << "mean loss " << summary.get_or("summary", "mean_loss", "?") << '\n';
  return 0;
}

struct AtomInterval {
  double center = 0.0;
  int multiplicity = 0;
};

// Distinct atom locations with |location| >= 2 tau, merged within 1e-12, the
// community atom of z = 0 first.
std::vector<AtomInterval> atom_intervals(const LimitingMeasure& measure, double first, double tau) {
  std::vector<AtomInterval> out = {{first, 0}};
  for (const auto& a : measure.atoms) {
    if (std::abs(a.location) < 2.0 * tau) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) {
      return std::abs(e.center - a.location) <= 1e-12;
    });
    if (it == out.end()) {
      out.push_back({a.location, a.multiplicity});
    } else {
      it->multiplicity += a.multiplicity;
    }
  }
  return out;
}

int cmd_spectrum(const ExperimentConfig& c) {
  const auto mu = edge_densities(c.kernel, c.d);
  FourierOptions fo;
  fo.z_max = c.z_max;
  const auto table = build_fourier_table(c.kernel, c.d, fo);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
  const auto measure = build_limiting_measure(table, c.k, 1e-12);
  const auto report = check_conditions(table, c.k, mu.mu_in, mu.mu_out);
  const double target = lambda_star(c.n, c.k, mu.mu_in, mu.mu_out);

  KeyValueDoc doc = report.to_doc();
  doc.set("model", "kernel", c.kernel.describe());
  doc.set("model", "mu_in", mu.mu_in);
  doc.set("model", "mu_out", mu.mu_out);
  doc.set("model", "lambda_star", target);
  doc.set("model", "lambda_star_scaled", target / c.n);
  doc.set("model", "tau", c.tau);
  const auto terms = separation_terms(table, c.k, mu.mu_in, mu.mu_out);
  doc.set("separation", "eps0", terms.eps0);
  doc.set("separation", "eps1", terms.eps1);
  doc.set("separation", "eps2", terms.eps2);
  if (report.status == ConditionStatus::certified) {
    const double eps = terms.epsilon();
    doc.set("separation", "epsilon", eps);
    doc.set("separation", "tau_below_epsilon", c.tau < eps);
  }
  const auto moment = measure_moment(measure, 2);
  doc.set("moments", "m2", moment.value);
  doc.set("moments", "m2_truncation_bound", moment.truncation_bound);
  for (std::size_t i = 0; i < table.warnings.size(); ++i) {
    doc.set("warnings", std::to_string(i + 1), table.warnings[i]);
  }
  write_text_file(output_path(c.out_dir, "conditions.txt"), doc.to_string());
  write_text_file(output_path(c.out_dir, "fourier_table.tsv"),
                  render([&](std::ostream& o) { write_fourier_table(o, table); }));
  write_text_file(output_path(c.out_dir, "atoms.tsv"),
                  render([&](std::ostream& o) { write_atoms(o, measure); }));

  const auto intervals = atom_intervals(measure, target / c.n, c.tau);
  std::ostringstream counts;
  counts << "#seed\tcenter\tlower\tupper\tpredicted\tobserved\tcontains_zero\n";
  for (auto seed : c.seeds) {
    const auto inst = make_instance(c, seed);
    const auto spectrum = full_spectrum(inst.adjacency);
    write_text_file(output_path(c.out_dir, "spectrum_" + std::to_string(seed) + ".tsv"),
                    render([&](std::ostream& o) { write_spectrum(o, spectrum.eigenvalues, c.n); }));
    for (const auto& iv : intervals) {
      const double lo = iv.center - c.tau;
      const double hi = iv.center + c.tau;
      int predicted = 0;
      for (const auto& a : measure.atoms)
        if (a.location > lo && a.location < hi) predicted += a.multiplicity;
      const auto observed = empirical_measure_count(spectrum.eigenvalues, c.n, lo, hi);
      counts << seed << '\t' << format_double(iv.center) << '\t' << format_double(lo) << '\t'
             << format_double(hi) << '\t' << predicted << '\t' << observed.count << '\t'
             << (observed.contains_zero ? 1 : 0) << '\n';
    }
    const auto near = empirical_measure_count(spectrum.eigenvalues, c.n, target / c.n - c.tau,
                                              target / c.n + c.tau);
    std::cout << "seed " << seed << ": " << near.count << " eigenvalues within tau of lambda*/n\n";
  }
  write_text_file(output_path(c.out_dir, "interval_counts.tsv"), counts.str());
  std::cout << "conditions: " << to_string(report.status) << '\n';
  return 0;
}

int cmd_embed(const ExperimentConfig& c) {
  for (auto seed : c.seeds) {
    const auto inst = make_instance(c, seed);
    const auto mu = algorithm_densities(c, inst);
    const auto spectrum = full_spectrum(inst.adjacency);
    // The classical view drops the Perron vector: (v_2, ..., v_k).
    const auto sel = c.embedding_mode() == EmbeddingMode::hosc
                         ? spectral_embedding(spectrum, c.k, mu.mu_in, mu.mu_out, EmbeddingMode::hosc)
                         : select_top(spectrum, c.k - 1, 1);
    std::ostringstream o;
    o << '#';
    for (Eigen::Index j = 0; j < sel.V.cols(); ++j) o << 'v' << sel.indices[static_cast<std::size_t>(j)] + 1 << '\t';
    o << "label\n";
    for (int i = 0; i < c.n; ++i) {
      for (Eigen::Index j = 0; j < sel.V.cols(); ++j) o << format_double(sel.V(i, j)) << '\t';
      o << inst.assignment[i] << '\n';
    }
    write_text_file(output_path(c.out_dir, "embedding_" + std::to_string(seed) + ".tsv"), o.str());
  }
  return 0;
}

int cmd_verify(const std::string& out) {
  const auto report = run_verification();
  for (const auto& ch : report.checks) {
    std::cout << (ch.passed ? "PASS " : "FAIL ") << ch.name;
    if (!ch.passed) std::cout << " computed=" << ch.computed << " expected=" << ch.expected;
    if (!ch.detail.empty()) std::cout << " [" << ch.detail << ']';
    std::cout << '\n';
  }
  if (!out.empty()) write_text_file(output_path(out, "verification.txt"), report.to_doc().to_string());
  std::cout << report.checks.size() - static_cast<std::size_t>(report.failures()) << '/'
            << report.checks.size() << " checks passed\n";
  return report.all_passed() ? 0 : kExitCheckFailure;
}

int cmd_sweep(const ExperimentConfig& c, const std::vector<int>& sizes) {
  const auto rows = run_sweep(c, sizes);
  write_text_file(output_path(c.out_dir, "sweep.tsv"),
                  render([&](std::ostream& o) { write_sweep_table(o, rows); }));
  const auto summary = sweep_summary(rows);
  write_text_file(output_path(c.out_dir, "sweep_summary.txt"), summary.to_string());
  std::cout << summary.to_string();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral clustering experiments on soft geometric block models"};
  app.require_subcommand(1);

  CommonFlags gen_f, clu_f, spe_f, emb_f, swe_f;
  auto* gen = app.add_subcommand("generate", "Sample instances and write edge lists + metadata");
  add_common(gen, gen_f);

  auto* clu = app.add_subcommand("cluster", "Run the clustering algorithms and tabulate losses");
  add_common(clu, clu_f);
  clu->add_option("--mode", clu_f.mode, "Embedding: hosc or classical")
      ->check(CLI::IsMember({"hosc", "classical"}));
  clu->add_option("--restarts", clu_f.restarts, "k-means restarts")->check(CLI::PositiveNumber);
  clu->add_flag("--estimate-mu", clu_f.estimate_mu, "Use sampled edge densities for mu_in/mu_out");
  clu->add_option("--instances", clu_f.instances, "Directory with instances from `generate`");
  bool timing = false;
  clu->add_flag("--timing", timing, "Also write per-seed runtimes to cluster_timing.tsv");

  auto* spe = app.add_subcommand("spectrum", "Spectra and limiting-measure atoms with interval counts");
  add_common(spe, spe_f);
  spe->add_option("--tau", spe_f.tau, "Interval half-width on the lambda/n scale")
      ->check(CLI::PositiveNumber);
  spe->add_option("--zmax", spe_f.zmax, "Fourier truncation radius (0 = default)")
      ->check(CLI::NonNegativeNumber);
  spe->add_option("--instances", spe_f.instances, "Directory with instances from `generate`");

  auto* emb = app.add_subcommand("embed", "Write spectral embedding coordinates");
  add_common(emb, emb_f);
  emb->add_option("--mode", emb_f.mode, "Embedding: hosc or classical")
      ->check(CLI::IsMember({"hosc", "classical"}));
  emb->add_option("--instances", emb_f.instances, "Directory with instances from `generate`");

  std::string verify_out;
  auto* ver = app.add_subcommand("verify", "Run the closed-form and identity checks");
  ver->add_option("--out", verify_out, "Directory for verification.txt");

  std::vector<int> sizes = {400, 1000, 2000};
  auto* swe = app.add_subcommand("sweep", "Perturbation and moment quantities across n");
  add_common(swe, swe_f);
  swe->add_option("--n-list", sizes, "Graph sizes")->delimiter(',');
  swe->add_option("--restarts", swe_f.restarts, "k-means restarts")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(resolve(gen_f));
    if (*clu) return cmd_cluster(resolve(clu_f), timing);
    if (*spe) return cmd_spectrum(resolve(spe_f));
    if (*emb) return cmd_embed(resolve(emb_f));
    if (*ver) return cmd_verify(verify_out);
    if (*swe) return cmd_sweep(resolve(swe_f), sizes);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  }
  return kExitUsage;
}
