#include "sgbm/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sgbm {

void write_edge_list(std::ostream& out, const Matrix& adjacency, int k, int d, std::uint64_t seed) {
  const auto n = adjacency.rows();
  out << n << ' ' << k << ' ' << d << ' ' << seed << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (adjacency(i, j) != 0.0) out << (i + 1) << ' ' << (j + 1) << '\n';
    }
  }
}

void write_edge_list(std::ostream& out, const SgbmInstance& instance) {
  write_edge_list(out, instance.adjacency, instance.k(), instance.d, instance.seed);
}

EdgeListFile read_edge_list(std::istream& in) {
  EdgeListFile f;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("edge list: missing header");
  {
    std::istringstream hs(line);
    long long n = 0, k = 0, d = 0;
    unsigned long long seed = 0;
    if (!(hs >> n >> k >> d >> seed) || n < 1 || k < 1 || d < 1) {
      throw InvalidArgument("edge list: malformed header '" + line + "'");
    }
    f.n = static_cast<int>(n);
    f.k = static_cast<int>(k);
    f.d = static_cast<int>(d);
    f.seed = seed;
  }
  f.adjacency = Matrix::Zero(f.n, f.n);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    long long i = 0, j = 0;
    if (!(ls >> i >> j) || i < 1 || j > f.n || i >= j) {
      throw InvalidArgument("edge list line " + std::to_string(lineno) + ": expected 1 <= i < j <= n");
    }
    f.adjacency(i - 1, j - 1) = 1.0;
    f.adjacency(j - 1, i - 1) = 1.0;
  }
  return f;
}

void write_kernel(KeyValueDoc& doc, const std::string& section, const ConnectivityKernel& kernel) {
  if (auto* s = kernel.as_sbm()) {
    doc.set(section, "kernel", std::string("sbm"));
    doc.set(section, "p_in", s->p_in);
    doc.set(section, "p_out", s->p_out);
  } else if (auto* g = kernel.as_gbm()) {
    doc.set(section, "kernel", std::string("gbm"));
    doc.set(section, "r_in", g->r_in);
    doc.set(section, "r_out", g->r_out);
  } else {
    const auto* c = kernel.as_custom();
    doc.set(section, "kernel", c->name);
    for (const auto& [key, value] : c->parameters) doc.set(section, key, value);
  }
}

ConnectivityKernel read_kernel(const KeyValueDoc& doc, const std::string& section) {
  const std::string kind = doc.get_or(section, "kernel", "");
  if (kind == "sbm") {
    return ConnectivityKernel::sbm(doc.require_double(section, "p_in"),
                                   doc.require_double(section, "p_out"));
  }
  if (kind == "gbm") {
    return ConnectivityKernel::gbm(doc.require_double(section, "r_in"),
                                   doc.require_double(section, "r_out"));
  }
  if (kind == "gaussian") {
    return gaussian_kernel(doc.require_double(section, "amp_in"),
                           doc.require_double(section, "width_in"),
                           doc.require_double(section, "amp_out"),
                           doc.require_double(section, "width_out"));
  }
  throw InvalidArgument("[" + section + "] kernel: unknown kind '" + kind +
                        "' (expected sbm, gbm or gaussian)");
}

KeyValueDoc instance_metadata(const SgbmInstance& instance) {
  KeyValueDoc doc;
  doc.set("instance", "n", instance.n());
  doc.set("instance", "k", instance.k());
  doc.set("instance", "d", instance.d);
  doc.set("instance", "seed", std::to_string(instance.seed));
  doc.set("instance", "edges", static_cast<long long>(instance.edge_count()));
  write_kernel(doc, "kernel", instance.kernel);

  std::string labels;
  for (std::size_t i = 0; i < instance.assignment.labels().size(); ++i) {
    if (i) labels += ' ';
    labels += std::to_string(instance.assignment.labels()[i]);
  }
  doc.set("assignment", "labels", labels);

  for (std::size_t i = 0; i < instance.points.size(); ++i) {
    std::string row;
    for (int j = 0; j < instance.points[i].dim(); ++j) {
      if (j) row += ' ';
      row += format_double(instance.points[i][j]);
    }
    doc.set("points", std::to_string(i + 1), row);
  }
  return doc;
}

void write_labels(std::ostream& out, const std::vector<int>& labels) {
  for (int l : labels) out << l << '\n';
}

std::vector<int> read_labels(std::istream& in) {
  std::vector<int> labels;
  int l = 0;
  while (in >> l) labels.push_back(l);
  if (!in.eof()) throw InvalidArgument("labels: non-integer entry");
  return labels;
}

SgbmInstance load_instance(const std::string& edge_path, const std::string& meta_path) {
  std::ifstream ein(edge_path);
  if (!ein) throw InvalidArgument("cannot open '" + edge_path + "'");
  EdgeListFile edges = read_edge_list(ein);
  const KeyValueDoc meta = KeyValueDoc::load(meta_path);

  std::vector<int> labels;
  {
    std::istringstream ls(meta.get_or("assignment", "labels", ""));
    int l = 0;
    while (ls >> l) labels.push_back(l);
  }
  std::vector<TorusPoint> points;
  for (int i = 1; i <= edges.n; ++i) {
    auto row = meta.get("points", std::to_string(i));
    if (!row) throw InvalidArgument(meta_path + ": missing point " + std::to_string(i));
    std::istringstream ps(*row);
    std::vector<double> c;
    double v = 0.0;
    while (ps >> v) c.push_back(v);
    if (static_cast<int>(c.size()) != edges.d) {
      throw InvalidArgument(meta_path + ": point " + std::to_string(i) + " has wrong dimension");
    }
    points.emplace_back(std::move(c));
  }
  SgbmInstance inst{read_kernel(meta, "kernel"),
                    CommunityAssignment::from_labels(std::move(labels), edges.k),
                    std::move(points),
                    std::move(edges.adjacency),
                    edges.d,
                    edges.seed};
  if (inst.assignment.n() != edges.n) throw InvalidArgument(meta_path + ": label count != n");
  return inst;
}

}  // namespace sgbm
