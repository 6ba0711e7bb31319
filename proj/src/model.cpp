#include "sgbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sgbm/parallel_kernels.hpp"
#include "sgbm/random.hpp"

namespace sgbm {

double AxisEnvelope::operator()(int z) const {
  if (z == 0) return at_zero;
  return std::min(at_zero, decay / std::abs(static_cast<double>(z)));
}

ConnectivityKernel ConnectivityKernel::sbm(double p_in, double p_out) {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(p_in) || !in_unit(p_out)) {
    throw InvalidArgument("sbm kernel: probabilities must lie in [0, 1]");
  }
  ConnectivityKernel k;
  k.impl_ = SbmKernel{p_in, p_out};
  return k;
}

ConnectivityKernel ConnectivityKernel::gbm(double r_in, double r_out) {
  if (!(r_out > 0.0 && r_out < r_in && r_in <= 0.5)) {
    throw InvalidArgument("gbm kernel: radii must satisfy 0 < r_out < r_in <= 1/2");
  }
  ConnectivityKernel k;
  k.impl_ = GbmKernel{r_in, r_out};
  return k;
}

ConnectivityKernel ConnectivityKernel::custom(CustomKernel c) {
  if (!c.eval_in || !c.eval_out) throw InvalidArgument("custom kernel: both evaluators required");
  if (static_cast<bool>(c.fourier_in) != static_cast<bool>(c.fourier_out)) {
    throw InvalidArgument("custom kernel: provide both Fourier providers or neither");
  }
  ConnectivityKernel k;
  k.impl_ = std::move(c);
  return k;
}

KernelKind ConnectivityKernel::kind() const {
  switch (impl_.index()) {
    case 0: return KernelKind::sbm;
    case 1: return KernelKind::gbm;
    default: return KernelKind::custom;
  }
}

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::sbm: return "sbm";
    case KernelKind::gbm: return "gbm";
    case KernelKind::custom: return "custom";
  }
  return "?";
}

std::string ConnectivityKernel::describe() const {
  std::ostringstream os;
  if (auto* s = as_sbm()) {
    os << "sbm(p_in=" << s->p_in << ", p_out=" << s->p_out << ")";
  } else if (auto* g = as_gbm()) {
    os << "gbm(r_in=" << g->r_in << ", r_out=" << g->r_out << ")";
  } else {
    os << as_custom()->name;
  }
  return os.str();
}

ConnectivityKernel gaussian_kernel(double amp_in, double width_in, double amp_out,
                                   double width_out) {
  if (!(amp_in >= 0.0 && amp_in <= 1.0 && amp_out >= 0.0 && amp_out <= 1.0)) {
    throw InvalidArgument("gaussian kernel: amplitudes must lie in [0, 1]");
  }
  if (!(width_in > 0.0 && width_out > 0.0)) {
    throw InvalidArgument("gaussian kernel: widths must be positive");
  }
  auto make = [](double amp, double width) {
    return [amp, width](std::span<const double> x) {
      double r2 = 0.0;
      for (double c : x) r2 += c * c;
      return amp * std::exp(-r2 / (2.0 * width * width));
    };
  };
  CustomKernel c;
  c.name = "gaussian";
  c.parameters = {{"amp_in", amp_in}, {"width_in", width_in}, {"amp_out", amp_out},
                  {"width_out", width_out}};
  c.eval_in = make(amp_in, width_in);
  c.eval_out = make(amp_out, width_out);
  return ConnectivityKernel::custom(std::move(c));
}

double eval_kernel(const ConnectivityKernel& kernel, std::span<const double> disp, bool same) {
  if (auto* s = kernel.as_sbm()) return same ? s->p_in : s->p_out;
  if (auto* g = kernel.as_gbm()) {
    const double r = same ? g->r_in : g->r_out;
    return linf_norm(disp) <= r ? 1.0 : 0.0;
  }
  const auto* c = kernel.as_custom();
  const double p = same ? c->eval_in(disp) : c->eval_out(disp);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("custom kernel '" + c->name + "' returned a value outside [0, 1]");
  }
  return p;
}

CommunityAssignment CommunityAssignment::canonical(int n, int k) {
  if (k < 1 || n < k || n % k != 0) {
    throw InvalidArgument("community assignment: n=" + std::to_string(n) +
                          " is not divisible into k=" + std::to_string(k) + " equal blocks");
  }
  CommunityAssignment a;
  a.k_ = k;
  a.labels_.resize(static_cast<std::size_t>(n));
  const int block = n / k;
  for (int i = 0; i < n; ++i) a.labels_[static_cast<std::size_t>(i)] = i / block + 1;
  return a;
}

CommunityAssignment CommunityAssignment::from_labels(std::vector<int> labels, int k) {
  const int n = static_cast<int>(labels.size());
  if (k < 1 || n % k != 0 || n == 0) {
    throw InvalidArgument("community assignment: n not divisible by k");
  }
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels) {
    if (l < 1 || l > k) throw InvalidArgument("community assignment: label out of range 1..k");
    ++counts[static_cast<std::size_t>(l - 1)];
  }
  for (int c : counts) {
    if (c != n / k) throw InvalidArgument("community assignment: communities are not balanced");
  }
  CommunityAssignment a;
  a.k_ = k;
  a.labels_ = std::move(labels);
  return a;
}

CommunityAssignment CommunityAssignment::shuffled(int n, int k, std::uint64_t seed) {
  auto a = canonical(n, k);
  Rng rng(seed);
  auto& l = a.labels_;
  for (std::size_t i = l.size(); i > 1; --i) {
    std::swap(l[i - 1], l[rng.below(i)]);
  }
  return a;
}

std::size_t SgbmInstance::edge_count() const {
  std::size_t e = 0;
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i)
    for (Eigen::Index j = i + 1; j < adjacency.cols(); ++j)
      if (adjacency(i, j) != 0.0) ++e;
  return e;
}

SgbmInstance sample_instance(const ConnectivityKernel& kernel, int n, int k, int d,
                             std::uint64_t seed, const SampleOptions& options) {
  if (k < 2) throw InvalidArgument("sample_instance: k must be >= 2");
  if (d < 1) throw InvalidArgument("sample_instance: d must be >= 1");
  if (n % k != 0) {
    throw InvalidArgument("sample_instance: n=" + std::to_string(n) +
                          " not divisible by k=" + std::to_string(k));
  }
  SgbmInstance inst{kernel,
                    options.assignment ? *options.assignment : CommunityAssignment::canonical(n, k),
                    {},
                    {},
                    d,
                    seed};
  if (inst.assignment.n() != n || inst.assignment.k() != k) {
    throw InvalidArgument("sample_instance: fixed assignment does not match (n, k)");
  }
  if (options.points) {
    inst.points = *options.points;
    if (static_cast<int>(inst.points.size()) != n) {
      throw InvalidArgument("sample_instance: fixed points do not match n");
    }
    for (const auto& p : inst.points) {
      if (p.dim() != d) throw InvalidArgument("sample_instance: fixed points do not match d");
    }
  } else {
    inst.points = sample_uniform(d, static_cast<std::size_t>(n), derive_seed(seed, 0));
  }

  const Matrix P = kernels::edge_probabilities(kernel, inst.points, inst.assignment.labels());
  inst.adjacency = Matrix::Zero(n, n);
  Rng rng(derive_seed(seed, 1));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < P(i, j)) {
        inst.adjacency(i, j) = 1.0;
        inst.adjacency(j, i) = 1.0;
      }
    }
  }
  return inst;
}

double integrate_on_torus(const KernelFn& fn, int d, int grid) {
  const std::vector<int> zero(static_cast<std::size_t>(d), 0);
  return kernels::fourier_quadrature(fn, zero, grid).re;
}

EdgeDensities edge_densities(const ConnectivityKernel& kernel, int d,
                             const QuadratureOptions& options) {
  if (d < 1) throw InvalidArgument("edge_densities: d must be >= 1");
  if (auto* s = kernel.as_sbm()) return {s->p_in, s->p_out, 0.0};
  if (auto* g = kernel.as_gbm()) {
    return {std::pow(2.0 * g->r_in, d), std::pow(2.0 * g->r_out, d), 0.0};
  }
  const auto* c = kernel.as_custom();
  if (c->fourier_in) {
    const std::vector<int> zero(static_cast<std::size_t>(d), 0);
    return {c->fourier_in(zero), c->fourier_out(zero), 0.0};
  }
  // Refine the midpoint grid until successive estimates agree.
  int grid = options.initial_grid;
  double in = integrate_on_torus(c->eval_in, d, grid);
  double out = integrate_on_torus(c->eval_out, d, grid);
  double residual = std::numeric_limits<double>::infinity();
  while (grid * 2 <= options.max_grid && std::pow(2.0 * grid, d) <= 1 << 24) {
    grid *= 2;
    const double in2 = integrate_on_torus(c->eval_in, d, grid);
    const double out2 = integrate_on_torus(c->eval_out, d, grid);
    residual = std::max(std::abs(in2 - in), std::abs(out2 - out));
    in = in2;
    out = out2;
    if (residual <= options.tolerance) return {in, out, residual};
  }
  throw NumericFailure("edge_densities: quadrature did not converge for '" + c->name + "'",
                       residual);
}

}  // namespace sgbm
