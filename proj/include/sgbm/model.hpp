#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sgbm/common.hpp"
#include "sgbm/torus.hpp"

namespace sgbm {

// Probability as a function of a displacement in [-1/2, 1/2)^d.
using KernelFn = std::function<double(std::span<const double>)>;
// Fourier coefficient at a lattice vector z.
using FourierFn = std::function<double(std::span<const int>)>;

// Per-axis decay envelope e(0) = at_zero, e(z) = min(at_zero, decay / |z|),
// with |F^(z)| <= prod_j e(z_j) for z outside the truncation box.
struct AxisEnvelope {
  double at_zero = 0.0;
  double decay = 0.0;

  double operator()(int z) const;
};

struct SbmKernel {
  double p_in = 0.0;
  double p_out = 0.0;
};

struct GbmKernel {
  double r_in = 0.0;
  double r_out = 0.0;
};

struct CustomKernel {
  std::string name = "custom";
  // Named parameters, written to metadata so the kernel can be rebuilt.
  std::vector<std::pair<std::string, double>> parameters;
  KernelFn eval_in;
  KernelFn eval_out;
  // Optional analytic coefficients; numeric quadrature is used otherwise.
  FourierFn fourier_in;
  FourierFn fourier_out;
  // Tail information. Without either, condition checks are inconclusive.
  std::optional<double> tail_bound_in;
  std::optional<double> tail_bound_out;
  std::optional<AxisEnvelope> envelope_in;
  std::optional<AxisEnvelope> envelope_out;
};

enum class KernelKind { sbm, gbm, custom };

class ConnectivityKernel {
 public:
  static ConnectivityKernel sbm(double p_in, double p_out);
  // Requires 0 < r_out < r_in <= 1/2.
  static ConnectivityKernel gbm(double r_in, double r_out);
  static ConnectivityKernel custom(CustomKernel k);

  KernelKind kind() const;
  const SbmKernel* as_sbm() const { return std::get_if<SbmKernel>(&impl_); }
  const GbmKernel* as_gbm() const { return std::get_if<GbmKernel>(&impl_); }
  const CustomKernel* as_custom() const { return std::get_if<CustomKernel>(&impl_); }

  std::string describe() const;

 private:
  std::variant<SbmKernel, GbmKernel, CustomKernel> impl_;
};

const char* to_string(KernelKind kind);

// Custom kernel amp * exp(-|x|^2 / (2 width^2)) per family, Euclidean norm of
// the displacement. No analytic Fourier provider and no tail information.
ConnectivityKernel gaussian_kernel(double amp_in, double width_in, double amp_out,
                                   double width_out);

// Connection probability for a displacement and a same-community flag.
double eval_kernel(const ConnectivityKernel& kernel, std::span<const double> disp, bool same);

// Balanced community labels, 1-based.
class CommunityAssignment {
 public:
  // 1..n/k in community 1, n/k+1..2n/k in community 2, and so on.
  static CommunityAssignment canonical(int n, int k);
  static CommunityAssignment from_labels(std::vector<int> labels, int k);
  // Canonical assignment with vertex positions shuffled.
  static CommunityAssignment shuffled(int n, int k, std::uint64_t seed);

  int n() const { return static_cast<int>(labels_.size()); }
  int k() const { return k_; }
  int operator[](int i) const { return labels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& labels() const { return labels_; }

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

struct SgbmInstance {
  ConnectivityKernel kernel;
  CommunityAssignment assignment;
  std::vector<TorusPoint> points;
  Matrix adjacency;
  int d = 1;
  std::uint64_t seed = 0;

  int n() const { return assignment.n(); }
  int k() const { return assignment.k(); }
  std::size_t edge_count() const;
};

struct SampleOptions {
  std::optional<CommunityAssignment> assignment;
  std::optional<std::vector<TorusPoint>> points;
};

// Points come from stream 0 of the seed, edge draws from stream 1. Edges are
// drawn in lexicographic (i, j), i < j order.
SgbmInstance sample_instance(const ConnectivityKernel& kernel, int n, int k, int d,
                             std::uint64_t seed, const SampleOptions& options = {});

struct EdgeDensities {
  double mu_in = 0.0;
  double mu_out = 0.0;
  double residual = 0.0;  // quadrature refinement residual, 0 for closed forms
};

struct QuadratureOptions {
  int initial_grid = 64;
  int max_grid = 4096;
  double tolerance = 1e-8;
};

// Midpoint rule of fn over [-1/2, 1/2)^d with `grid` cells per axis.
double integrate_on_torus(const KernelFn& fn, int d, int grid);

EdgeDensities edge_densities(const ConnectivityKernel& kernel, int d,
                             const QuadratureOptions& options = {});

}  // namespace sgbm
