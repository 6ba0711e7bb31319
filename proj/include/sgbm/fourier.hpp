#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgbm/keyvalue.hpp"
#include "sgbm/model.hpp"

namespace sgbm {

using LatticeVector = std::vector<int>;

// sin(x)/x with sinc(0) = 1.
double sinc(double x);

// Coefficient of the constant kernel p: p * prod_j sinc(pi z_j).
double fourier_sbm(double p, std::span<const int> z);

// Coefficient of the l-infinity ball indicator of radius r on T^d:
// prod_j 2r sinc(2 pi r z_j). At z = 0 this is the ball volume (2r)^d.
double fourier_gbm(double r, std::span<const int> z);

struct NumericCoefficient {
  double value = 0.0;
  double imag = 0.0;
  bool imag_warning = false;  // |imag| above 1e-9
};

// Midpoint rule of phi(x) e^{-2 pi i <z,x>} over [-1/2,1/2)^d, real part.
NumericCoefficient fourier_numeric(const KernelFn& phi, std::span<const int> z, int d,
                                   int grid_points_per_axis);

// All z in Z^d with |z|_inf <= z_max, lexicographic with the first axis slowest.
std::vector<LatticeVector> lattice_box(int d, int z_max);

struct FourierEntry {
  LatticeVector z;
  double in = 0.0;
  double out = 0.0;
};

struct FourierTable {
  int d = 1;
  int z_max = 0;
  std::vector<FourierEntry> entries;
  // Sup of |coefficient| over |z|_inf > z_max, when it is known.
  std::optional<double> tail_in;
  std::optional<double> tail_out;
  // Summable envelopes, used for moment truncation bounds.
  std::optional<AxisEnvelope> envelope_in;
  std::optional<AxisEnvelope> envelope_out;
  std::vector<std::string> warnings;

  bool has_tail_bound() const { return tail_in.has_value() && tail_out.has_value(); }
  const FourierEntry& at(std::span<const int> z) const;
};

struct FourierOptions {
  int z_max = 0;          // 0 selects the per-dimension default
  int grid = 256;         // quadrature grid per axis for numeric coefficients
};

int default_z_max(int d);

FourierTable build_fourier_table(const ConnectivityKernel& kernel, int d,
                                 const FourierOptions& options = {});

// Rows "z_1 ... z_d  F_in_hat  F_out_hat", tab-separated, with a '#' header.
void write_fourier_table(std::ostream& out, const FourierTable& table);

enum class AtomFamily { bulk, community };

struct Atom {
  double location = 0.0;
  int multiplicity = 1;
  LatticeVector origin;
  AtomFamily family = AtomFamily::bulk;
};

// Atomic limiting measure of the rescaled adjacency spectrum, truncated to the
// lattice box of the table it was built from. The atom at 0 carrying the
// remaining mass is implicit.
struct LimitingMeasure {
  int k = 2;
  int d = 1;
  int z_max = 0;
  std::vector<Atom> atoms;
  std::optional<AxisEnvelope> envelope_in;
  std::optional<AxisEnvelope> envelope_out;
};

// Two atoms per lattice vector. With `xi`, only atoms with |location| > xi are kept.
LimitingMeasure build_limiting_measure(const FourierTable& table, int k,
                                       std::optional<double> xi = std::nullopt);

void write_atoms(std::ostream& out, const LimitingMeasure& measure);

enum class ConditionStatus { certified, violated, inconclusive };
const char* to_string(ConditionStatus s);

struct ConditionReport {
  bool cond_ii_ok = false;   // bulk family never hits mu_in - mu_out
  bool cond_iii_ok = false;  // community family never hits it for z != 0
  double min_margin_ii = 0.0;
  double min_margin_iii = 0.0;
  LatticeVector argmin_ii;
  LatticeVector argmin_iii;
  bool tail_certified = false;
  double tail_bound = 0.0;  // bound on |F_in^| + (k-1)|F_out^| beyond z_max
  double tolerance = 0.0;
  ConditionStatus status = ConditionStatus::inconclusive;

  KeyValueDoc to_doc() const;
};

ConditionReport check_conditions(const FourierTable& table, int k, double mu_in, double mu_out,
                                 double tolerance = 1e-9);

struct SeparationTerms {
  double eps0 = 0.0;  // tail region
  double eps1 = 0.0;  // bulk family over the box
  double eps2 = 0.0;  // community family over the box, z != 0
  double epsilon() const;
};

SeparationTerms separation_terms(const FourierTable& table, int k, double mu_in, double mu_out,
                                 double tolerance = 1e-9);
// min(eps0, eps1, eps2). Throws InvalidState unless the conditions are certified.
double separation_epsilon(const FourierTable& table, int k, double mu_in, double mu_out,
                          double tolerance = 1e-9);

double lambda_star(int n, int k, double mu_in, double mu_out);

struct MomentValue {
  double value = 0.0;
  double truncation_bound = 0.0;  // infinity when no summable envelope exists
};

MomentValue measure_moment(const LimitingMeasure& measure, int m);

}  // namespace sgbm
