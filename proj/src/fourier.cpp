#include "sgbm/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "sgbm/parallel_kernels.hpp"

namespace sgbm {

namespace {

constexpr double kImagTolerance = 1e-9;

bool is_zero(std::span<const int> z) {
  return std::all_of(z.begin(), z.end(), [](int v) { return v == 0; });
}

std::string lattice_text(std::span<const int> z) {
  std::string s = "(";
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(z[j]);
  }
  return s + ")";
}

// Sup of prod_j e(z_j) over lattice points with |z|_inf > z_max.
double envelope_tail_sup(const AxisEnvelope& e, int d, int z_max) {
  return std::pow(e.at_zero, d - 1) * e(z_max + 1);
}

// Sum over |z|_inf > z_max of prod_j e(z_j)^m.
double envelope_tail_sum(const AxisEnvelope& e, int d, int z_max, int m) {
  double box = 0.0;
  for (int z = -z_max; z <= z_max; ++z) box += std::pow(e(z), m);
  double beyond = 0.0;
  if (e.decay > 0.0) {
    if (m < 2) return std::numeric_limits<double>::infinity();
    // sum_{z > Z} z^{-m} <= int_Z^inf x^{-m} dx for Z >= 1.
    const double one_side = z_max >= 1 ? std::pow(static_cast<double>(z_max), 1 - m) / (m - 1)
                                       : 1.0 + 1.0 / (m - 1);
    beyond = 2.0 * std::pow(e.decay, m) * one_side;
  }
  return std::pow(box + beyond, d) - std::pow(box, d);
}

}  // namespace

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double fourier_sbm(double p, std::span<const int> z) {
  // sinc(pi m) vanishes for every nonzero integer m.
  return is_zero(z) ? p : 0.0;
}

double fourier_gbm(double r, std::span<const int> z) {
  if (!(r > 0.0 && r <= 0.5)) throw InvalidArgument("fourier_gbm: radius must lie in (0, 1/2]");
  double v = 1.0;
  for (int zj : z) {
    if (zj == 0) {
      v *= 2.0 * r;
    } else if (r == 0.5) {
      v *= 0.0;  // full-torus indicator is constant
    } else {
      v *= 2.0 * r * sinc(2.0 * std::numbers::pi * r * zj);
    }
  }
  return v;
}

NumericCoefficient fourier_numeric(const KernelFn& phi, std::span<const int> z, int d,
                                   int grid_points_per_axis) {
  if (grid_points_per_axis < 64) {
    throw InvalidArgument("fourier_numeric: need at least 64 grid points per axis");
  }
  if (static_cast<int>(z.size()) != d) throw InvalidArgument("fourier_numeric: |z| != d");
  const auto s = kernels::fourier_quadrature(phi, z, grid_points_per_axis);
  return {s.re, s.im, std::abs(s.im) > kImagTolerance};
}

std::vector<LatticeVector> lattice_box(int d, int z_max) {
  if (d < 1 || z_max < 0) throw InvalidArgument("lattice_box: need d >= 1, z_max >= 0");
  std::vector<LatticeVector> out;
  LatticeVector z(static_cast<std::size_t>(d), -z_max);
  while (true) {
    out.push_back(z);
    int j = d - 1;
    while (j >= 0 && z[static_cast<std::size_t>(j)] == z_max) {
      z[static_cast<std::size_t>(j)] = -z_max;
      --j;
    }
    if (j < 0) break;
    ++z[static_cast<std::size_t>(j)];
  }
  return out;
}

const FourierEntry& FourierTable::at(std::span<const int> z) const {
  if (static_cast<int>(z.size()) != d) throw InvalidArgument("FourierTable::at: |z| != d");
  std::size_t idx = 0;
  for (int zj : z) {
    if (std::abs(zj) > z_max) throw InvalidArgument("FourierTable::at: z outside the table");
    idx = idx * static_cast<std::size_t>(2 * z_max + 1) + static_cast<std::size_t>(zj + z_max);
  }
  return entries[idx];
}

int default_z_max(int d) { return d == 1 ? 64 : (d == 2 ? 16 : 6); }

FourierTable build_fourier_table(const ConnectivityKernel& kernel, int d,
                                 const FourierOptions& options) {
  if (d < 1) throw InvalidArgument("build_fourier_table: d must be >= 1");
  FourierTable t;
  t.d = d;
  t.z_max = options.z_max > 0 ? options.z_max : default_z_max(d);
  const auto box = lattice_box(d, t.z_max);
  t.entries.reserve(box.size());

  if (auto* s = kernel.as_sbm()) {
    for (const auto& z : box) t.entries.push_back({z, fourier_sbm(s->p_in, z), fourier_sbm(s->p_out, z)});
    t.envelope_in = AxisEnvelope{std::pow(s->p_in, 1.0 / d), 0.0};
    t.envelope_out = AxisEnvelope{std::pow(s->p_out, 1.0 / d), 0.0};
  } else if (auto* g = kernel.as_gbm()) {
    for (const auto& z : box) t.entries.push_back({z, fourier_gbm(g->r_in, z), fourier_gbm(g->r_out, z)});
    // |2r sinc(2 pi r m)| = |sin(2 pi r m)| / (pi |m|) <= 1 / (pi |m|).
    t.envelope_in = AxisEnvelope{2.0 * g->r_in, 1.0 / std::numbers::pi};
    t.envelope_out = AxisEnvelope{2.0 * g->r_out, 1.0 / std::numbers::pi};
  } else {
    const auto* c = kernel.as_custom();
    if (c->fourier_in) {
      for (const auto& z : box) t.entries.push_back({z, c->fourier_in(z), c->fourier_out(z)});
    } else {
      t.warnings.push_back("kernel '" + c->name + "' has no analytic Fourier provider; " +
                           "coefficients computed by quadrature on a " +
                           std::to_string(options.grid) + "-point grid per axis");
      const auto in = kernels::fourier_box_quadrature(c->eval_in, d, t.z_max, options.grid);
      const auto out = kernels::fourier_box_quadrature(c->eval_out, d, t.z_max, options.grid);
      for (std::size_t i = 0; i < box.size(); ++i) {
        if (std::abs(in[i].im) > kImagTolerance || std::abs(out[i].im) > kImagTolerance) {
          t.warnings.push_back("imaginary residue above 1e-9 at z=" + lattice_text(box[i]));
        }
        t.entries.push_back({box[i], in[i].re, out[i].re});
      }
    }
    t.envelope_in = c->envelope_in;
    t.envelope_out = c->envelope_out;
    t.tail_in = c->tail_bound_in;
    t.tail_out = c->tail_bound_out;
  }
  if (t.envelope_in && !t.tail_in) t.tail_in = envelope_tail_sup(*t.envelope_in, d, t.z_max);
  if (t.envelope_out && !t.tail_out) t.tail_out = envelope_tail_sup(*t.envelope_out, d, t.z_max);
  return t;
}

void write_fourier_table(std::ostream& out, const FourierTable& table) {
  out << '#';
  for (int j = 1; j <= table.d; ++j) out << 'z' << j << '\t';
  out << "F_in_hat\tF_out_hat\n";
  for (const auto& e : table.entries) {
    for (int zj : e.z) out << zj << '\t';
    out << format_double(e.in) << '\t' << format_double(e.out) << '\n';
  }
}

LimitingMeasure build_limiting_measure(const FourierTable& table, int k, std::optional<double> xi) {
  if (k < 2) throw InvalidArgument("build_limiting_measure: k must be >= 2");
  LimitingMeasure m;
  m.k = k;
  m.d = table.d;
  m.z_max = table.z_max;
  m.envelope_in = table.envelope_in;
  m.envelope_out = table.envelope_out;
  m.atoms.reserve(2 * table.entries.size());
  for (const auto& e : table.entries) {
    const double bulk = (e.in + (k - 1) * e.out) / k;
    const double community = (e.in - e.out) / k;
    if (!xi || std::abs(bulk) > *xi) m.atoms.push_back({bulk, 1, e.z, AtomFamily::bulk});
    if (!xi || std::abs(community) > *xi) {
      m.atoms.push_back({community, k - 1, e.z, AtomFamily::community});
    }
  }
  return m;
}

void write_atoms(std::ostream& out, const LimitingMeasure& measure) {
  out << "#location\tmultiplicity\tfamily";
  for (int j = 1; j <= measure.d; ++j) out << "\tz" << j;
  out << '\n';
  for (const auto& a : measure.atoms) {
    out << format_double(a.location) << '\t' << a.multiplicity << '\t'
        << (a.family == AtomFamily::bulk ? "bulk" : "community");
    for (int zj : a.origin) out << '\t' << zj;
    out << '\n';
  }
}

const char* to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::certified: return "certified";
    case ConditionStatus::violated: return "violated";
    case ConditionStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

KeyValueDoc ConditionReport::to_doc() const {
  KeyValueDoc doc;
  doc.set("conditions", "status", std::string(to_string(status)));
  doc.set("conditions", "cond_ii_ok", cond_ii_ok);
  doc.set("conditions", "cond_iii_ok", cond_iii_ok);
  doc.set("conditions", "min_margin_ii", min_margin_ii);
  doc.set("conditions", "argmin_ii", lattice_text(argmin_ii));
  doc.set("conditions", "min_margin_iii", min_margin_iii);
  doc.set("conditions", "argmin_iii", lattice_text(argmin_iii));
  doc.set("conditions", "tail_certified", tail_certified);
  doc.set("conditions", "tail_bound", tail_bound);
  doc.set("conditions", "tolerance", tolerance);
  return doc;
}

namespace {

void check_mu(double mu_in, double mu_out) {
  if (!(mu_in > mu_out && mu_out > 0.0)) {
    throw InvalidArgument("condition checks need mu_in > mu_out > 0");
  }
}

}  // namespace

ConditionReport check_conditions(const FourierTable& table, int k, double mu_in, double mu_out,
                                 double tolerance) {
  if (k < 2) throw InvalidArgument("check_conditions: k must be >= 2");
  check_mu(mu_in, mu_out);
  const double gap = mu_in - mu_out;
  ConditionReport r;
  r.tolerance = tolerance;
  r.min_margin_ii = std::numeric_limits<double>::infinity();
  r.min_margin_iii = std::numeric_limits<double>::infinity();
  for (const auto& e : table.entries) {
    const double ii = std::abs(e.in + (k - 1) * e.out - gap);
    if (ii < r.min_margin_ii) {
      r.min_margin_ii = ii;
      r.argmin_ii = e.z;
    }
    if (is_zero(e.z)) continue;
    const double iii = std::abs(e.in - e.out - gap);
    if (iii < r.min_margin_iii) {
      r.min_margin_iii = iii;
      r.argmin_iii = e.z;
    }
  }
  r.cond_ii_ok = r.min_margin_ii > tolerance;
  r.cond_iii_ok = r.min_margin_iii > tolerance;
  if (table.has_tail_bound()) {
    r.tail_bound = *table.tail_in + (k - 1) * *table.tail_out;
    // Tail atoms then stay within gap/(2k) of zero, so both families keep a
    // margin of at least gap/2 there.
    r.tail_certified = r.tail_bound <= gap / 2.0;
  } else {
    r.tail_bound = std::numeric_limits<double>::infinity();
  }
  if (!r.cond_ii_ok || !r.cond_iii_ok) {
    r.status = ConditionStatus::violated;
  } else {
    r.status = r.tail_certified ? ConditionStatus::certified : ConditionStatus::inconclusive;
  }
  return r;
}

double SeparationTerms::epsilon() const { return std::min({eps0, eps1, eps2}); }

SeparationTerms separation_terms(const FourierTable& table, int k, double mu_in, double mu_out,
                                 double tolerance) {
  const auto report = check_conditions(table, k, mu_in, mu_out, tolerance);
  return {(mu_in - mu_out) / (2.0 * k), report.min_margin_ii / k, report.min_margin_iii / k};
}

double separation_epsilon(const FourierTable& table, int k, double mu_in, double mu_out,
                          double tolerance) {
  const auto report = check_conditions(table, k, mu_in, mu_out, tolerance);
  if (report.status != ConditionStatus::certified) {
    throw InvalidState(std::string("separation_epsilon: eigenvalue-separation conditions are ") +
                       to_string(report.status));
  }
  return separation_terms(table, k, mu_in, mu_out, tolerance).epsilon();
}

double lambda_star(int n, int k, double mu_in, double mu_out) {
  if (k < 1) throw InvalidArgument("lambda_star: k must be >= 1");
  if (mu_in < mu_out) throw InvalidArgument("lambda_star: need mu_in >= mu_out");
  return n * (mu_in - mu_out) / k;
}

MomentValue measure_moment(const LimitingMeasure& measure, int m) {
  if (m < 1) throw InvalidArgument("measure_moment: m must be >= 1");
  MomentValue r;
  for (const auto& a : measure.atoms) r.value += a.multiplicity * std::pow(a.location, m);
  if (!measure.envelope_in || !measure.envelope_out) {
    r.truncation_bound = std::numeric_limits<double>::infinity();
    return r;
  }
  // Per lattice vector: |bulk| <= M and |community| <= 2M/k with
  // M = max(|F_in^|, |F_out^|), and M^m <= e_in^m + e_out^m.
  const int k = measure.k;
  const double per_z = 1.0 + (k - 1) * std::pow(2.0 / k, m);
  r.truncation_bound =
      per_z * (envelope_tail_sum(*measure.envelope_in, measure.d, measure.z_max, m) +
               envelope_tail_sum(*measure.envelope_out, measure.d, measure.z_max, m));
  return r;
}

}  // namespace sgbm
