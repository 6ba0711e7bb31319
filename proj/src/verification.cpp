#include "sgbm/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "sgbm/fourier.hpp"
#include "sgbm/model.hpp"
#include "sgbm/parallel_kernels.hpp"
#include "sgbm/random.hpp"
#include "sgbm/theory.hpp"

namespace sgbm {

namespace {

void add(VerificationReport& report, std::string name, bool passed, double computed,
         double expected, std::string detail = {}) {
  report.checks.push_back({std::move(name), passed, computed, expected, std::move(detail)});
}

std::string shape(int a, int b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

}  // namespace

bool VerificationReport::all_passed() const { return failures() == 0; }

int VerificationReport::failures() const {
  return static_cast<int>(
      std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

KeyValueDoc VerificationReport::to_doc() const {
  KeyValueDoc doc;
  doc.set("summary", "checks", static_cast<int>(checks.size()));
  doc.set("summary", "failures", failures());
  doc.set("summary", "status", all_passed() ? "pass" : "fail");
  for (const auto& c : checks) {
    const std::string section = "check." + c.name;
    doc.set(section, "status", c.passed ? "pass" : "fail");
    doc.set(section, "computed", c.computed);
    doc.set(section, "expected", c.expected);
    if (!c.detail.empty()) doc.set(section, "detail", c.detail);
  }
  return doc;
}

Matrix random_gaussian(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) M(i, j) = rng.normal();
  return M;
}

Matrix random_orthonormal(int rows, int cols, std::uint64_t seed) {
  const Matrix G = random_gaussian(rows, cols, seed);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

void verify_circular_count(VerificationReport& report, const CircularCountFn& formula) {
  const auto f = formula ? formula : CircularCountFn(circular_count_formula);
  int cases = 0;
  int mismatches = 0;
  std::string first_mismatch;
  bool partition_ok = true;
  for (int k = 2; k <= 5; ++k) {
    for (int m = 1; m <= 8; ++m) {
      long long total = 0;
      for (int p = 0; p <= m; ++p) {
        const long long a = f(k, m, p);
        const long long b = circular_count_bruteforce(k, m, p);
        total += b;
        ++cases;
        if (a != b) {
          if (mismatches == 0) {
            first_mismatch = "first mismatch at (k,m,p)=(" + std::to_string(k) + "," +
                             std::to_string(m) + "," + std::to_string(p) + "): formula " +
                             std::to_string(a) + " vs enumeration " + std::to_string(b);
          }
          ++mismatches;
        }
      }
      partition_ok = partition_ok && total == static_cast<long long>(std::llround(std::pow(k, m)));
    }
  }
  add(report, "circular_count.sweep", mismatches == 0, mismatches, 0,
      "k=2..5 m=1..8 p=0..m, " + std::to_string(cases) + " cases" +
          (first_mismatch.empty() ? "" : "; " + first_mismatch));
  const long long worked = f(3, 3, 2);
  add(report, "circular_count.worked_value", worked == 18, static_cast<double>(worked), 18,
      "(k,m,p)=(3,3,2)");
  add(report, "circular_count.partition", partition_ok, partition_ok ? 1 : 0, 1,
      "enumerated counts sum to k^m");
}

void verify_b_sigma(VerificationReport& report) {
  const double mu_in = 0.9;
  const double mu_out = 0.3;
  for (auto [n, k] : {std::pair{12, 3}, std::pair{20, 4}, std::pair{30, 5}, std::pair{100, 4}}) {
    const Matrix B = build_B_sigma(CommunityAssignment::canonical(n, k), mu_in, mu_out);
    Eigen::SelfAdjointEigenSolver<Matrix> es(B, Eigen::EigenvaluesOnly);
    Vector numeric = es.eigenvalues().reverse();
    Vector closed(n);
    int pos = 0;
    for (const auto& e : b_sigma_spectrum(n, k, mu_in, mu_out))
      for (int r = 0; r < e.multiplicity; ++r) closed(pos++) = e.value;
    const double err = (numeric - closed).cwiseAbs().maxCoeff();
    add(report, "b_sigma.spectrum" + shape(n, k), pos == n && err <= 1e-8 * n, err, 0,
        "max |numeric - closed form|, tolerance 1e-8 n");
  }
  const auto ex = b_sigma_spectrum(1000, 4, 0.86, 0.22);
  const bool found = std::any_of(ex.begin(), ex.end(), [](const auto& e) {
    return std::abs(e.value - 160.0) < 1e-9 && e.multiplicity == 3;
  });
  add(report, "b_sigma.lambda_star_example", found, lambda_star(1000, 4, 0.86, 0.22), 160,
      "n=1000 k=4 mu_in=0.86 mu_out=0.22, multiplicity 3");
}

void verify_kron(VerificationReport& report, std::uint64_t seed) {
  const Matrix J2 = Matrix::Ones(2, 2);
  const Matrix J3 = Matrix::Ones(3, 3);
  const Vector v6 = Vector::Ones(6);
  const double eig_err = (kron(J2, J3) * v6 - 6.0 * v6).cwiseAbs().maxCoeff();
  add(report, "kron.eigenpair", eig_err <= 1e-12, eig_err, 0, "J2 (x) J3 on the ones vector");

  const Matrix A = random_gaussian(3, 3, derive_seed(seed, 1));
  const Matrix B = random_gaussian(3, 3, derive_seed(seed, 2));
  const Matrix v = random_gaussian(3, 1, derive_seed(seed, 3));
  const Matrix u = random_gaussian(3, 1, derive_seed(seed, 4));
  const double mix_err = (kron(A, B) * kron(v, u) - kron(A * v, B * u)).cwiseAbs().maxCoeff();
  add(report, "kron.mixed_product", mix_err <= 1e-12, mix_err, 0, "(A (x) B)(v (x) u) = Av (x) Bu");
}

void verify_canonical_basis(VerificationReport& report) {
  const double mu_in = 0.9;
  const double mu_out = 0.3;
  for (auto [n, k] : {std::pair{12, 3}, std::pair{100, 4}, std::pair{30, 5}, std::pair{6, 6}}) {
    const auto assignment = CommunityAssignment::canonical(n, k);
    const Matrix U = canonical_U(n, k).U;
    const double ortho = (U.transpose() * U - Matrix::Identity(k - 1, k - 1)).cwiseAbs().maxCoeff();
    add(report, "canonical_U.orthonormal" + shape(n, k), ortho <= 1e-12, ortho, 0);

    const double lam = lambda_star(n, k, mu_in, mu_out);
    const Matrix B = build_B_sigma(assignment, mu_in, mu_out);
    const double eig = (B * U - lam * U).norm() / (lam * U.norm());
    add(report, "canonical_U.eigenspace" + shape(n, k), eig <= 1e-8, eig, 0,
        "relative ||B U - lambda* U||");

    double block_spread = 0.0;
    for (int i = 0; i < n; ++i) {
      const int first = (assignment[i] - 1) * (n / k);
      block_spread = std::max(block_spread, (U.row(i) - U.row(first)).cwiseAbs().maxCoeff());
    }
    add(report, "canonical_U.block_constant" + shape(n, k), block_spread <= 1e-12, block_spread, 0);

    const double delta = min_community_row_distance(U, assignment);
    const double exact = std::sqrt(2.0 * k / n);
    add(report, "canonical_U.row_distance" + shape(n, k), std::abs(delta - exact) <= 1e-10, delta,
        exact, "exact value sqrt(2k/n)");
    add(report, "canonical_U.row_distance_lower" + shape(n, k), delta >= std::sqrt(double(k) / n),
        delta, std::sqrt(double(k) / n), "lower bound sqrt(k/n)");
    if (n == k) {
      const Matrix P = U * U.transpose();
      const Matrix expected = Matrix::Identity(k, k) - Matrix::Ones(k, k) / k;
      const double err = (P - expected).cwiseAbs().maxCoeff();
      add(report, "canonical_U.projector" + shape(n, k), err <= 1e-12, err, 0, "U U^T = I - J/k");
    }
  }
}

void verify_procrustes(VerificationReport& report, std::uint64_t seed, int pairs, int rotations) {
  const int n = 50;
  const int m = 3;
  // Exact recovery of a rotated basis.
  {
    const Matrix U = random_orthonormal(n, m, derive_seed(seed, 10));
    const Matrix R = random_orthonormal(m, m, derive_seed(seed, 11));
    const auto a = procrustes_align(U * R, U);
    const double q_err = (a.Q - R.transpose()).cwiseAbs().maxCoeff();
    add(report, "procrustes.rotated_basis", a.residual <= 1e-10 && q_err <= 1e-10, a.residual, 0,
        "V = U R, Q = R^T");
  }
  double worst_opt = -1e300;
  double worst_46 = 0.0;
  double worst_formula = 0.0;
  double worst_chain = -1e300;
  double worst_orth = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const Matrix U = random_orthonormal(n, m, derive_seed(seed, 100 + 2 * t));
    const Matrix V = random_orthonormal(n, m, derive_seed(seed, 101 + 2 * t));
    const auto a = procrustes_align(V, U);
    worst_orth = std::max(worst_orth,
                          (a.Q.transpose() * a.Q - Matrix::Identity(m, m)).cwiseAbs().maxCoeff());
    double sampled = 1e300;
    for (int s = 0; s < rotations; ++s) {
      const Matrix Q = random_orthonormal(m, m, derive_seed(derive_seed(seed, 1000 + t), s));
      sampled = std::min(sampled, (V * Q - U).norm());
    }
    worst_opt = std::max(worst_opt, a.residual - sampled);
    worst_46 = std::max(worst_46, std::abs(a.projector_distance / std::sqrt(2.0) -
                                           subspace_sin_theta(U, V)));
    worst_formula = std::max(worst_formula, std::abs(a.residual - a.residual_formula));
    worst_chain = std::max(worst_chain, a.residual - a.projector_distance);
  }
  const std::string pairs_text = std::to_string(pairs) + " random pairs, n=50, m=3";
  add(report, "procrustes.orthogonal", worst_orth <= 1e-10, worst_orth, 0, pairs_text);
  add(report, "procrustes.optimal_vs_sampled", worst_opt <= 1e-12, worst_opt, 0,
      pairs_text + ", max(residual - best of " + std::to_string(rotations) + " sampled Q)");
  add(report, "projector_identity", worst_46 <= 1e-10, worst_46, 0,
      pairs_text + ", |proj/sqrt2 - sqrt(m - ||U^T V||^2)|");
  add(report, "procrustes.residual_formula", worst_formula <= 1e-10, worst_formula, 0,
      pairs_text + ", |residual - sqrt(2m - 2 tr Sigma)|");
  add(report, "procrustes.projector_chain", worst_chain <= 1e-12, worst_chain, 0,
      pairs_text + ", max(residual - projector distance)");
}

void verify_fourier(VerificationReport& report, int grid, int z_max, bool two_dimensional) {
  const std::vector<ConnectivityKernel> settings = {
      ConnectivityKernel::sbm(0.8, 0.2),   ConnectivityKernel::sbm(0.6, 0.05),
      ConnectivityKernel::gbm(0.43, 0.11), ConnectivityKernel::gbm(0.25, 0.1),
      ConnectivityKernel::gbm(0.375, 0.125),
  };
  for (int d = 1; d <= (two_dimensional ? 2 : 1); ++d) {
    const auto box = lattice_box(d, z_max);
    for (const auto& kernel : settings) {
      double worst = 0.0;
      for (bool same : {true, false}) {
        const KernelFn fn = [&kernel, same](std::span<const double> x) {
          return eval_kernel(kernel, x, same);
        };
        const auto numeric = kernels::fourier_box_quadrature(fn, d, z_max, grid);
        for (std::size_t i = 0; i < box.size(); ++i) {
          double analytic = 0.0;
          if (auto* s = kernel.as_sbm()) {
            analytic = fourier_sbm(same ? s->p_in : s->p_out, box[i]);
          } else {
            const auto* g = kernel.as_gbm();
            analytic = fourier_gbm(same ? g->r_in : g->r_out, box[i]);
          }
          worst = std::max({worst, std::abs(numeric[i].re - analytic), std::abs(numeric[i].im)});
        }
      }
      add(report, "fourier." + kernel.describe() + ".d" + std::to_string(d), worst <= 1e-6, worst, 0,
          "|z|_inf <= " + std::to_string(z_max) + ", grid " + std::to_string(grid) +
              " per axis, max deviation");
    }
  }
}

void verify_conditions(VerificationReport& report) {
  const double p_in = 0.8;
  const double p_out = 0.2;
  const auto kernel = ConnectivityKernel::sbm(p_in, p_out);
  const auto table = build_fourier_table(kernel, 1);
  for (int k = 2; k <= 8; ++k) {
    const auto c = check_conditions(table, k, p_in, p_out);
    const double eps = c.status == ConditionStatus::certified
                           ? separation_epsilon(table, k, p_in, p_out)
                           : 0.0;
    const double expected = std::min((p_in - p_out) / (2.0 * k), p_out);
    add(report, "conditions.sbm.k" + std::to_string(k),
        c.status == ConditionStatus::certified && std::abs(eps - expected) <= 1e-12, eps, expected,
        std::string("status ") + to_string(c.status) + ", epsilon vs min(delta/2k, p_out)");
  }
  const auto ex = build_fourier_table(ConnectivityKernel::gbm(0.43, 0.11), 1);
  const auto c = check_conditions(ex, 4, 0.86, 0.22);
  add(report, "conditions.gbm_example", c.status == ConditionStatus::certified, c.min_margin_ii,
      0, std::string("status ") + to_string(c.status) + ", computed = min bulk margin");
}

void verify_bounds(VerificationReport& report) {
  const double dk = davis_kahan_bound(1000, 4, 0.075);
  const double dk_oracle = std::sqrt(12.0 * 1024.0 * std::log(1000.0)) / (0.075 * std::sqrt(1000.0));
  add(report, "davis_kahan.arithmetic", std::abs(dk - dk_oracle) <= 1e-9,
      dk, dk_oracle, "n=1000 k=4 epsilon=0.075");
  const double half = davis_kahan_bound(1000, 4, 0.15);
  add(report, "davis_kahan.inverse_epsilon", std::abs(2.0 * half - dk) <= 1e-9, half, dk / 2.0);

  Matrix V = Matrix::Zero(4, 1);
  Matrix Vbar = Matrix::Zero(4, 1);
  V(0, 0) = 0.1;  // ||V - Vbar||^2 = 0.01
  const double km = kmeans_error_bound(V, Vbar, std::sqrt(0.004), 0.05);
  add(report, "kmeans_bound.arithmetic", std::abs(km - 20.5) <= 1e-9, km, 20.5,
      "||V-Vbar||^2=0.01, delta^2=0.004, eps=0.05");
}

VerificationReport run_verification(const VerificationOptions& options) {
  VerificationReport report;
  verify_circular_count(report, options.circular_formula);
  verify_b_sigma(report);
  verify_kron(report, options.seed);
  verify_canonical_basis(report);
  verify_procrustes(report, options.seed, options.random_pairs, options.sampled_rotations);
  verify_fourier(report, options.fourier_grid, options.fourier_z_max,
                 options.fourier_two_dimensional);
  verify_conditions(report);
  verify_bounds(report);
  return report;
}

}  // namespace sgbm
