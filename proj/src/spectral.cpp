#include "sgbm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <lapacke.h>

#include "sgbm/keyvalue.hpp"

namespace sgbm {

SpectrumResult full_spectrum(const Matrix& A) {
  const auto n = A.rows();
  if (A.cols() != n) throw InvalidArgument("full_spectrum: matrix is not square");
  if (n == 0) return {};
  const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("full_spectrum: matrix is not symmetric");
  }
  Matrix Z = A;
  Vector w(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                         Z.data(), static_cast<lapack_int>(n), w.data());
  if (info != 0) {
    throw NumericFailure("full_spectrum: dsyevd failed with info=" + std::to_string(info),
                         static_cast<double>(info));
  }
  // LAPACK returns ascending order.
  SpectrumResult r;
  r.eigenvalues = w.reverse();
  r.eigenvectors = Z.rowwise().reverse();
  return r;
}

namespace {

SpectralSelection gather(const SpectrumResult& s, std::vector<int> chosen, double target) {
  std::sort(chosen.begin(), chosen.end(), [&](int a, int b) {
    if (s.eigenvalues[a] != s.eigenvalues[b]) return s.eigenvalues[a] > s.eigenvalues[b];
    return a < b;
  });
  SpectralSelection sel;
  sel.target = target;
  sel.eigenvalues.resize(static_cast<Eigen::Index>(chosen.size()));
  sel.V.resize(s.eigenvectors.rows(), static_cast<Eigen::Index>(chosen.size()));
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    sel.eigenvalues[static_cast<Eigen::Index>(c)] = s.eigenvalues[chosen[c]];
    sel.V.col(static_cast<Eigen::Index>(c)) = s.eigenvectors.col(chosen[c]);
  }
  std::vector<bool> taken(static_cast<std::size_t>(s.size()), false);
  for (int i : chosen) taken[static_cast<std::size_t>(i)] = true;
  sel.gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!taken[static_cast<std::size_t>(i)]) {
      sel.gap = std::min(sel.gap, std::abs(s.eigenvalues[i] - target));
    }
  }
  sel.indices = std::move(chosen);
  return sel;
}

}  // namespace

SpectralSelection select_near(const SpectrumResult& spectrum, double target, int count) {
  const auto n = spectrum.size();
  if (count < 0 || count > n) throw InvalidArgument("select_near: count must lie in [0, n]");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = spectrum.eigenvalues;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = std::abs(ev[a] - target);
    const double db = std::abs(ev[b] - target);
    if (da != db) return da < db;
    if (ev[a] != ev[b]) return ev[a] > ev[b];
    return a < b;
  });
  order.resize(static_cast<std::size_t>(count));
  return gather(spectrum, std::move(order), target);
}

SpectralSelection select_top(const SpectrumResult& spectrum, int count, int skip) {
  const auto n = spectrum.size();
  if (skip < 0 || count < 0 || skip + count > n) {
    throw InvalidArgument("select_top: skip + count exceeds n");
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = spectrum.eigenvalues;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ev[a] > ev[b]; });
  std::vector<int> chosen(order.begin() + skip, order.begin() + skip + count);
  const double target = count > 0 ? ev[chosen.front()] : 0.0;
  return gather(spectrum, std::move(chosen), target);
}

IntervalCount empirical_measure_count(const Vector& eigenvalues, int n, double a, double b) {
  if (n < 1) throw InvalidArgument("empirical_measure_count: n must be >= 1");
  IntervalCount r;
  r.contains_zero = a <= 0.0 && 0.0 <= b;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double x = eigenvalues[i] / n;
    if (x > a && x < b) ++r.count;
  }
  return r;
}

double trace_moment(const Matrix& A, int m) {
  if (m < 1 || m > 8) throw InvalidArgument("trace_moment: m must lie in [1, 8]");
  if (A.rows() != A.cols()) throw InvalidArgument("trace_moment: matrix is not square");
  const double n = static_cast<double>(A.rows());
  if (m == 1) return A.trace() / n;
  // tr(P A) = sum_ij P_ij A_ji, so the final product is never formed.
  Matrix P = A;
  for (int p = 2; p < m; ++p) P = (P * A).eval();
  const double tr = P.cwiseProduct(A.transpose()).sum();
  return tr / std::pow(n, m);
}

double spectral_moment(const Vector& eigenvalues, int n, int m) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) s += std::pow(eigenvalues[i] / n, m);
  return s;
}

void write_spectrum(std::ostream& out, const Vector& eigenvalues, int n) {
  out << "#index\teigenvalue\tscaled\n";
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    out << (i + 1) << '\t' << format_double(eigenvalues[i]) << '\t'
        << format_double(eigenvalues[i] / n) << '\n';
  }
}

}  // namespace sgbm
