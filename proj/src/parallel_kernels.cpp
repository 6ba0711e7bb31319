#include "sgbm/parallel_kernels.hpp"

#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <numbers>

#include <omp.h>

namespace sgbm::kernels {

namespace {

void check_sizes(std::span<const TorusPoint> points, std::span<const int> labels) {
  if (points.size() != labels.size()) {
    throw InvalidArgument("edge_probabilities: points and labels differ in length");
  }
  for (const auto& p : points) {
    if (p.dim() != points[0].dim()) throw InvalidArgument("edge_probabilities: mixed dimensions");
  }
}

// Midpoint of cell `idx` along one axis of [-1/2, 1/2).
inline double cell_mid(long idx, int grid) { return (static_cast<double>(idx) + 0.5) / grid - 0.5; }

long grid_cells(int d, int grid) {
  long total = 1;
  for (int j = 0; j < d; ++j) total *= grid;
  return total;
}

void cell_coords(long flat, int grid, std::span<double> x) {
  for (auto& c : x) {
    c = cell_mid(flat % grid, grid);
    flat /= grid;
  }
}

}  // namespace

Matrix edge_probabilities(const ConnectivityKernel& kernel, std::span<const TorusPoint> points,
                          std::span<const int> labels) {
  check_sizes(points, labels);
  const long n = static_cast<long>(points.size());
  Matrix P = Matrix::Zero(n, n);
  if (n == 0) return P;
  const int d = points[0].dim();
  std::exception_ptr failure;
#pragma omp parallel
  {
    std::vector<double> disp(static_cast<std::size_t>(d));
#pragma omp for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
      try {
        for (long j = i + 1; j < n; ++j) {
          torus_diff_into(points[i], points[j], disp);
          const double p = eval_kernel(kernel, disp, labels[i] == labels[j]);
          P(i, j) = p;
          P(j, i) = p;
        }
      } catch (...) {
#pragma omp critical(sgbm_edge_probabilities)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return P;
}

Matrix edge_probabilities_reference(const ConnectivityKernel& kernel,
                                    std::span<const TorusPoint> points,
                                    std::span<const int> labels) {
  check_sizes(points, labels);
  const long n = static_cast<long>(points.size());
  Matrix P = Matrix::Zero(n, n);
  if (n == 0) return P;
  std::vector<double> disp(static_cast<std::size_t>(points[0].dim()));
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      torus_diff_into(points[i], points[j], disp);
      const double p = eval_kernel(kernel, disp, labels[i] == labels[j]);
      P(i, j) = p;
      P(j, i) = p;
    }
  }
  return P;
}

Eigen::MatrixXi neighbor_votes(const Matrix& A, std::span<const int> labels, int k) {
  const long n = A.rows();
  Eigen::MatrixXi votes = Eigen::MatrixXi::Zero(n, k);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (A(j, i) != 0.0) votes(i, labels[j] - 1) += 1;
    }
  }
  return votes;
}

Eigen::MatrixXi neighbor_votes_reference(const Matrix& A, std::span<const int> labels, int k) {
  const long n = A.rows();
  Eigen::MatrixXi votes = Eigen::MatrixXi::Zero(n, k);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (A(i, j) != 0.0) votes(i, labels[j] - 1) += 1;
    }
  }
  return votes;
}

namespace {

inline void nearest_row(const Matrix& points, const Matrix& centers, long i, int& best,
                        double& best_d) {
  best = 0;
  best_d = std::numeric_limits<double>::infinity();
  for (long c = 0; c < centers.rows(); ++c) {
    const double dist = (points.row(i) - centers.row(c)).squaredNorm();
    if (dist < best_d) {
      best_d = dist;
      best = static_cast<int>(c);
    }
  }
}

}  // namespace

double assign_nearest(const Matrix& points, const Matrix& centers, std::span<int> assignment,
                      std::span<double> sq_dist) {
  const long n = points.rows();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    nearest_row(points, centers, i, assignment[i], sq_dist[i]);
  }
  // Summed serially so the objective does not depend on the thread count.
  double total = 0.0;
  for (long i = 0; i < n; ++i) total += sq_dist[i];
  return total;
}

double assign_nearest_reference(const Matrix& points, const Matrix& centers,
                                std::span<int> assignment, std::span<double> sq_dist) {
  double total = 0.0;
  for (long i = 0; i < points.rows(); ++i) {
    nearest_row(points, centers, i, assignment[i], sq_dist[i]);
    total += sq_dist[i];
  }
  return total;
}

ComplexSum fourier_quadrature(const KernelFn& fn, std::span<const int> z, int grid) {
  const int d = static_cast<int>(z.size());
  const long cells = grid_cells(d, grid);
  double re = 0.0;
  double im = 0.0;
#pragma omp parallel reduction(+ : re, im)
  {
    std::vector<double> x(static_cast<std::size_t>(d));
#pragma omp for schedule(static)
    for (long c = 0; c < cells; ++c) {
      cell_coords(c, grid, x);
      double phase = 0.0;
      for (int j = 0; j < d; ++j) phase += z[j] * x[j];
      phase *= -2.0 * std::numbers::pi;
      const double f = fn(x);
      re += f * std::cos(phase);
      im += f * std::sin(phase);
    }
  }
  const double w = 1.0 / static_cast<double>(cells);
  return {re * w, im * w};
}

ComplexSum fourier_quadrature_reference(const KernelFn& fn, std::span<const int> z, int grid) {
  const int d = static_cast<int>(z.size());
  const long cells = grid_cells(d, grid);
  double re = 0.0;
  double im = 0.0;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (long c = 0; c < cells; ++c) {
    cell_coords(c, grid, x);
    double phase = 0.0;
    for (int j = 0; j < d; ++j) phase += z[j] * x[j];
    phase *= -2.0 * std::numbers::pi;
    const double f = fn(x);
    re += f * std::cos(phase);
    im += f * std::sin(phase);
  }
  const double w = 1.0 / static_cast<double>(cells);
  return {re * w, im * w};
}

namespace {

using Twiddles = std::vector<std::complex<double>>;

// tw[(z + z_max) * grid + x] = exp(-2 pi i z x_mid)
Twiddles twiddle_table(int z_max, int grid) {
  Twiddles tw(static_cast<std::size_t>((2 * z_max + 1) * grid));
  for (int z = -z_max; z <= z_max; ++z) {
    for (int x = 0; x < grid; ++x) {
      const double phase = -2.0 * std::numbers::pi * z * cell_mid(x, grid);
      tw[static_cast<std::size_t>((z + z_max) * grid + x)] = {std::cos(phase), std::sin(phase)};
    }
  }
  return tw;
}

std::vector<ComplexSum> to_sums(const std::vector<std::complex<double>>& acc, double w) {
  std::vector<ComplexSum> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = {acc[i].real() * w, acc[i].imag() * w};
  return out;
}

// Contribution of one slab x_1 = const to the (z_1, z_2) coefficients.
void accumulate_row_2d(const KernelFn& fn, int z_max, int grid, const Twiddles& tw, int x1,
                       std::vector<double>& row, std::vector<std::complex<double>>& partial,
                       std::vector<std::complex<double>>& acc) {
  const int width = 2 * z_max + 1;
  std::vector<double> x(2);
  x[0] = cell_mid(x1, grid);
  for (int x2 = 0; x2 < grid; ++x2) {
    x[1] = cell_mid(x2, grid);
    row[static_cast<std::size_t>(x2)] = fn(x);
  }
  for (int z2 = 0; z2 < width; ++z2) {
    std::complex<double> s = 0.0;
    const auto* t = &tw[static_cast<std::size_t>(z2 * grid)];
    for (int x2 = 0; x2 < grid; ++x2) s += row[static_cast<std::size_t>(x2)] * t[x2];
    partial[static_cast<std::size_t>(z2)] = s;
  }
  for (int z1 = 0; z1 < width; ++z1) {
    const auto t1 = tw[static_cast<std::size_t>(z1 * grid + x1)];
    for (int z2 = 0; z2 < width; ++z2) {
      acc[static_cast<std::size_t>(z1 * width + z2)] += t1 * partial[static_cast<std::size_t>(z2)];
    }
  }
}

std::vector<ComplexSum> box_by_coefficient(const KernelFn& fn, int d, int z_max, int grid,
                                           bool parallel) {
  // General d: one quadrature per lattice vector.
  std::vector<ComplexSum> out;
  std::vector<int> z(static_cast<std::size_t>(d), -z_max);
  while (true) {
    out.push_back(parallel ? fourier_quadrature(fn, z, grid) : fourier_quadrature_reference(fn, z, grid));
    int j = d - 1;
    while (j >= 0 && z[static_cast<std::size_t>(j)] == z_max) z[static_cast<std::size_t>(j--)] = -z_max;
    if (j < 0) break;
    ++z[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace

std::vector<ComplexSum> fourier_box_quadrature(const KernelFn& fn, int d, int z_max, int grid) {
  if (d > 2) return box_by_coefficient(fn, d, z_max, grid, true);
  const int width = 2 * z_max + 1;
  const Twiddles tw = twiddle_table(z_max, grid);
  if (d == 1) {
    std::vector<double> f(static_cast<std::size_t>(grid));
#pragma omp parallel for schedule(static)
    for (int x = 0; x < grid; ++x) {
      const double xv = cell_mid(x, grid);
      f[static_cast<std::size_t>(x)] = fn(std::span<const double>(&xv, 1));
    }
    std::vector<std::complex<double>> acc(static_cast<std::size_t>(width));
#pragma omp parallel for schedule(static)
    for (int z = 0; z < width; ++z) {
      std::complex<double> s = 0.0;
      for (int x = 0; x < grid; ++x) s += f[static_cast<std::size_t>(x)] * tw[static_cast<std::size_t>(z * grid + x)];
      acc[static_cast<std::size_t>(z)] = s;
    }
    return to_sums(acc, 1.0 / grid);
  }
  const int threads = omp_get_max_threads();
  std::vector<std::vector<std::complex<double>>> per_thread(
      static_cast<std::size_t>(threads),
      std::vector<std::complex<double>>(static_cast<std::size_t>(width * width)));
#pragma omp parallel
  {
    auto& acc = per_thread[static_cast<std::size_t>(omp_get_thread_num())];
    std::vector<double> row(static_cast<std::size_t>(grid));
    std::vector<std::complex<double>> partial(static_cast<std::size_t>(width));
#pragma omp for schedule(static)
    for (int x1 = 0; x1 < grid; ++x1) accumulate_row_2d(fn, z_max, grid, tw, x1, row, partial, acc);
  }
  // Fixed reduction order over thread slots.
  std::vector<std::complex<double>> total(static_cast<std::size_t>(width * width));
  for (const auto& acc : per_thread)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += acc[i];
  return to_sums(total, 1.0 / (static_cast<double>(grid) * grid));
}

std::vector<ComplexSum> fourier_box_quadrature_reference(const KernelFn& fn, int d, int z_max,
                                                         int grid) {
  if (d > 2) return box_by_coefficient(fn, d, z_max, grid, false);
  const int width = 2 * z_max + 1;
  const Twiddles tw = twiddle_table(z_max, grid);
  if (d == 1) {
    std::vector<std::complex<double>> acc(static_cast<std::size_t>(width));
    for (int x = 0; x < grid; ++x) {
      const double xv = cell_mid(x, grid);
      const double f = fn(std::span<const double>(&xv, 1));
      for (int z = 0; z < width; ++z) acc[static_cast<std::size_t>(z)] += f * tw[static_cast<std::size_t>(z * grid + x)];
    }
    return to_sums(acc, 1.0 / grid);
  }
  std::vector<std::complex<double>> acc(static_cast<std::size_t>(width * width));
  std::vector<double> row(static_cast<std::size_t>(grid));
  std::vector<std::complex<double>> partial(static_cast<std::size_t>(width));
  for (int x1 = 0; x1 < grid; ++x1) accumulate_row_2d(fn, z_max, grid, tw, x1, row, partial, acc);
  return to_sums(acc, 1.0 / (static_cast<double>(grid) * grid));
}

}  // namespace sgbm::kernels
