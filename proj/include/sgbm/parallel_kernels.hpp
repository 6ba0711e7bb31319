#pragma once

// Data-parallel inner loops. Every OpenMP kernel has a serial `_reference`
// twin with identical semantics; tests compare the two and bench/ times them.

#include <span>
#include <vector>

#include "sgbm/common.hpp"
#include "sgbm/model.hpp"

namespace sgbm::kernels {

// P(i, j) = eval_kernel(kernel, X_i - X_j, same community), zero diagonal.
Matrix edge_probabilities(const ConnectivityKernel& kernel, std::span<const TorusPoint> points,
                          std::span<const int> labels);
Matrix edge_probabilities_reference(const ConnectivityKernel& kernel,
                                    std::span<const TorusPoint> points,
                                    std::span<const int> labels);

// votes(i, l) = sum_j A(i, j) * [labels_j == l + 1].
Eigen::MatrixXi neighbor_votes(const Matrix& A, std::span<const int> labels, int k);
Eigen::MatrixXi neighbor_votes_reference(const Matrix& A, std::span<const int> labels, int k);

// Nearest center per row (ties to the lowest center index). Returns the sum of
// squared distances to the chosen centers.
double assign_nearest(const Matrix& points, const Matrix& centers, std::span<int> assignment,
                      std::span<double> sq_dist);
double assign_nearest_reference(const Matrix& points, const Matrix& centers,
                                std::span<int> assignment, std::span<double> sq_dist);

struct ComplexSum {
  double re = 0.0;
  double im = 0.0;
};

// Midpoint-rule sum of fn(x) e^{-2 pi i <z, x>} over [-1/2, 1/2)^d, divided by grid^d.
ComplexSum fourier_quadrature(const KernelFn& fn, std::span<const int> z, int grid);
ComplexSum fourier_quadrature_reference(const KernelFn& fn, std::span<const int> z, int grid);

// Midpoint-rule coefficients for every z with |z|_inf <= z_max, in
// lattice_box order (first axis slowest). One kernel evaluation per grid cell;
// the transform is applied axis by axis.
std::vector<ComplexSum> fourier_box_quadrature(const KernelFn& fn, int d, int z_max, int grid);
std::vector<ComplexSum> fourier_box_quadrature_reference(const KernelFn& fn, int d, int z_max,
                                                         int grid);

}  // namespace sgbm::kernels
