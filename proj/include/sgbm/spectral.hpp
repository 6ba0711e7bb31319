#pragma once

#include <iosfwd>
#include <vector>

#include "sgbm/common.hpp"

namespace sgbm {

// Eigenvalues sorted descending; eigenvector columns aligned with them.
struct SpectrumResult {
  Vector eigenvalues;
  Matrix eigenvectors;

  Eigen::Index size() const { return eigenvalues.size(); }
};

// Dense symmetric eigendecomposition (LAPACK dsyevd).
SpectrumResult full_spectrum(const Matrix& A);

struct SpectralSelection {
  double target = 0.0;
  std::vector<int> indices;  // positions in the input spectrum, eigenvalue-descending
  Vector eigenvalues;        // selected eigenvalues, descending
  Matrix V;                  // n x count, columns aligned with `eigenvalues`
  double gap = 0.0;          // min |lambda - target| over unselected eigenvalues
};

// The `count` eigenvalues nearest `target`. Ties prefer the larger eigenvalue,
// then the lower index. The spectrum need not be sorted.
SpectralSelection select_near(const SpectrumResult& spectrum, double target, int count);

// The `count` largest eigenvalues after skipping the first `skip`.
SpectralSelection select_top(const SpectrumResult& spectrum, int count, int skip = 0);

struct IntervalCount {
  std::size_t count = 0;
  bool contains_zero = false;  // the closed interval touches 0
};

// Number of i with lambda_i / n in the open interval (a, b).
IntervalCount empirical_measure_count(const Vector& eigenvalues, int n, double a, double b);

// tr(A^m) / n^m by repeated multiplication; m <= 8.
double trace_moment(const Matrix& A, int m);

// sum_i (lambda_i / n)^m.
double spectral_moment(const Vector& eigenvalues, int n, int m);

// "#index\teigenvalue\tscaled" rows, 1-based index.
void write_spectrum(std::ostream& out, const Vector& eigenvalues, int n);

}  // namespace sgbm
