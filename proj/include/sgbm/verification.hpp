#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sgbm/common.hpp"
#include "sgbm/keyvalue.hpp"

namespace sgbm {

struct VerificationCheck {
  std::string name;
  bool passed = false;
  double computed = 0.0;
  double expected = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  bool all_passed() const;
  int failures() const;
  KeyValueDoc to_doc() const;
};

using CircularCountFn = std::function<long long(int k, int m, int p)>;

struct VerificationOptions {
  std::uint64_t seed = 20240601;
  int random_pairs = 20;
  int sampled_rotations = 1000;
  // Grid per axis for the quadrature cross-check; 4000 puts every tested
  // radius on a cell boundary.
  int fourier_grid = 4000;
  int fourier_z_max = 8;
  bool fourier_two_dimensional = true;
  // Replaces the closed-form circular count (used to check that a wrong
  // formula is caught).
  CircularCountFn circular_formula;
};

VerificationReport run_verification(const VerificationOptions& options = {});

// Individual suites, each appending to `report`.
void verify_circular_count(VerificationReport& report, const CircularCountFn& formula);
void verify_b_sigma(VerificationReport& report);
void verify_kron(VerificationReport& report, std::uint64_t seed);
void verify_canonical_basis(VerificationReport& report);
void verify_procrustes(VerificationReport& report, std::uint64_t seed, int pairs, int rotations);
void verify_fourier(VerificationReport& report, int grid, int z_max, bool two_dimensional);
void verify_conditions(VerificationReport& report);
void verify_bounds(VerificationReport& report);

// Random matrices for the suites and tests.
Matrix random_gaussian(int rows, int cols, std::uint64_t seed);
// Orthonormal columns from the QR factor of a Gaussian matrix (sign fixed so
// that R has a positive diagonal).
Matrix random_orthonormal(int rows, int cols, std::uint64_t seed);

}  // namespace sgbm
