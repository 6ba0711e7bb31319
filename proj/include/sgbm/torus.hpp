#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sgbm {

// Point on the flat unit torus R^d / Z^d. Coordinates are kept reduced to [0,1).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::vector<double> coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int j) const { return coords_[static_cast<std::size_t>(j)]; }
  std::span<const double> coords() const { return coords_; }

  // Shift by t (mod 1).
  TorusPoint translated(std::span<const double> t) const;

  bool operator==(const TorusPoint&) const = default;

 private:
  std::vector<double> coords_;
};

// Representative of x mod 1 in [0, 1).
double wrap_unit(double x);
// Representative of c mod 1 in [-1/2, 1/2).
double wrap_half(double c);

// Displacement x - y with every component in [-1/2, 1/2).
std::vector<double> torus_diff(const TorusPoint& x, const TorusPoint& y);
void torus_diff_into(const TorusPoint& x, const TorusPoint& y, std::span<double> out);

// l-infinity norm of a displacement already reduced to [-1/2, 1/2)^d.
double linf_norm(std::span<const double> disp);

double torus_linf_dist(const TorusPoint& x, const TorusPoint& y);

std::vector<TorusPoint> sample_uniform(int d, std::size_t count, std::uint64_t seed);

}  // namespace sgbm
