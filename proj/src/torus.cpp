#include "sgbm/torus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgbm/common.hpp"
#include "sgbm/random.hpp"

namespace sgbm {

double wrap_unit(double x) {
  double r = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  if (r >= 1.0) r = 0.0;
  return r;
}

double wrap_half(double c) {
  double r = c - std::floor(c + 0.5);
  if (r >= 0.5) r -= 1.0;
  if (r < -0.5) r += 1.0;
  return r;
}

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidArgument("torus point needs dimension >= 1");
  for (double& c : coords_) c = wrap_unit(c);
}

TorusPoint TorusPoint::translated(std::span<const double> t) const {
  if (t.size() != coords_.size()) throw InvalidArgument("translation dimension mismatch");
  std::vector<double> out(coords_.size());
  for (std::size_t j = 0; j < coords_.size(); ++j) out[j] = coords_[j] + t[j];
  return TorusPoint(std::move(out));
}

void torus_diff_into(const TorusPoint& x, const TorusPoint& y, std::span<double> out) {
  if (x.dim() != y.dim() || static_cast<int>(out.size()) != x.dim()) {
    throw InvalidArgument("torus_diff: dimension mismatch (" + std::to_string(x.dim()) +
                          " vs " + std::to_string(y.dim()) + ")");
  }
  for (int j = 0; j < x.dim(); ++j) out[static_cast<std::size_t>(j)] = wrap_half(x[j] - y[j]);
}

std::vector<double> torus_diff(const TorusPoint& x, const TorusPoint& y) {
  std::vector<double> out(static_cast<std::size_t>(x.dim()));
  torus_diff_into(x, y, out);
  return out;
}

double linf_norm(std::span<const double> disp) {
  double m = 0.0;
  for (double c : disp) m = std::max(m, std::abs(c));
  return m;
}

double torus_linf_dist(const TorusPoint& x, const TorusPoint& y) {
  if (x.dim() != y.dim()) throw InvalidArgument("torus_linf_dist: dimension mismatch");
  double m = 0.0;
  for (int j = 0; j < x.dim(); ++j) {
    const double a = std::abs(x[j] - y[j]);
    m = std::max(m, std::min(a, 1.0 - a));
  }
  return m;
}

std::vector<TorusPoint> sample_uniform(int d, std::size_t count, std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("sample_uniform: dimension must be >= 1");
  if (count < 1) throw InvalidArgument("sample_uniform: count must be >= 1");
  Rng rng(seed);
  std::vector<TorusPoint> pts;
  pts.reserve(count);
  std::vector<double> c(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& v : c) v = rng.uniform();
    pts.emplace_back(c);
  }
  return pts;
}

}  // namespace sgbm
