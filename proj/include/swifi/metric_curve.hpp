#pragma once

// Sampled scalar function on a strictly increasing grid, with linear
// interpolation and clamped extrapolation. Used for q(d) caches and for
// CLI curve output.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace swifi {

struct MetricCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::string meta;

  MetricCurve() = default;

  MetricCurve(std::vector<double> g, std::vector<double> v, std::string m = {})
      : grid(std::move(g)), values(std::move(v)), meta(std::move(m)) {
    if (grid.size() != values.size() || grid.empty()) {
      throw std::invalid_argument("MetricCurve: grid/value size mismatch");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(values[i])) throw std::invalid_argument("MetricCurve: non-finite value");
      if (i > 0 && !(grid[i] > grid[i - 1])) {
        throw std::invalid_argument("MetricCurve: grid must be strictly increasing");
      }
    }
  }

  double interpolate(double x) const {
    if (x <= grid.front()) return values.front();
    if (x >= grid.back()) return values.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
    return values[lo] + t * (values[hi] - values[lo]);
  }
};

}  // namespace swifi
