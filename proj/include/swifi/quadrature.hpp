#pragma once

// Adaptive 1-D quadrature (Gauss-Kronrod 7/15 with a global error heap)
// and Gauss-Legendre node tables. All the radial, angular and distance
// integrals in the library go through these routines.

#include <cmath>
#include <cstddef>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace swifi {

/// Thrown when an integral cannot be resolved to the requested tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved, double requested)
      : std::runtime_error(what + " (achieved " + std::to_string(achieved) +
                           ", requested " + std::to_string(requested) + ")"),
        achieved_(achieved),
        requested_(requested) {}

  double achieved() const { return achieved_; }
  double requested() const { return requested_; }

 private:
  double achieved_;
  double requested_;
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK qk15 abscissae).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelEstimate {
  double value;
  double error;
};

template <class F>
PanelEstimate gk15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double halflen = 0.5 * (b - a);

  const double fc = f(center);
  double gauss = kWg[3] * fc;
  double kronrod = kWgk[7] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = halflen * kXgk[i];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[i] * fsum;
    if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
  }
  gauss *= halflen;
  kronrod *= halflen;

  double err = std::fabs(kronrod - gauss) * 200.0;
  err *= std::sqrt(err);
  return {kronrod, std::fabs(err)};
}

}  // namespace detail

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  std::size_t max_panels = 4000;
  std::size_t initial_splits = 1;  // uniform pre-subdivision of [a, b]
};

/// Globally adaptive integral of f over [a, b]. Throws NumericalError when
/// the panel budget is exhausted before the tolerance is met.
template <class F>
double integrate_adaptive(const F& f, double a, double b,
                          const QuadratureOptions& opt = {}) {
  if (a == b) return 0.0;

  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };

  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;

  const std::size_t splits = std::max<std::size_t>(1, opt.initial_splits);
  for (std::size_t i = 0; i < splits; ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / splits;
    const double hi = a + (b - a) * static_cast<double>(i + 1) / splits;
    const auto est = detail::gk15(f, lo, hi);
    heap.push({lo, hi, est.value, est.error});
    total += est.value;
    total_err += est.error;
  }

  std::size_t panels = splits;
  while (total_err > opt.abs_tol && total_err > opt.rel_tol * std::fabs(total)) {
    if (panels >= opt.max_panels || heap.empty()) {
      throw NumericalError("integrate_adaptive: panel budget exhausted",
                           total_err, std::max(opt.abs_tol, opt.rel_tol * std::fabs(total)));
    }
    const Panel worst = heap.top();
    heap.pop();
    total -= worst.value;
    total_err -= worst.error;

    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gk15(f, worst.a, mid);
    const auto right = detail::gk15(f, mid, worst.b);
    heap.push({worst.a, mid, left.value, left.error});
    heap.push({mid, worst.b, right.value, right.error});
    total += left.value + right.value;
    total_err += left.error + right.error;
    ++panels;
  }
  return total;
}

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, computed by Newton iteration on the
/// Legendre recurrence and cached per n.
inline const GaussLegendreRule& gauss_legendre(std::size_t n) {
  static thread_local std::map<std::size_t, GaussLegendreRule> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Tricomi initial guess for the i-th root.
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  auto [it, inserted] = cache.emplace(n, std::move(rule));
  return it->second;
}

/// Fixed-order Gauss-Legendre integral of f over [a, b].
template <class F>
double integrate_gl(const F& f, double a, double b, std::size_t n) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

}  // namespace swifi
