#pragma once

// Downlink SINR distribution at the served client, expected rate, per-AP
// throughput and area spectral efficiency.
//
// The CCDF uses the Laplace-functional form with the client at the origin
// and the serving AP at (r, 0): interferers live at polar (v, theta) with
// v >= r, contribute fading-averaged factor s rho(v) / (1 + s rho(v)), and
// are thinned by q(b) where b is the AP-to-AP distance
//   b = sqrt(v^2 + r^2 - 2 v r cos theta).
// q is expensive, so each model instance carries a distance-indexed cache
// built once at construction; evaluation afterwards is pure and
// thread-safe.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "swifi/csma.hpp"
#include "swifi/deployment.hpp"
#include "swifi/metric_curve.hpp"
#include "swifi/propagation.hpp"
#include "swifi/quadrature.hpp"
#include "swifi/uplink.hpp"

namespace swifi {

/// Layer-cake rate integral: E[rate] = int_0^{t_max} P(rate > t) dt.
template <class F>
double rate_from_ccdf(const F& rate_ccdf, double t_max, std::size_t nodes = 128) {
  return integrate_gl(rate_ccdf, 0.0, t_max, nodes);
}

class SinrModel {
 public:
  SinrModel(ContentionModel contention, PathlossModel ap_client_pathloss,
            double noise_power_w, double p_ap_w, double fading_mu,
            std::size_t q_points = 200)
      : contention_(std::move(contention)),
        pathloss_(std::move(ap_client_pathloss)),
        noise_(noise_power_w),
        p_ap_(p_ap_w),
        mu_(fading_mu),
        q_table_(contention_, q_points) {
    if (!(noise_ >= 0.0) || !(p_ap_ > 0.0) || !(mu_ > 0.0)) {
      throw std::invalid_argument("SinrModel: invalid parameters");
    }
  }

  /// P(SINR > beta) for a client at distance r from its serving AP.
  double sinr_ccdf(double beta, double r) const {
    if (beta < 0.0) throw std::invalid_argument("sinr_ccdf: beta must be nonnegative");
    if (beta == 0.0) return 1.0;
    const InterferenceKernel kernel = make_kernel(r);
    return ccdf_with_kernel(beta, r, kernel);
  }

  /// CCDF sampled on a beta grid, sharing one interference kernel.
  MetricCurve sinr_ccdf_curve(const std::vector<double>& beta_grid, double r) const {
    const InterferenceKernel kernel = make_kernel(r);
    std::vector<double> values(beta_grid.size());
    for (std::size_t i = 0; i < beta_grid.size(); ++i) {
      values[i] = beta_grid[i] == 0.0 ? 1.0 : ccdf_with_kernel(beta_grid[i], r, kernel);
    }
    return MetricCurve(beta_grid, std::move(values), "sinr_ccdf");
  }

  /// E[log2(1 + SINR)] in bit/s/Hz, via the layer-cake integral of the
  /// rate CCDF truncated where the noise factor alone falls below 1e-6.
  double expected_rate(double r) const {
    const double s_unit = mu_ / (p_ap_ * pathloss_.gain(r));
    double t_max;
    if (noise_ > 0.0) {
      const double beta_max = std::log(1e6) / (s_unit * noise_);
      t_max = std::log2(1.0 + beta_max);
    } else {
      t_max = 64.0;  // noiseless: bounded by interference alone
    }
    const InterferenceKernel kernel = make_kernel(r);
    return rate_from_ccdf(
        [&](double t) {
          const double beta = std::exp2(t) - 1.0;
          return beta <= 0.0 ? 1.0 : ccdf_with_kernel(beta, r, kernel);
        },
        t_max);
  }

  const ContentionModel& contention() const { return contention_; }
  const PathlossModel& ap_client_pathloss() const { return pathloss_; }
  const QTable& q_table() const { return q_table_; }
  double noise_power() const { return noise_; }
  double p_ap() const { return p_ap_; }
  double mu() const { return mu_; }

 private:
  // Radial interference nodes for a fixed serving distance r. Each node
  // carries v, the quadrature weight times v times the angular average of
  // q(b(v, theta)), and the AP-client gain at v. The s-dependent factor is
  // applied per evaluation, so one kernel serves every beta and rate node.
  struct InterferenceKernel {
    std::vector<double> gain;
    std::vector<double> weight;  // gl_weight * v * int_0^{2pi} q db theta
  };

  InterferenceKernel make_kernel(double r) const {
    InterferenceKernel kernel;
    if (contention_.deployment().density_m2 <= 0.0) return kernel;

    const double lo = std::max(r, pathloss_.d_min());
    const double hi = std::max(1e6, 100.0 * lo);
    const std::size_t segments =
        static_cast<std::size_t>(std::ceil(2.0 * std::log2(hi / lo)));
    const auto& angular = gauss_legendre(48);
    const auto& radial = gauss_legendre(12);

    const double log_lo = std::log(lo);
    const double log_step = (std::log(hi) - log_lo) / static_cast<double>(segments);
    for (std::size_t seg = 0; seg < segments; ++seg) {
      const double a = std::exp(log_lo + seg * log_step);
      const double b = std::exp(log_lo + (seg + 1) * log_step);
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        const double v = mid + half * radial.nodes[i];
        // angular average of q over [0, pi], doubled by symmetry
        double q_sum = 0.0;
        for (std::size_t k = 0; k < angular.nodes.size(); ++k) {
          const double theta = 0.5 * M_PI * (1.0 + angular.nodes[k]);
          const double b2 = v * v + r * r - 2.0 * v * r * std::cos(theta);
          q_sum += angular.weights[k] * q_table_(std::sqrt(std::max(0.0, b2)));
        }
        const double q_avg = q_sum * 0.5 * M_PI * 2.0;  // int over [0, 2pi]
        kernel.gain.push_back(pathloss_.gain(v));
        kernel.weight.push_back(radial.weights[i] * half * v * q_avg);
      }
    }
    return kernel;
  }

  double ccdf_with_kernel(double beta, double r, const InterferenceKernel& kernel) const {
    const double s = mu_ * beta / (p_ap_ * pathloss_.gain(r));
    double interference = 0.0;
    for (std::size_t i = 0; i < kernel.weight.size(); ++i) {
      const double x = s * p_ap_ * kernel.gain[i] / mu_;  // s * interferer power gain / mu
      interference += kernel.weight[i] * x / (1.0 + x);
    }
    return std::exp(-s * noise_ - contention_.deployment().density_m2 * interference);
  }

  ContentionModel contention_;
  PathlossModel pathloss_;
  double noise_;
  double p_ap_;
  double mu_;
  QTable q_table_;
};

/// Mean per-AP throughput int p_T(r) T(r) f(r | viable) dr, bit/s/Hz.
template <class Uplink>
double ap_throughput(const SinrModel& model, const Uplink& uplink) {
  const ConditionalDistanceLaw<Uplink> law(model.contention().deployment(), uplink);
  QuadratureOptions opt;
  opt.abs_tol = 1e-8;
  opt.rel_tol = 1e-5;
  opt.initial_splits = 16;
  opt.max_panels = 2000;
  return law.expect(
      [&](double r) {
        return transmission_probability(r, model.contention()) * model.expected_rate(r);
      },
      opt);
}

/// Throughput times deployment density, bit/s/Hz/km^2.
template <class Uplink>
double area_spectral_efficiency(const SinrModel& model, const Uplink& uplink) {
  const double density_km2 = model.contention().deployment().per_km2_value();
  if (density_km2 == 0.0) return 0.0;
  return ap_throughput(model, uplink) * density_km2;
}

}  // namespace swifi
