#pragma once

// Uplink viability: the probability that a client transmission clears the
// detection threshold at its AP, the resulting coverage range, and the
// client starvation probability (no viable AP anywhere in the plane).

#include <cmath>
#include <optional>
#include <stdexcept>

#include "swifi/deployment.hpp"
#include "swifi/propagation.hpp"
#include "swifi/quadrature.hpp"

namespace swifi {

/// Client-to-AP link budget. The pathloss model must be built on AP-client
/// geometry (h_t = h_AP, h_r = client height), never AP-AP.
class UplinkModel {
 public:
  UplinkModel(double p_client_w, double gamma_w, PathlossModel ap_client_pathloss,
              double fading_mu)
      : p_client_(p_client_w),
        gamma_(gamma_w),
        pathloss_(std::move(ap_client_pathloss)),
        mu_(fading_mu) {
    if (!(p_client_ > 0.0) || !(gamma_ > 0.0) || !(mu_ > 0.0)) {
      throw std::invalid_argument("UplinkModel: parameters must be positive");
    }
  }

  /// p_U(r) = P(P_C * gain(r) * G > gamma) = exp(-mu gamma / (P_C gain(r))).
  double viability(double r) const {
    return std::exp(-mu_ * gamma_ / (p_client_ * pathloss_.gain(r)));
  }

  double p_client() const { return p_client_; }
  double gamma() const { return gamma_; }
  double mu() const { return mu_; }
  const PathlossModel& pathloss() const { return pathloss_; }

 private:
  double p_client_;
  double gamma_;
  PathlossModel pathloss_;
  double mu_;
};

inline double uplink_viability(double r, const UplinkModel& model) {
  return model.viability(r);
}

/// Definition threshold for "in coverage": p_U >= 0.1.
inline constexpr double kCoverageViabilityThreshold = 0.1;

/// Largest distance with p_U(d) >= threshold; p_U is strictly decreasing,
/// so bisection on a fixed bracket. Returns nullopt when even d_min is out
/// of coverage.
inline std::optional<double> coverage_range(const UplinkModel& model,
                                            double threshold = kCoverageViabilityThreshold) {
  const double d_min = model.pathloss().d_min();
  if (model.viability(d_min) < threshold) return std::nullopt;

  double lo = d_min, hi = 1e6;
  if (model.viability(hi) >= threshold) return hi;  // implausible, but bounded
  for (int i = 0; i < 200 && (hi - lo) > 0.01; ++i) {
    const double mid = 0.5 * (lo + hi);
    (model.viability(mid) >= threshold ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Distance beyond which p_U < eps. Used for integration and simulation
/// window sizing.
inline double viability_radius(const UplinkModel& model, double eps) {
  double hi = model.pathloss().d_min();
  while (model.viability(hi) >= eps && hi < 1e8) hi *= 2.0;
  double lo = hi * 0.5;
  for (int i = 0; i < 200 && (hi - lo) > 1e-6 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (model.viability(mid) >= eps ? lo : hi) = mid;
  }
  return hi;
}

/// P(no AP in the plane has a viable uplink from the client). With
/// independent per-AP fading the viable APs form a p_U-thinned Poisson
/// field, so this is its void probability:
///   exp(-2 pi lambda int_0^inf p_U(r) r dr).
inline double starvation_probability(const DeploymentModel& dep, const UplinkModel& model) {
  const double r_max = viability_radius(model, 1e-12);
  QuadratureOptions opt;
  opt.abs_tol = 1e-8;
  opt.rel_tol = 1e-9;
  opt.initial_splits = 16;
  const double mass = integrate_adaptive(
      [&](double r) { return model.viability(r) * r; }, 0.0, r_max, opt);
  return std::exp(-2.0 * M_PI * dep.density_m2 * mass);
}

}  // namespace swifi
