#pragma once

// AP deployment statistics for a homogeneous Poisson field: the Rayleigh
// nearest-AP distance law and its uplink-viability-conditioned version.
// Density crosses the API in APs/km^2 and is converted exactly once; all
// internal math is per-m^2.

#include <cmath>
#include <stdexcept>

#include "swifi/quadrature.hpp"
#include "swifi/units.hpp"

namespace swifi {

struct DeploymentModel {
  double density_m2;  // APs per m^2

  static DeploymentModel per_km2(double aps_per_km2) {
    if (!(aps_per_km2 > 0.0)) throw std::invalid_argument("DeploymentModel: density must be positive");
    return DeploymentModel{aps_per_km2 / kSquareMetersPerSquareKm};
  }

  double per_km2_value() const { return density_m2 * kSquareMetersPerSquareKm; }
};

/// Density of the distance from a uniformly placed client to its nearest
/// AP: f_R(r) = 2 pi lambda r exp(-lambda pi r^2).
inline double nearest_ap_distance_pdf(double r, const DeploymentModel& dep) {
  if (r < 0.0) throw std::invalid_argument("nearest_ap_distance_pdf: r must be nonnegative");
  const double lam = dep.density_m2;
  return 2.0 * M_PI * lam * r * std::exp(-lam * M_PI * r * r);
}

inline double nearest_ap_distance_mode(const DeploymentModel& dep) {
  return 1.0 / std::sqrt(2.0 * M_PI * dep.density_m2);
}

/// Radius beyond which f_R is below 1e-12 of its peak; integration cutoff.
inline double nearest_ap_distance_cutoff(const DeploymentModel& dep) {
  const double mode = nearest_ap_distance_mode(dep);
  const double peak = nearest_ap_distance_pdf(mode, dep);
  double lo = mode, hi = mode;
  while (nearest_ap_distance_pdf(hi, dep) > 1e-12 * peak) hi *= 2.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (nearest_ap_distance_pdf(mid, dep) > 1e-12 * peak ? lo : hi) = mid;
  }
  return hi;
}

/// P(uplink to the nearest AP is viable) = int f_R(r) p_U(r) dr.
/// `uplink` must expose viability(r) -> [0, 1].
template <class Uplink>
double uplink_marginal(const DeploymentModel& dep, const Uplink& uplink) {
  const double cutoff = nearest_ap_distance_cutoff(dep);
  QuadratureOptions opt;
  opt.abs_tol = 1e-8;
  opt.rel_tol = 1e-9;
  opt.initial_splits = 16;  // the viability factor can die well before f_R
  const double value = integrate_adaptive(
      [&](double r) { return nearest_ap_distance_pdf(r, dep) * uplink.viability(r); },
      0.0, cutoff, opt);
  return std::min(1.0, std::max(0.0, value));
}

/// Serving-distance law conditioned on the uplink being viable. Built once
/// so the normalizing marginal is not recomputed inside quadratures.
template <class Uplink>
class ConditionalDistanceLaw {
 public:
  ConditionalDistanceLaw(const DeploymentModel& dep, const Uplink& uplink)
      : dep_(dep),
        uplink_(&uplink),
        cutoff_(nearest_ap_distance_cutoff(dep)),
        marginal_(uplink_marginal(dep, uplink)) {
    if (!(marginal_ > 0.0)) {
      throw std::domain_error("ConditionalDistanceLaw: uplink marginal is zero; no client can associate");
    }
  }

  double pdf(double r) const {
    return nearest_ap_distance_pdf(r, dep_) * uplink_->viability(r) / marginal_;
  }

  double marginal() const { return marginal_; }
  double cutoff() const { return cutoff_; }
  const DeploymentModel& deployment() const { return dep_; }

  /// Expectation of g(r) under this law.
  template <class G>
  double expect(const G& g) const {
    QuadratureOptions opt;
    opt.abs_tol = 1e-9;
    opt.rel_tol = 1e-7;
    opt.initial_splits = 16;
    opt.max_panels = 6000;
    return expect(g, opt);
  }

  template <class G>
  double expect(const G& g, const QuadratureOptions& opt) const {
    return integrate_adaptive([&](double r) { return pdf(r) * g(r); }, 0.0, cutoff_, opt);
  }

 private:
  DeploymentModel dep_;
  const Uplink* uplink_;
  double cutoff_;
  double marginal_;
};

template <class Uplink>
double conditional_distance_pdf(double r, const DeploymentModel& dep, const Uplink& uplink) {
  return ConditionalDistanceLaw<Uplink>(dep, uplink).pdf(r);
}

}  // namespace swifi
