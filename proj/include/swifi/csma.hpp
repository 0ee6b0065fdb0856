#pragma once

// Mark-based CSMA/CA contention model. Every AP carries an independent
// uniform [0,1] back-off mark; an AP transmits when no AP it detects has a
// smaller mark. Collisions, exponential back-off depth, and timer history
// are deliberately outside the model.
//
// Core quantities:
//   S(d)    probability one AP detects another at distance d
//   N(r)    plane integral of S outside the client-centered exclusion ball
//   p_T(r)  transmission probability given a client at distance r
//   q(d)    probability two APs at distance d transmit concurrently,
//           conditioned on one of them transmitting

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "swifi/deployment.hpp"
#include "swifi/metric_curve.hpp"
#include "swifi/propagation.hpp"
#include "swifi/quadrature.hpp"
#include "swifi/uplink.hpp"
#include "swifi/units.hpp"

namespace swifi {

class ContentionModel {
 public:
  ContentionModel(double p_ap_w, double sigma_w, PathlossModel ap_ap_pathloss,
                  double fading_mu, DeploymentModel deployment)
      : p_ap_(p_ap_w),
        sigma_(sigma_w),
        pathloss_(std::move(ap_ap_pathloss)),
        mu_(fading_mu),
        deployment_(deployment) {
    if (!(p_ap_ > 0.0) || !(sigma_ > 0.0) || !(mu_ > 0.0)) {
      throw std::invalid_argument("ContentionModel: parameters must be positive");
    }
    detection_cutoff_ = solve_detection_radius(1e-9);
    full_plane_ = 2.0 * M_PI * radial_mass(detection_cutoff_);
  }

  /// S(d) = exp(-mu sigma / (P_AP gain(d))).
  double detection(double d) const {
    return std::exp(-mu_ * sigma_ / (p_ap_ * pathloss_.gain(d)));
  }

  /// Distance beyond which S < floor.
  double detection_radius(double floor) const { return solve_detection_radius(floor); }

  /// Truncation radius used by all plane integrals (S < 1e-9 outside).
  double detection_cutoff() const { return detection_cutoff_; }

  /// Full-plane integral of S: 2 pi int S(v) v dv.
  double full_plane_integral() const { return full_plane_; }

  /// int_0^u S(v) v dv.
  double radial_mass(double u) const {
    if (u <= 0.0) return 0.0;
    QuadratureOptions opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-12 * u * u;
    opt.initial_splits = 8;
    return integrate_adaptive([&](double v) { return detection(v) * v; }, 0.0, u, opt);
  }

  double p_ap() const { return p_ap_; }
  double sigma() const { return sigma_; }
  double mu() const { return mu_; }
  const PathlossModel& pathloss() const { return pathloss_; }
  const DeploymentModel& deployment() const { return deployment_; }

 private:
  double solve_detection_radius(double floor) const {
    double hi = pathloss_.d_min();
    while (detection(hi) >= floor && hi < 1e8) hi *= 2.0;
    double lo = hi * 0.5;
    for (int i = 0; i < 200 && (hi - lo) > 1e-9 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (detection(mid) >= floor ? lo : hi) = mid;
    }
    return hi;
  }

  double p_ap_;
  double sigma_;
  PathlossModel pathloss_;
  double mu_;
  DeploymentModel deployment_;
  double detection_cutoff_ = 0.0;
  double full_plane_ = 0.0;
};

inline double detection_probability(double d, const ContentionModel& model) {
  return model.detection(d);
}

/// Which point the exclusion ball is centered on. The contention geometry
/// puts the ball around the client with the sensing AP on its boundary;
/// the AP-centered variant is the radially symmetric reduction used as an
/// independent cross-check (the two coincide at r = 0).
enum class ExclusionCenter { client, ap };

/// Integral of S over the plane minus the radius-r exclusion ball, m^2.
///
/// Client-centered frame, AP at the origin: a point at polar (v, theta)
/// lies inside the ball iff v < 2 r cos(theta), so
///   N(r) = 2 pi A(R) - 2 int_0^{pi/2} A(min(2 r cos t, R)) dt,
/// with A the radial cumulative of S v and R the truncation radius.
inline double contention_integral(double r, const ContentionModel& model,
                                  ExclusionCenter center = ExclusionCenter::client) {
  if (r < 0.0) throw std::invalid_argument("contention_integral: r must be nonnegative");
  const double cutoff = model.detection_cutoff();
  const double full = model.full_plane_integral();
  if (r == 0.0) return full;

  if (center == ExclusionCenter::ap) {
    if (r >= cutoff) return 0.0;
    return full - 2.0 * M_PI * model.radial_mass(r);
  }

  QuadratureOptions opt;
  opt.rel_tol = 1e-7;
  opt.abs_tol = 1e-9 * full;
  opt.initial_splits = 8;  // >= 120 angular nodes before refinement
  const double cap = 2.0 * integrate_adaptive(
      [&](double theta) {
        const double u = std::min(2.0 * r * std::cos(theta), cutoff);
        return model.radial_mass(u);
      },
      0.0, M_PI / 2.0, opt);
  return std::max(0.0, full - cap);
}

/// p_T(r) = (1 - exp(-lambda N)) / (lambda N), the closed form of the
/// uniform-mark integral.
inline double transmission_probability(double r, const ContentionModel& model) {
  const double x = model.deployment().density_m2 * contention_integral(r, model);
  return one_minus_exp_over(x);
}

/// Same quantity through the explicit mark integral
/// int_0^1 exp(-lambda N m) dm, kept as a second route for verification.
inline double transmission_probability_mark_integral(double r, const ContentionModel& model) {
  const double x = model.deployment().density_m2 * contention_integral(r, model);
  QuadratureOptions opt;
  opt.abs_tol = 1e-15;
  opt.rel_tol = 1e-13;
  opt.max_panels = 20000;
  opt.initial_splits = 32;
  return integrate_adaptive([&](double m) { return std::exp(-x * m); }, 0.0, 1.0, opt);
}

/// Transmission probability of an AP with no exclusion ball: the limit of
/// q(d) at large separation.
inline double isolated_transmission_probability(const ContentionModel& model) {
  return one_minus_exp_over(model.deployment().density_m2 * model.full_plane_integral());
}

/// Mean transmission probability over serving distances, weighted by the
/// viability-conditioned nearest-AP law.
template <class Uplink>
double mean_transmission_probability(const ContentionModel& model, const Uplink& uplink) {
  const ConditionalDistanceLaw<Uplink> law(model.deployment(), uplink);
  return law.expect([&](double r) { return transmission_probability(r, model); });
}

namespace detail {

/// int S(|z - c1|) S(|z - c2|) dz for two APs a distance d apart, in polar
/// coordinates about their midpoint. The product has compact support, so
/// the radial range is [max(0, d/2 - R), d/2 + R].
inline double pairwise_overlap_integral(double d, const ContentionModel& model) {
  const double cutoff = model.detection_cutoff();
  if (d >= 2.0 * cutoff) return 0.0;
  const double half = 0.5 * d;
  const double rho_lo = std::max(0.0, half - cutoff);
  const double rho_hi = half + cutoff;

  const auto radial = [&](double theta) {
    const double c = std::cos(theta);
    QuadratureOptions opt;
    opt.rel_tol = 1e-8;
    opt.abs_tol = 1e-10 * cutoff * cutoff;
    opt.initial_splits = 8;
    return integrate_adaptive(
        [&](double rho) {
          const double base = rho * rho + half * half;
          const double d1 = std::sqrt(base + rho * d * c);
          const double d2 = std::sqrt(std::max(0.0, base - rho * d * c));
          return model.detection(d1) * model.detection(d2) * rho;
        },
        rho_lo, rho_hi, opt);
  };

  QuadratureOptions opt;
  opt.rel_tol = 1e-7;
  opt.abs_tol = 1e-9 * cutoff * cutoff;
  opt.initial_splits = 8;
  return 4.0 * integrate_adaptive(radial, 0.0, M_PI / 2.0, opt);
}

}  // namespace detail

/// q(d): probability that an AP at distance d from a transmitting AP is
/// itself transmitting. Joint and single transmission probabilities reduce
/// to closed forms in the mark integrals once the two plane integrals
///   I_S      = int S_0              (one AP's detection mass)
///   I_or(d)  = int 1-(1-S_0)(1-S_x) = 2 I_S - overlap(d)
/// are known. Marks with m < m_0 block both APs (intensity lambda m_0 over
/// the union footprint); marks between m_0 and m_x block only AP x.
inline double concurrent_transmission_probability(double d, const ContentionModel& model) {
  if (d < model.pathloss().d_min()) {
    throw std::invalid_argument("concurrent_transmission_probability: d below model floor");
  }
  const double lam = model.deployment().density_m2;
  const double s_d = model.detection(d);
  const double i_s = model.full_plane_integral();
  const double i_or = 2.0 * i_s - detail::pairwise_overlap_integral(d, model);

  const double a = lam * i_s;
  const double b = lam * i_or;

  // Joint: 2 (1-S(d)) / a * int_0^1 (1 - e^{-a(1-m)}) e^{-b m} dm.
  double j_over_a;
  if (a < 1e-10) {
    // int (1-m) e^{-bm} dm
    if (b < 1e-8) {
      j_over_a = 0.5;
    } else {
      const double phi_b = one_minus_exp_over(b);
      j_over_a = phi_b - (phi_b - std::exp(-b)) / b;
    }
  } else {
    // (e^-b - e^-a)/(a-b) = e^-min(a,b) * phi(|a-b|), exact and free of
    // overflow for any magnitudes
    const double phi_b = one_minus_exp_over(b);
    const double cross = std::exp(-std::min(a, b)) * one_minus_exp_over(std::fabs(a - b));
    j_over_a = (phi_b - cross) / a;
  }
  const double joint = 2.0 * (1.0 - s_d) * j_over_a;

  // Single: int_0^1 [ int_0^{m_x} e^{-a m} dm + (1-S) int_{m_x}^1 e^{-a m} dm ] dm_x.
  double single;
  if (a < 1e-8) {
    single = 0.5 + 0.5 * (1.0 - s_d);
  } else {
    const double phi_a = one_minus_exp_over(a);
    single = ((1.0 - phi_a) + (1.0 - s_d) * (phi_a - std::exp(-a))) / a;
  }

  if (!(single > 0.0)) return 0.0;
  const double q = joint / single;
  return std::min(1.0, std::max(0.0, q));
}

/// Cached q(d) on a log grid. q is constant (= isolated probability) once
/// the two detection footprints no longer overlap, so the grid only spans
/// [d_min, ~2 cutoff].
class QTable {
 public:
  QTable() = default;

  QTable(const ContentionModel& model, std::size_t points = 200) {
    const double d_min = model.pathloss().d_min();
    d_far_ = 2.02 * model.detection_cutoff();
    isolated_ = isolated_transmission_probability(model);

    std::vector<double> grid(points), values(points);
    const double log_lo = std::log(d_min);
    const double log_hi = std::log(d_far_);
    for (std::size_t i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / (points - 1);
      grid[i] = std::exp(log_lo + t * (log_hi - log_lo));
      values[i] = concurrent_transmission_probability(grid[i], model);
    }
    curve_ = MetricCurve(std::move(grid), std::move(values), "q(d)");
  }

  double operator()(double d) const {
    if (d >= d_far_) return isolated_;
    return curve_.interpolate(d);
  }

  double isolated() const { return isolated_; }
  double far_distance() const { return d_far_; }
  const MetricCurve& curve() const { return curve_; }

 private:
  MetricCurve curve_;
  double isolated_ = 1.0;
  double d_far_ = 0.0;
};

inline QTable build_q_table(const ContentionModel& model, std::size_t points = 200) {
  return QTable(model, points);
}

}  // namespace swifi
