#pragma once

// Radio propagation: dual-slope two-ray pathloss (ITU-R P.1411 suburban
// parameterization), the fixed-height Suburban Hata variant used for
// cross-validation, exponential fading, and dB <-> linear plumbing.
//
// Sign convention: pathloss_db() returns a positive loss; gain() is the
// linear factor 10^(-loss/10) that multiplies transmit power. The two are
// kept as separate operations so threshold expressions of the form
// exp(-mu * threshold / (P * gain)) can never pick up an inverted sign.

#include <cmath>
#include <stdexcept>

#include "swifi/units.hpp"

namespace swifi {

/// Antenna geometry of one link class. Heights are normalized so that
/// h_t >= h_r; the two-ray model is symmetric in (h_t + h_r, |h_t - h_r|).
struct LinkGeometry {
  double wavelength;  // m
  double h_t;         // m, transmitter
  double h_r;         // m, receiver

  LinkGeometry(double wavelength_m, double h_t_m, double h_r_m)
      : wavelength(wavelength_m), h_t(h_t_m), h_r(h_r_m) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("LinkGeometry: wavelength must be positive");
    if (h_t < h_r) std::swap(h_t, h_r);
    if (!(h_r > 0.0)) throw std::invalid_argument("LinkGeometry: heights must be positive");
  }

  static LinkGeometry from_frequency(double frequency_hz, double h_t_m, double h_r_m) {
    return LinkGeometry(kSpeedOfLight / frequency_hz, h_t_m, h_r_m);
  }
};

/// Distance at which the two-ray slope changes from 25 to 40 dB/decade.
inline double breakpoint_distance(const LinkGeometry& geom) {
  const double sum2 = (geom.h_t + geom.h_r) * (geom.h_t + geom.h_r);
  const double diff2 = (geom.h_t - geom.h_r) * (geom.h_t - geom.h_r);
  const double half_wl2 = 0.25 * geom.wavelength * geom.wavelength;
  const double radicand = (sum2 - diff2) * (sum2 - diff2) -
                          2.0 * (sum2 + diff2) * half_wl2 + half_wl2 * half_wl2;
  if (radicand <= 0.0) {
    throw std::domain_error("breakpoint_distance: antenna heights too small for this wavelength");
  }
  return std::sqrt(radicand) / geom.wavelength;
}

/// Line-of-sight reference loss |20 log10(lambda^2 / (8 pi h_t h_r))|, dB.
inline double los_pathloss_db(const LinkGeometry& geom) {
  return std::fabs(20.0 * std::log10(geom.wavelength * geom.wavelength /
                                     (8.0 * M_PI * geom.h_t * geom.h_r)));
}

enum class PathlossVariant { dual_slope, suburban_hata };

class PathlossModel {
 public:
  struct Sample {
    double loss_db;
    bool clamped;  // true when the query distance was below d_min
  };

  static PathlossModel dual_slope(const LinkGeometry& geom, double d_min_m = kDefaultDMin) {
    PathlossModel m(PathlossVariant::dual_slope, d_min_m);
    m.geom_ = geom;
    m.r_bp_ = breakpoint_distance(geom);
    m.rho_los_ = los_pathloss_db(geom);
    return m;
  }

  /// Suburban Hata with the AP height already substituted:
  /// loss = 124.3 + 35.23 log10(d_km). Validation model only.
  static PathlossModel suburban_hata(double d_min_m = kDefaultDMin) {
    return PathlossModel(PathlossVariant::suburban_hata, d_min_m);
  }

  Sample sample(double d) const {
    const bool clamped = d < d_min_;
    const double dd = clamped ? d_min_ : d;
    if (variant_ == PathlossVariant::suburban_hata) {
      return {124.3 + 35.23 * std::log10(dd / 1000.0), clamped};
    }
    const double slope = dd < r_bp_ ? 25.0 : 40.0;
    return {rho_los_ + 20.0 + slope * std::log10(dd / r_bp_), clamped};
  }

  double pathloss_db(double d) const { return sample(d).loss_db; }

  /// Linear path gain 10^(-loss/10), capped at unity.
  double gain(double d) const {
    const double g = std::pow(10.0, -pathloss_db(d) / 10.0);
    return g > 1.0 ? 1.0 : g;
  }

  PathlossVariant variant() const { return variant_; }
  double d_min() const { return d_min_; }

  double breakpoint() const {
    if (variant_ != PathlossVariant::dual_slope) {
      throw std::logic_error("breakpoint(): not a dual-slope model");
    }
    return r_bp_;
  }

  const LinkGeometry& geometry() const {
    if (variant_ != PathlossVariant::dual_slope) {
      throw std::logic_error("geometry(): not a dual-slope model");
    }
    return geom_;
  }

  static constexpr double kDefaultDMin = 1.0;  // m; far-field validity floor

 private:
  PathlossModel(PathlossVariant variant, double d_min_m)
      : variant_(variant), d_min_(d_min_m), geom_(1.0, 1.0, 1.0) {
    if (!(d_min_ > 0.0)) throw std::invalid_argument("PathlossModel: d_min must be positive");
  }

  PathlossVariant variant_;
  double d_min_;
  LinkGeometry geom_;
  double r_bp_ = 0.0;
  double rho_los_ = 0.0;
};

inline double pathloss_db(const PathlossModel& model, double d) { return model.pathloss_db(d); }
inline double path_gain(const PathlossModel& model, double d) { return model.gain(d); }

/// Exponential (Rayleigh-power) fading. mu is the rate, so the mean is
/// 1/mu; thresholds of the form P(F > t) come out as exp(-mu t).
struct FadingModel {
  double mu = 1.0;

  explicit FadingModel(double rate = 1.0) : mu(rate) {
    if (!(mu > 0.0)) throw std::invalid_argument("FadingModel: mu must be positive");
  }

  double mean() const { return 1.0 / mu; }
  double survival(double t) const { return std::exp(-mu * t); }

  template <class Rng>
  double sample(Rng& rng) const {
    return rng.exponential(mu);
  }
};

/// Received power P_tx * gain * fade.
inline double received_power(double p_tx_w, double gain, double fade) {
  if (p_tx_w < 0.0 || gain < 0.0 || fade < 0.0) {
    throw std::invalid_argument("received_power: negative input");
  }
  return p_tx_w * gain * fade;
}

}  // namespace swifi
