#pragma once

// Brute-force oracle for the analytic machinery: realizes marked Poisson
// fields, plays out mark-based contention with per-ordered-pair fading,
// and estimates transmission probability, concurrent-transmission
// probability, SINR CCDF, starvation and uplink association empirically.
//
// Reproducibility contract: every replication r of a run with seed s draws
// exclusively from RngStream(s, r), so results are bit-identical across
// runs and independent of execution order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "swifi/csma.hpp"
#include "swifi/deployment.hpp"
#include "swifi/propagation.hpp"
#include "swifi/rng.hpp"
#include "swifi/uplink.hpp"

namespace swifi {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;

  static Estimate from_bernoulli(std::size_t successes, std::size_t n) {
    Estimate e;
    e.n = n;
    if (n == 0) return e;
    const double p = static_cast<double>(successes) / static_cast<double>(n);
    e.value = p;
    if (n > 1) e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n - 1));
    return e;
  }
};

/// Simulation window: a square of half-width core + guard centered on the
/// measured point. Only the center is measured; the guard ring keeps edge
/// effects below the Monte Carlo noise floor.
struct Window {
  double core_half;  // m
  double guard;      // m

  double half() const { return core_half + guard; }
  double area() const { return 4.0 * half() * half(); }
};

struct FieldPoint {
  double x;
  double y;
  double mark;
};

struct PointField {
  double window_half_width;  // m, includes the guard
  double guard;              // m
  std::vector<FieldPoint> points;
  std::uint64_t seed;
};

namespace detail {

/// Radius R such that the expected detection mass beyond R,
/// 2 pi lambda int_R S(v) v dv, is below `budget`. Everything past it can
/// be left out of a simulated field without biasing contention outcomes.
inline double detection_tail_radius(const ContentionModel& model, double budget) {
  const double cutoff = model.detection_cutoff();
  const double lam = model.deployment().density_m2;
  const double total = model.radial_mass(cutoff);
  const auto tail = [&](double r) {
    return 2.0 * M_PI * lam * (total - model.radial_mass(std::min(r, cutoff)));
  };
  if (tail(model.pathloss().d_min()) <= budget) return model.pathloss().d_min();
  double lo = model.pathloss().d_min(), hi = cutoff;
  for (int i = 0; i < 100 && (hi - lo) > 1e-3 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > budget ? lo : hi) = mid;
  }
  return hi;
}

/// Same idea for uplink viability mass 2 pi lambda int_R p_U(v) v dv.
inline double viability_tail_radius(const DeploymentModel& dep, const UplinkModel& model,
                                    double budget) {
  const double cutoff = viability_radius(model, 1e-12);
  const double lam = dep.density_m2;
  QuadratureOptions opt;
  opt.rel_tol = 1e-8;
  opt.abs_tol = 1e-12;
  opt.initial_splits = 8;
  const auto mass = [&](double lo) {
    if (lo >= cutoff) return 0.0;
    return integrate_adaptive([&](double v) { return model.viability(v) * v; }, lo, cutoff, opt);
  };
  if (2.0 * M_PI * lam * mass(model.pathloss().d_min()) <= budget) {
    return model.pathloss().d_min();
  }
  double lo = model.pathloss().d_min(), hi = cutoff;
  for (int i = 0; i < 100 && (hi - lo) > 1e-3 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (2.0 * M_PI * lam * mass(mid) > budget ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace detail

/// Window for contention simulations: the core covers every AP whose
/// detection could plausibly matter; the guard is the analytic contention
/// radius (S < 1e-3).
inline Window contention_window(const ContentionModel& model) {
  const double lam = model.deployment().density_m2;
  const double core = std::max(10.0 / std::sqrt(lam),
                               detail::detection_tail_radius(model, 1e-4));
  return Window{core, model.detection_radius(1e-3)};
}

/// Window for uplink/starvation simulations, by the same tail logic.
inline Window uplink_window(const DeploymentModel& dep, const UplinkModel& model) {
  const double lam = dep.density_m2;
  const double core = std::max(10.0 / std::sqrt(lam),
                               detail::viability_tail_radius(dep, model, 1e-4));
  return Window{core, viability_radius(model, 1e-3)};
}

/// Homogeneous Poisson field with i.i.d. uniform marks on the window.
inline PointField sample_field(const DeploymentModel& dep, const Window& window,
                               RngStream& rng, std::uint64_t seed_tag = 0) {
  PointField field;
  field.window_half_width = window.half();
  field.guard = window.guard;
  field.seed = seed_tag;
  const double half = window.half();
  const std::uint64_t count = rng.poisson(dep.density_m2 * window.area());
  field.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    FieldPoint p;
    p.x = rng.uniform(-half, half);
    p.y = rng.uniform(-half, half);
    p.mark = rng.uniform();
    field.points.push_back(p);
  }
  return field;
}

/// Poisson field on window \ B(center, radius); the exact conditioned law
/// (area-proportional count, uniform placement by rejection).
inline PointField sample_field_excluding_ball(const DeploymentModel& dep, const Window& window,
                                              double ball_x, double ball_y, double ball_radius,
                                              RngStream& rng, std::uint64_t seed_tag = 0) {
  PointField field;
  field.window_half_width = window.half();
  field.guard = window.guard;
  field.seed = seed_tag;
  const double half = window.half();
  const double r2 = ball_radius * ball_radius;
  const double area = window.area() - M_PI * r2;
  if (area <= 0.0) throw std::invalid_argument("sample_field_excluding_ball: ball exceeds window");
  const std::uint64_t count = rng.poisson(dep.density_m2 * area);
  field.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    FieldPoint p;
    for (;;) {
      p.x = rng.uniform(-half, half);
      p.y = rng.uniform(-half, half);
      const double dx = p.x - ball_x, dy = p.y - ball_y;
      if (dx * dx + dy * dy >= r2) break;
    }
    p.mark = rng.uniform();
    field.points.push_back(p);
  }
  return field;
}

namespace detail {

/// Uniform-cell spatial index over all points (field + extras) so each
/// AP only scans candidates within the detection cutoff.
class BucketGrid {
 public:
  BucketGrid(const std::vector<FieldPoint>& pts, double half, double cell_hint) {
    pts_ = &pts;
    const double extent = 2.0 * half;
    cells_ = std::max<std::size_t>(1, static_cast<std::size_t>(extent / std::max(cell_hint, 1.0)));
    cells_ = std::min<std::size_t>(cells_, 512);
    cell_size_ = extent / static_cast<double>(cells_);
    half_ = half;
    buckets_.resize(cells_ * cells_);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      buckets_[index_of(pts[i].x, pts[i].y)].push_back(static_cast<std::uint32_t>(i));
    }
  }

  /// Visits candidate indices in deterministic (cell row-major, then
  /// insertion) order. Visitor returns false to stop early.
  template <class Visitor>
  void visit_near(double x, double y, double radius, const Visitor& visit) const {
    const long span = static_cast<long>(radius / cell_size_) + 1;
    const long cx = cell_coord(x), cy = cell_coord(y);
    for (long iy = cy - span; iy <= cy + span; ++iy) {
      if (iy < 0 || iy >= static_cast<long>(cells_)) continue;
      for (long ix = cx - span; ix <= cx + span; ++ix) {
        if (ix < 0 || ix >= static_cast<long>(cells_)) continue;
        for (std::uint32_t idx : buckets_[static_cast<std::size_t>(iy) * cells_ + ix]) {
          if (!visit(idx)) return;
        }
      }
    }
  }

 private:
  long cell_coord(double v) const {
    long c = static_cast<long>((v + half_) / cell_size_);
    if (c < 0) c = 0;
    if (c >= static_cast<long>(cells_)) c = static_cast<long>(cells_) - 1;
    return c;
  }

  std::size_t index_of(double x, double y) const {
    return static_cast<std::size_t>(cell_coord(y)) * cells_ + static_cast<std::size_t>(cell_coord(x));
  }

  const std::vector<FieldPoint>* pts_;
  std::vector<std::vector<std::uint32_t>> buckets_;
  std::size_t cells_ = 0;
  double cell_size_ = 0.0;
  double half_ = 0.0;
};

/// Does the AP at `pts[self]` transmit? Scans candidates with a smaller
/// mark and draws one detection Bernoulli per ordered pair until one
/// detection blocks it. Channel reciprocity is not assumed: the reverse
/// direction uses its own draw when the other AP is examined.
inline bool point_transmits(const std::vector<FieldPoint>& pts, std::size_t self,
                            const BucketGrid& grid, const ContentionModel& model,
                            double detect_radius, RngStream& rng) {
  const FieldPoint& me = pts[self];
  bool blocked = false;
  grid.visit_near(me.x, me.y, detect_radius, [&](std::uint32_t idx) {
    if (idx == self) return true;
    const FieldPoint& other = pts[idx];
    if (other.mark >= me.mark) return true;
    const double dx = other.x - me.x, dy = other.y - me.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d > detect_radius) return true;
    if (rng.bernoulli(model.detection(d))) {
      blocked = true;
      return false;
    }
    return true;
  });
  return !blocked;
}

}  // namespace detail

/// Indices of concurrently transmitting APs. `extra_aps` are appended to
/// the field (indices field.points.size()..+k) and receive fresh marks.
inline std::vector<std::uint32_t> contention_outcome(
    const PointField& field, const std::vector<std::pair<double, double>>& extra_aps,
    const ContentionModel& model, RngStream& rng) {
  std::vector<FieldPoint> pts = field.points;
  for (const auto& [x, y] : extra_aps) {
    pts.push_back(FieldPoint{x, y, rng.uniform()});
  }
  const double detect_radius = model.detection_cutoff();
  const detail::BucketGrid grid(pts, field.window_half_width, detect_radius);

  std::vector<std::uint32_t> transmitting;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (detail::point_transmits(pts, i, grid, model, detect_radius, rng)) {
      transmitting.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return transmitting;
}

using ReplicationSink = std::function<void(std::size_t rep, double value)>;

/// Empirical p_T(r): serving AP at the window center, client at distance
/// r, the ball around the client resampled empty, and the fraction of
/// replications in which the center AP transmits.
inline Estimate estimate_pt(double r, const ContentionModel& model, std::size_t n_reps,
                            std::uint64_t seed, const Window* window_override = nullptr,
                            const ReplicationSink& sink = {}) {
  if (n_reps < 1) throw std::invalid_argument("estimate_pt: need at least one replication");
  Window window;
  if (window_override) {
    window = *window_override;  // explicit windows are honored as given
  } else {
    window = contention_window(model);
    window.core_half = std::max(window.core_half, 2.5 * r);
  }
  const double detect_radius = model.detection_cutoff();

  std::size_t transmit_count = 0;
  for (std::size_t rep = 0; rep < n_reps; ++rep) {
    RngStream rng(seed, rep);
    const PointField field =
        r > 0.0 ? sample_field_excluding_ball(model.deployment(), window, r, 0.0, r, rng, seed)
                : sample_field(model.deployment(), window, rng, seed);
    const double m0 = rng.uniform();
    bool blocked = false;
    for (const FieldPoint& p : field.points) {
      if (p.mark >= m0) continue;
      const double d = std::sqrt(p.x * p.x + p.y * p.y);
      if (d > detect_radius) continue;
      if (rng.bernoulli(model.detection(d))) {
        blocked = true;
        break;
      }
    }
    if (!blocked) ++transmit_count;
    if (sink) sink(rep, blocked ? 0.0 : 1.0);
  }
  return Estimate::from_bernoulli(transmit_count, n_reps);
}

/// Empirical q(d): two extra APs at separation d, counting how often the
/// second transmits among outcomes where the first does. `n_conditioned`
/// is the number of accepted (first AP transmitting) outcomes. Only the
/// two tagged APs' transmit flags are needed, and each AP's flag depends
/// on its own ordered-pair draws alone, so the two per-point scans are
/// drawn one after the other instead of resolving the whole field.
inline Estimate estimate_q(double d, const ContentionModel& model, std::size_t n_conditioned,
                           std::uint64_t seed, const Window* window_override = nullptr) {
  Window window;
  if (window_override) {
    window = *window_override;
  } else {
    window = contention_window(model);
    window.core_half = std::max(window.core_half, 0.5 * d + model.detection_radius(1e-3));
  }
  const double detect_radius = model.detection_cutoff();

  const auto tagged_transmits = [&](const std::vector<FieldPoint>& pts, double x, double y,
                                    double mark, RngStream& rng) {
    for (const FieldPoint& p : pts) {
      if (p.mark >= mark) continue;
      const double dx = p.x - x, dy = p.y - y;
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist > detect_radius) continue;
      if (rng.bernoulli(model.detection(dist))) return false;
    }
    return true;
  };

  std::size_t accepted = 0, both = 0;
  const std::size_t max_attempts = 200 * n_conditioned;
  for (std::size_t attempt = 0; attempt < max_attempts && accepted < n_conditioned; ++attempt) {
    RngStream rng(seed, attempt);
    PointField field = sample_field(model.deployment(), window, rng, seed);
    const double m_first = rng.uniform();
    const double m_second = rng.uniform();
    field.points.push_back(FieldPoint{0.5 * d, 0.0, m_second});
    if (!tagged_transmits(field.points, -0.5 * d, 0.0, m_first, rng)) continue;
    ++accepted;
    field.points.back() = FieldPoint{-0.5 * d, 0.0, m_first};
    if (tagged_transmits(field.points, 0.5 * d, 0.0, m_second, rng)) ++both;
  }
  if (accepted < n_conditioned) {
    throw std::runtime_error("estimate_q: acceptance too rare (" + std::to_string(accepted) +
                             " of " + std::to_string(n_conditioned) + " target)");
  }
  return Estimate::from_bernoulli(both, accepted);
}

/// Empirical starvation: client at the window center, per-AP uplink fading
/// draws, counting replications where no AP is viable.
inline Estimate estimate_starvation(const DeploymentModel& dep, const UplinkModel& model,
                                    std::size_t n_reps, std::uint64_t seed,
                                    const Window* window_override = nullptr,
                                    const ReplicationSink& sink = {}) {
  if (n_reps < 1) throw std::invalid_argument("estimate_starvation: need at least one replication");
  const Window window = window_override ? *window_override : uplink_window(dep, model);

  std::size_t starved_count = 0;
  for (std::size_t rep = 0; rep < n_reps; ++rep) {
    RngStream rng(seed, rep);
    const PointField field = sample_field(dep, window, rng, seed);
    bool viable = false;
    for (const FieldPoint& p : field.points) {
      const double d = std::sqrt(p.x * p.x + p.y * p.y);
      if (rng.bernoulli(model.viability(d))) {
        viable = true;
        break;
      }
    }
    if (!viable) ++starved_count;
    if (sink) sink(rep, viable ? 0.0 : 1.0);
  }
  return Estimate::from_bernoulli(starved_count, n_reps);
}

/// Empirical P(uplink to the nearest AP is viable): the Monte Carlo twin
/// of deployment::uplink_marginal.
inline Estimate estimate_uplink_marginal(const DeploymentModel& dep, const UplinkModel& model,
                                         std::size_t n_reps, std::uint64_t seed) {
  if (n_reps < 1) throw std::invalid_argument("estimate_uplink_marginal: need replications");
  const double core = std::max(10.0 / std::sqrt(dep.density_m2),
                               viability_radius(model, 1e-3));
  const Window window{core, viability_radius(model, 1e-3)};

  std::size_t viable_count = 0;
  for (std::size_t rep = 0; rep < n_reps; ++rep) {
    RngStream rng(seed, rep);
    const PointField field = sample_field(dep, window, rng, seed);
    double best = std::numeric_limits<double>::infinity();
    for (const FieldPoint& p : field.points) {
      best = std::min(best, p.x * p.x + p.y * p.y);
    }
    if (!field.points.empty() && rng.bernoulli(model.viability(std::sqrt(best)))) {
      ++viable_count;
    }
  }
  return Estimate::from_bernoulli(viable_count, n_reps);
}

struct SinrCcdfEstimate {
  std::vector<double> beta;
  std::vector<Estimate> ccdf;
  std::size_t attempts = 0;
  std::size_t rejections = 0;
};

/// Empirical SINR CCDF at a client a distance r from its serving AP,
/// conditioned on the serving AP transmitting. Interference comes from
/// every other transmitting AP with AP-client pathloss and fresh fading.
inline SinrCcdfEstimate estimate_sinr_ccdf(double r, const std::vector<double>& beta_grid,
                                           const ContentionModel& model,
                                           const PathlossModel& ap_client_pathloss,
                                           double noise_w, std::size_t n_conditioned,
                                           std::uint64_t seed,
                                           const Window* window_override = nullptr) {
  Window window;
  if (window_override) {
    window = *window_override;
  } else {
    window = contention_window(model);
    window.core_half = std::max(window.core_half, 2.5 * r);
  }
  const double detect_radius = model.detection_cutoff();
  const double mu = model.mu();
  const double p_ap = model.p_ap();

  SinrCcdfEstimate result;
  result.beta = beta_grid;
  std::vector<std::size_t> exceed(beta_grid.size(), 0);

  std::size_t accepted = 0;
  std::size_t consecutive_rejections = 0;
  const std::size_t max_attempts = 500 * n_conditioned;
  std::size_t attempt = 0;
  for (; attempt < max_attempts && accepted < n_conditioned; ++attempt) {
    RngStream rng(seed, attempt);
    PointField field =
        r > 0.0 ? sample_field_excluding_ball(model.deployment(), window, r, 0.0, r, rng, seed)
                : sample_field(model.deployment(), window, rng, seed);

    // Serving AP at the origin; phase 1 decides its own transmission with
    // the center-only scan (its ordered-pair draws are disjoint from the
    // other APs' scans, so phase 2 can run afterwards).
    const double m0 = rng.uniform();
    bool blocked = false;
    for (const FieldPoint& p : field.points) {
      if (p.mark >= m0) continue;
      const double d = std::sqrt(p.x * p.x + p.y * p.y);
      if (d > detect_radius) continue;
      if (rng.bernoulli(model.detection(d))) {
        blocked = true;
        break;
      }
    }
    if (blocked) {
      if (++consecutive_rejections > 10000) {
        throw std::runtime_error(
            "estimate_sinr_ccdf: serving AP rejected 10000 times in a row after " +
            std::to_string(attempt) + " attempts (" + std::to_string(accepted) + " accepted)");
      }
      continue;
    }
    consecutive_rejections = 0;
    ++accepted;

    // Phase 2: full contention outcome for the interferer set.
    std::vector<FieldPoint> pts = field.points;
    pts.push_back(FieldPoint{0.0, 0.0, m0});
    const detail::BucketGrid grid(pts, field.window_half_width, detect_radius);
    double interference = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (!detail::point_transmits(pts, i, grid, model, detect_radius, rng)) continue;
      const double dx = pts[i].x - r, dy = pts[i].y;
      const double dist_to_client = std::sqrt(dx * dx + dy * dy);
      interference += p_ap * ap_client_pathloss.gain(dist_to_client) * rng.exponential(mu);
    }
    const double signal = p_ap * ap_client_pathloss.gain(r) * rng.exponential(mu);
    const double sinr = signal / (noise_w + interference);
    for (std::size_t b = 0; b < beta_grid.size(); ++b) {
      if (sinr > beta_grid[b]) ++exceed[b];
    }
  }
  if (accepted < n_conditioned) {
    throw std::runtime_error("estimate_sinr_ccdf: only " + std::to_string(accepted) +
                             " accepted outcomes of " + std::to_string(n_conditioned));
  }
  result.attempts = attempt;
  result.rejections = attempt - accepted;
  result.ccdf.reserve(beta_grid.size());
  for (std::size_t b = 0; b < beta_grid.size(); ++b) {
    result.ccdf.push_back(Estimate::from_bernoulli(exceed[b], accepted));
  }
  return result;
}

}  // namespace swifi
