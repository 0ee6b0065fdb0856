#pragma once

// Configuration boundary: the flat key=value file format, Table-style
// defaults, regulatory validation, canonical dump/fingerprint, and the
// builders that turn a validated config into model objects. All dBm/MHz
// conversions happen here; everything downstream sees SI units.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "swifi/csma.hpp"
#include "swifi/deployment.hpp"
#include "swifi/propagation.hpp"
#include "swifi/sinr.hpp"
#include "swifi/units.hpp"
#include "swifi/uplink.hpp"

namespace swifi {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Regulatory caps for fixed/portable TVWS devices.
inline constexpr double kMaxApPowerW = 4.0;
inline constexpr double kMaxClientPowerW = 0.1;
inline constexpr double kMaxApHeightM = 30.0;
inline constexpr double kMaxClientHeightM = 1.5;

/// Radio and regulatory parameters, SI units. Defaults are the reference
/// deployment: 600 MHz center, 6 MHz channel, -82 dBm CCA and uplink
/// thresholds, 0.1 W clients at 1 m, unit-mean exponential fading.
struct NetworkConfig {
  double p_ap_w = 4.0;
  double p_client_w = 0.1;
  double h_ap_m = 30.0;
  double h_client_m = 1.0;
  double cca_threshold_w = 6.309573444801932e-12;     // -82 dBm
  double uplink_threshold_w = 6.309573444801932e-12;  // -82 dBm
  double noise_density_dbm_hz = -173.97;
  double bandwidth_hz = 6e6;
  double frequency_hz = 600e6;
  FadingModel fading{1.0};
  PathlossVariant pathloss = PathlossVariant::dual_slope;
};

struct LoadedConfig {
  NetworkConfig net;
  DeploymentModel deployment = DeploymentModel::per_km2(1.0);
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has non-numeric value '" + value + "'");
  }
}

}  // namespace detail

/// Basic sanity plus the fixed/portable device caps. The caps can be
/// bypassed for what-if studies; the sanity checks cannot.
inline void validate_network_config(const NetworkConfig& net, bool override_regulatory = false) {
  if (!(net.p_ap_w > 0.0) || !(net.p_client_w > 0.0)) {
    throw ConfigError("config: transmit powers must be positive");
  }
  if (!(net.h_ap_m > 0.0) || !(net.h_client_m > 0.0)) {
    throw ConfigError("config: antenna heights must be positive");
  }
  if (!(net.frequency_hz > 0.0) || !(net.bandwidth_hz > 0.0)) {
    throw ConfigError("config: frequency and bandwidth must be positive");
  }
  if (!(net.cca_threshold_w > 0.0) || !(net.uplink_threshold_w > 0.0)) {
    throw ConfigError("config: detection thresholds must be positive");
  }
  if (override_regulatory) return;
  if (net.p_ap_w > kMaxApPowerW) {
    throw ConfigError("config: p_ap_w exceeds the 4 W fixed-device EIRP cap "
                      "(use --override-regulatory to bypass)");
  }
  if (net.p_client_w > kMaxClientPowerW) {
    throw ConfigError("config: p_client_w exceeds the 100 mW portable-device EIRP cap "
                      "(use --override-regulatory to bypass)");
  }
  if (net.h_ap_m > kMaxApHeightM) {
    throw ConfigError("config: h_ap_m exceeds the 30 m fixed-device height cap "
                      "(use --override-regulatory to bypass)");
  }
  if (net.h_client_m > kMaxClientHeightM) {
    throw ConfigError("config: h_client_m exceeds the 1.5 m portable-device height cap "
                      "(use --override-regulatory to bypass)");
  }
}

/// Parses a flat "key = value" file ('#' comments, blank lines allowed).
/// Unknown keys are errors; there is no silent typo tolerance. Regulatory
/// caps are enforced unless `override_regulatory` is set.
inline LoadedConfig parse_config_text(const std::string& text, bool override_regulatory = false) {
  NetworkConfig net;
  double density_per_km2 = 1.0;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, bool> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto strip = [](const std::string& s) {
      const auto from = s.find_first_not_of(" \t\r");
      const auto to = s.find_last_not_of(" \t\r");
      return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
    };
    if (strip(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (seen[key]) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    seen[key] = true;

    if (key == "frequency_mhz") {
      net.frequency_hz = detail::parse_double(key, value) * 1e6;
    } else if (key == "bandwidth_mhz") {
      net.bandwidth_hz = detail::parse_double(key, value) * 1e6;
    } else if (key == "p_ap_w") {
      net.p_ap_w = detail::parse_double(key, value);
    } else if (key == "p_client_w") {
      net.p_client_w = detail::parse_double(key, value);
    } else if (key == "h_ap_m") {
      net.h_ap_m = detail::parse_double(key, value);
    } else if (key == "h_client_m") {
      net.h_client_m = detail::parse_double(key, value);
    } else if (key == "cca_threshold_dbm") {
      net.cca_threshold_w = dbm_to_watts(detail::parse_double(key, value));
    } else if (key == "uplink_threshold_dbm") {
      net.uplink_threshold_w = dbm_to_watts(detail::parse_double(key, value));
    } else if (key == "noise_density_dbm_hz") {
      net.noise_density_dbm_hz = detail::parse_double(key, value);
    } else if (key == "fading_mu") {
      net.fading = FadingModel(detail::parse_double(key, value));
    } else if (key == "density_per_km2") {
      density_per_km2 = detail::parse_double(key, value);
    } else if (key == "pathloss_model") {
      if (value == "dual_slope") {
        net.pathloss = PathlossVariant::dual_slope;
      } else if (value == "suburban_hata") {
        net.pathloss = PathlossVariant::suburban_hata;
      } else {
        throw ConfigError("config: pathloss_model must be dual_slope or suburban_hata, got '" +
                          value + "'");
      }
    } else {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }

  if (!(density_per_km2 > 0.0)) {
    throw ConfigError("config: density_per_km2 must be positive");
  }
  validate_network_config(net, override_regulatory);

  LoadedConfig loaded;
  loaded.net = net;
  loaded.deployment = DeploymentModel::per_km2(density_per_km2);
  return loaded;
}

inline LoadedConfig load_config(const std::string& path, bool override_regulatory = false) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), override_regulatory);
}

/// Canonical serialization: fixed key order, %.12g values. load(dump(x))
/// reproduces x exactly.
inline std::string dump_config(const LoadedConfig& cfg) {
  std::ostringstream out;
  out << "frequency_mhz = " << detail::format_double(cfg.net.frequency_hz / 1e6) << "\n";
  out << "bandwidth_mhz = " << detail::format_double(cfg.net.bandwidth_hz / 1e6) << "\n";
  out << "density_per_km2 = " << detail::format_double(cfg.deployment.per_km2_value()) << "\n";
  out << "p_ap_w = " << detail::format_double(cfg.net.p_ap_w) << "\n";
  out << "p_client_w = " << detail::format_double(cfg.net.p_client_w) << "\n";
  out << "h_ap_m = " << detail::format_double(cfg.net.h_ap_m) << "\n";
  out << "h_client_m = " << detail::format_double(cfg.net.h_client_m) << "\n";
  out << "cca_threshold_dbm = " << detail::format_double(watts_to_dbm(cfg.net.cca_threshold_w))
      << "\n";
  out << "uplink_threshold_dbm = "
      << detail::format_double(watts_to_dbm(cfg.net.uplink_threshold_w)) << "\n";
  out << "noise_density_dbm_hz = " << detail::format_double(cfg.net.noise_density_dbm_hz) << "\n";
  out << "fading_mu = " << detail::format_double(cfg.net.fading.mu) << "\n";
  out << "pathloss_model = "
      << (cfg.net.pathloss == PathlossVariant::dual_slope ? "dual_slope" : "suburban_hata")
      << "\n";
  return out.str();
}

/// FNV-1a hash of the canonical dump; joins sweep rows to their config.
inline std::string config_fingerprint(const LoadedConfig& cfg) {
  const std::string dump = dump_config(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Total noise power over the channel, watts.
inline double noise_power_w(const NetworkConfig& net) {
  return dbm_to_watts(net.noise_density_dbm_hz + 10.0 * std::log10(net.bandwidth_hz));
}

inline PathlossModel make_ap_ap_pathloss(const NetworkConfig& net) {
  if (net.pathloss == PathlossVariant::suburban_hata) return PathlossModel::suburban_hata();
  return PathlossModel::dual_slope(
      LinkGeometry::from_frequency(net.frequency_hz, net.h_ap_m, net.h_ap_m));
}

inline PathlossModel make_ap_client_pathloss(const NetworkConfig& net) {
  if (net.pathloss == PathlossVariant::suburban_hata) return PathlossModel::suburban_hata();
  return PathlossModel::dual_slope(
      LinkGeometry::from_frequency(net.frequency_hz, net.h_ap_m, net.h_client_m));
}

inline UplinkModel make_uplink_model(const NetworkConfig& net) {
  return UplinkModel(net.p_client_w, net.uplink_threshold_w, make_ap_client_pathloss(net),
                     net.fading.mu);
}

inline ContentionModel make_contention_model(const NetworkConfig& net,
                                             const DeploymentModel& deployment) {
  return ContentionModel(net.p_ap_w, net.cca_threshold_w, make_ap_ap_pathloss(net),
                         net.fading.mu, deployment);
}

inline SinrModel make_sinr_model(const NetworkConfig& net, const DeploymentModel& deployment,
                                 std::size_t q_points = 200) {
  return SinrModel(make_contention_model(net, deployment), make_ap_client_pathloss(net),
                   noise_power_w(net), net.p_ap_w, net.fading.mu, q_points);
}

}  // namespace swifi
