#pragma once

// Rural-broadband sizing: aggregate household demand into a required area
// throughput, divide by what one channel of the modeled network delivers,
// and budget TVWS channels.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swifi/sinr.hpp"

namespace swifi {

struct LatLon {
  double lat;  // WGS-84 decimal degrees
  double lon;
};

struct PlanInput {
  std::size_t households = 0;
  double area_km2 = 0.0;
  double per_household_rate_mbps = 0.0;
  int available_channels = 0;
  double channel_bandwidth_mhz = 6.0;
  std::vector<LatLon> locations;  // optional; when present, households == size
};

struct PlanResult {
  double required_ase_mbps_km2 = 0.0;
  double per_channel_ase_mbps_km2 = 0.0;
  int channels_needed = 0;
  bool feasible = false;
  int shortfall = 0;  // channels missing when infeasible
};

/// households * rate / area, Mbps/km^2.
inline double required_ase_mbps_km2(const PlanInput& input) {
  if (!(input.area_km2 > 0.0)) throw std::domain_error("required_ase: area must be positive");
  return static_cast<double>(input.households) * input.per_household_rate_mbps / input.area_km2;
}

/// Channel budget from a known per-channel area throughput. Demand must be
/// met, so the count is a ceiling, never a rounding.
inline PlanResult make_plan(double required_mbps_km2, double per_channel_mbps_km2,
                            int available_channels) {
  if (!(per_channel_mbps_km2 > 0.0)) {
    throw std::domain_error("make_plan: per-channel ASE must be positive");
  }
  PlanResult result;
  result.required_ase_mbps_km2 = required_mbps_km2;
  result.per_channel_ase_mbps_km2 = per_channel_mbps_km2;
  result.channels_needed =
      required_mbps_km2 <= 0.0
          ? 0
          : static_cast<int>(std::ceil(required_mbps_km2 / per_channel_mbps_km2 - 1e-9));
  result.feasible = result.channels_needed <= available_channels;
  result.shortfall = result.feasible ? 0 : result.channels_needed - available_channels;
  return result;
}

/// Per-channel ASE from the network model (bit/s/Hz/km^2 times channel
/// bandwidth), then the channel budget.
template <class Uplink>
PlanResult channels_needed(double required_mbps_km2, const SinrModel& model,
                           const Uplink& uplink, double channel_bandwidth_mhz,
                           int available_channels) {
  const double ase = area_spectral_efficiency(model, uplink);  // bit/s/Hz/km^2
  const double per_channel = ase * channel_bandwidth_mhz;      // Mbps/km^2
  return make_plan(required_mbps_km2, per_channel, available_channels);
}

struct HouseholdData {
  std::vector<LatLon> locations;
  double bbox_area_km2 = 0.0;  // equirectangular bounding-box estimate
};

/// Reads a household CSV with header "id,lat,lon". Duplicate coordinates
/// are allowed (multi-dwelling units). Malformed rows report their line
/// number; a file without data rows is an error.
inline HouseholdData load_households(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_households: cannot open " + path);

  const auto strip = [](std::string s) {
    const auto from = s.find_first_not_of(" \t\r");
    const auto to = s.find_last_not_of(" \t\r");
    return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
  };

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw std::domain_error("load_households: empty file");
  ++line_no;
  {
    std::stringstream header(line);
    std::string c1, c2, c3;
    std::getline(header, c1, ',');
    std::getline(header, c2, ',');
    std::getline(header, c3, ',');
    if (strip(c1) != "id" || strip(c2) != "lat" || strip(c3) != "lon") {
      throw std::runtime_error("load_households: expected header id,lat,lon");
    }
  }

  HouseholdData data;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    std::stringstream row(line);
    std::string id, lat_s, lon_s, rest;
    if (!std::getline(row, id, ',') || !std::getline(row, lat_s, ',') ||
        !std::getline(row, lon_s, ',')) {
      throw std::runtime_error("load_households: malformed row at line " +
                               std::to_string(line_no));
    }
    if (std::getline(row, rest, ',')) {
      throw std::runtime_error("load_households: too many fields at line " +
                               std::to_string(line_no));
    }
    try {
      std::size_t used = 0;
      const double lat = std::stod(strip(lat_s), &used);
      if (used != strip(lat_s).size()) throw std::invalid_argument("trailing");
      const double lon = std::stod(strip(lon_s), &used);
      if (used != strip(lon_s).size()) throw std::invalid_argument("trailing");
      if (std::fabs(lat) > 90.0 || std::fabs(lon) > 180.0) throw std::out_of_range("range");
      data.locations.push_back(LatLon{lat, lon});
    } catch (const std::exception&) {
      throw std::runtime_error("load_households: bad coordinates at line " +
                               std::to_string(line_no));
    }
  }
  if (data.locations.empty()) throw std::domain_error("load_households: no data rows");

  double lat_lo = 90.0, lat_hi = -90.0, lon_lo = 180.0, lon_hi = -180.0;
  for (const auto& p : data.locations) {
    lat_lo = std::min(lat_lo, p.lat);
    lat_hi = std::max(lat_hi, p.lat);
    lon_lo = std::min(lon_lo, p.lon);
    lon_hi = std::max(lon_hi, p.lon);
  }
  constexpr double kEarthRadiusKm = 6371.0088;
  constexpr double kDegToRad = M_PI / 180.0;
  const double mid_lat = 0.5 * (lat_lo + lat_hi) * kDegToRad;
  const double dy = (lat_hi - lat_lo) * kDegToRad * kEarthRadiusKm;
  const double dx = (lon_hi - lon_lo) * kDegToRad * kEarthRadiusKm * std::cos(mid_lat);
  data.bbox_area_km2 = dx * dy;
  return data;
}

}  // namespace swifi
