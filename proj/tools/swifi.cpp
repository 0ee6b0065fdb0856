// swifi: analytical performance of a CSMA/CA network in TV white space
// channels, with a Monte Carlo cross-check and a channel-budget planner.
//
// Subcommands:
//   analyze    metrics for one configuration (optionally r-indexed curves)
//   sweep      metric grid over density / AP power / AP height, CSV
//   simulate   Monte Carlo estimates with standard errors, CSV
//   validate   analytic vs Monte Carlo side-by-side with pass/fail gates
//   plan       channel budgeting for a household demand map
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
// 3 validation failure.

#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "swifi/swifi.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// RFC 4180: CRLF record separator, '.' decimal, UTF-8.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw swifi::ConfigError("cannot open output file " + path);
    }
  }

  void row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) line += ',';
      line += fields[i];
    }
    line += "\r\n";
    if (file_.is_open()) {
      file_ << line;
    } else {
      std::cout << line;
    }
  }

 private:
  std::ofstream file_;
};

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  bool override_regulatory = false;
  std::optional<double> density_per_km2;
  std::optional<double> p_ap_w;
  std::optional<double> h_ap_m;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "configuration file (key = value)");
  cmd->add_option("--out", opts.out_path, "output CSV path (default: stdout)");
  cmd->add_flag("--override-regulatory", opts.override_regulatory,
                "bypass the fixed/portable device caps");
  cmd->add_option("--density-per-km2", opts.density_per_km2, "override AP density");
  cmd->add_option("--p-ap-w", opts.p_ap_w, "override AP transmit power, W");
  cmd->add_option("--h-ap-m", opts.h_ap_m, "override AP height, m");
}

swifi::LoadedConfig resolve_config(const CommonOptions& opts) {
  swifi::LoadedConfig cfg = opts.config_path.empty()
                                ? swifi::parse_config_text("", opts.override_regulatory)
                                : swifi::load_config(opts.config_path, opts.override_regulatory);
  if (opts.density_per_km2) cfg.deployment = swifi::DeploymentModel::per_km2(*opts.density_per_km2);
  if (opts.p_ap_w) cfg.net.p_ap_w = *opts.p_ap_w;
  if (opts.h_ap_m) cfg.net.h_ap_m = *opts.h_ap_m;
  swifi::validate_network_config(cfg.net, opts.override_regulatory);
  return cfg;
}

struct ConfigMetrics {
  double mean_pt = 0.0;
  std::optional<double> coverage_m;
  double starvation = 0.0;
  double uplink_marginal = 0.0;
  double throughput_bps_hz = 0.0;
  double ase_bps_hz_km2 = 0.0;
};

ConfigMetrics compute_metrics(const swifi::LoadedConfig& cfg, bool with_throughput) {
  ConfigMetrics m;
  const auto uplink = swifi::make_uplink_model(cfg.net);
  const auto contention = swifi::make_contention_model(cfg.net, cfg.deployment);
  m.coverage_m = swifi::coverage_range(uplink);
  m.starvation = swifi::starvation_probability(cfg.deployment, uplink);
  m.uplink_marginal = swifi::uplink_marginal(cfg.deployment, uplink);
  m.mean_pt = swifi::mean_transmission_probability(contention, uplink);
  if (with_throughput) {
    const auto sinr = swifi::make_sinr_model(cfg.net, cfg.deployment);
    m.throughput_bps_hz = swifi::ap_throughput(sinr, uplink);
    m.ase_bps_hz_km2 = m.throughput_bps_hz * cfg.deployment.per_km2_value();
  }
  return m;
}

// ---------------------------------------------------------------- analyze

int run_analyze(const CommonOptions& opts, bool curve, double r_max, std::size_t r_points) {
  const auto cfg = resolve_config(opts);
  const std::string fp = swifi::config_fingerprint(cfg);
  const double bw_mhz = cfg.net.bandwidth_hz / 1e6;

  if (curve) {
    const auto uplink = swifi::make_uplink_model(cfg.net);
    const auto contention = swifi::make_contention_model(cfg.net, cfg.deployment);
    const auto sinr = swifi::make_sinr_model(cfg.net, cfg.deployment);
    if (r_max <= 0.0) {
      const auto cov = swifi::coverage_range(uplink);
      r_max = cov ? 2.0 * *cov : 1000.0;
    }
    CsvWriter csv(opts.out_path);
    csv.row({"r_m", "uplink_viability", "transmission_probability", "expected_rate_bps_hz",
             "throughput_mbps", "viable_throughput_mbps", "fingerprint"});
    for (std::size_t i = 1; i <= r_points; ++i) {
      const double r = r_max * static_cast<double>(i) / static_cast<double>(r_points);
      const double pu = uplink.viability(r);
      const double pt = swifi::transmission_probability(r, contention);
      const double rate = sinr.expected_rate(r);
      csv.row({fmt(r), fmt(pu), fmt(pt), fmt(rate), fmt(rate * bw_mhz),
               fmt(rate * bw_mhz * pu), fp});
    }
    return kExitOk;
  }

  const ConfigMetrics m = compute_metrics(cfg, true);
  std::cout << "configuration " << fp << "\n"
            << "  density:            " << fmt(cfg.deployment.per_km2_value()) << " AP/km^2\n"
            << "  AP power / height:  " << fmt(cfg.net.p_ap_w) << " W / " << fmt(cfg.net.h_ap_m)
            << " m\n"
            << "  noise power:        " << fmt(swifi::watts_to_dbm(swifi::noise_power_w(cfg.net)))
            << " dBm\n"
            << "  mean p_T:           " << fmt(m.mean_pt) << "\n"
            << "  coverage range:     " << (m.coverage_m ? fmt(*m.coverage_m) + " m" : "none")
            << "\n"
            << "  uplink marginal:    " << fmt(m.uplink_marginal) << "\n"
            << "  starvation:         " << fmt(m.starvation) << "\n"
            << "  AP throughput:      " << fmt(m.throughput_bps_hz) << " bit/s/Hz ("
            << fmt(m.throughput_bps_hz * bw_mhz) << " Mbps)\n"
            << "  ASE:                " << fmt(m.ase_bps_hz_km2) << " bit/s/Hz/km^2 ("
            << fmt(m.ase_bps_hz_km2 * bw_mhz) << " Mbps/km^2)\n";

  if (!opts.out_path.empty()) {
    CsvWriter csv(opts.out_path);
    csv.row({"fingerprint", "density_per_km2", "p_ap_w", "h_ap_m", "mean_pt", "coverage_range_m",
             "starvation", "uplink_marginal", "ap_throughput_bps_hz", "ap_throughput_mbps",
             "ase_bps_hz_km2", "ase_mbps_km2"});
    csv.row({fp, fmt(cfg.deployment.per_km2_value()), fmt(cfg.net.p_ap_w), fmt(cfg.net.h_ap_m),
             fmt(m.mean_pt), m.coverage_m ? fmt(*m.coverage_m) : "none", fmt(m.starvation),
             fmt(m.uplink_marginal), fmt(m.throughput_bps_hz), fmt(m.throughput_bps_hz * bw_mhz),
             fmt(m.ase_bps_hz_km2), fmt(m.ase_bps_hz_km2 * bw_mhz)});
  }
  return kExitOk;
}

// ------------------------------------------------------------------ sweep

int run_sweep(const CommonOptions& opts, std::vector<double> densities, std::vector<double> powers,
              std::vector<double> heights, const std::string& metrics) {
  const auto base = resolve_config(opts);
  if (densities.empty()) densities = {base.deployment.per_km2_value()};
  if (powers.empty()) powers = {base.net.p_ap_w};
  if (heights.empty()) heights = {base.net.h_ap_m};
  const bool want_throughput = metrics.find("throughput") != std::string::npos ||
                               metrics.find("ase") != std::string::npos;

  struct Row {
    swifi::LoadedConfig cfg;
    ConfigMetrics metrics;
  };

  std::vector<swifi::LoadedConfig> grid;
  for (double lam : densities) {
    for (double p : powers) {
      for (double h : heights) {
        swifi::LoadedConfig cfg = base;
        cfg.deployment = swifi::DeploymentModel::per_km2(lam);
        cfg.net.p_ap_w = p;
        cfg.net.h_ap_m = h;
        swifi::validate_network_config(cfg.net, opts.override_regulatory);
        grid.push_back(cfg);
      }
    }
  }

  // Fan out across grid points with bounded concurrency. Rows are written
  // strictly in grid order as the oldest in-flight point completes, so a
  // numerical failure still leaves every earlier row on disk.
  CsvWriter csv(opts.out_path);
  csv.row({"fingerprint", "density_per_km2", "p_ap_w", "h_ap_m", "mean_pt", "coverage_range_m",
           "starvation", "uplink_marginal", "ap_throughput_bps_hz", "ap_throughput_mbps",
           "ase_bps_hz_km2", "ase_mbps_km2"});
  const double bw_mhz = base.net.bandwidth_hz / 1e6;

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::deque<std::future<ConfigMetrics>> inflight;
  std::size_t next = 0, written = 0;
  while (written < grid.size()) {
    while (next < grid.size() && inflight.size() < workers) {
      const swifi::LoadedConfig cfg = grid[next++];
      inflight.push_back(std::async(std::launch::async, [cfg, want_throughput] {
        return compute_metrics(cfg, want_throughput);
      }));
    }
    const ConfigMetrics m = inflight.front().get();
    inflight.pop_front();
    const auto& cfg = grid[written++];
    csv.row({swifi::config_fingerprint(cfg), fmt(cfg.deployment.per_km2_value()),
             fmt(cfg.net.p_ap_w), fmt(cfg.net.h_ap_m), fmt(m.mean_pt),
             m.coverage_m ? fmt(*m.coverage_m) : "none", fmt(m.starvation),
             fmt(m.uplink_marginal), want_throughput ? fmt(m.throughput_bps_hz) : "",
             want_throughput ? fmt(m.throughput_bps_hz * bw_mhz) : "",
             want_throughput ? fmt(m.ase_bps_hz_km2) : "",
             want_throughput ? fmt(m.ase_bps_hz_km2 * bw_mhz) : ""});
  }
  return kExitOk;
}

// --------------------------------------------------------------- simulate

int run_simulate(const CommonOptions& opts, const std::string& metric, double r, double d,
                 std::vector<double> beta_db, std::size_t reps, std::uint64_t seed,
                 const std::string& dump_path) {
  const auto cfg = resolve_config(opts);
  const std::string fp = swifi::config_fingerprint(cfg);
  const auto contention = swifi::make_contention_model(cfg.net, cfg.deployment);
  const auto uplink = swifi::make_uplink_model(cfg.net);

  std::ofstream dump;
  swifi::ReplicationSink sink;
  if (!dump_path.empty()) {
    dump.open(dump_path, std::ios::binary);
    if (!dump) throw swifi::ConfigError("cannot open dump file " + dump_path);
    dump << "rep,value\r\n";
    sink = [&dump](std::size_t rep, double value) {
      dump << rep << ',' << fmt(value) << "\r\n";
    };
  }

  CsvWriter csv(opts.out_path);
  csv.row({"metric", "param_name", "param_value", "value", "std_error", "n", "seed",
           "fingerprint"});
  const auto emit = [&](const std::string& name, const std::string& pname, double pval,
                        const swifi::Estimate& e) {
    csv.row({name, pname, fmt(pval), fmt(e.value), fmt(e.std_error), std::to_string(e.n),
             std::to_string(seed), fp});
  };

  if (metric == "pt") {
    emit("pt", "r_m", r, swifi::estimate_pt(r, contention, reps, seed, nullptr, sink));
  } else if (metric == "q") {
    if (d <= 0.0) d = 2.0 * contention.detection_radius(1e-3);
    emit("q", "d_m", d, swifi::estimate_q(d, contention, reps, seed));
  } else if (metric == "starvation") {
    emit("starvation", "", 0.0,
         swifi::estimate_starvation(cfg.deployment, uplink, reps, seed, nullptr, sink));
  } else if (metric == "uplink_marginal") {
    emit("uplink_marginal", "", 0.0,
         swifi::estimate_uplink_marginal(cfg.deployment, uplink, reps, seed));
  } else if (metric == "sinr") {
    if (beta_db.empty()) beta_db = {0.0, 5.0, 10.0};
    std::vector<double> beta;
    beta.reserve(beta_db.size());
    for (double b : beta_db) beta.push_back(swifi::db_to_linear(b));
    const auto est = swifi::estimate_sinr_ccdf(r, beta, contention,
                                               swifi::make_ap_client_pathloss(cfg.net),
                                               swifi::noise_power_w(cfg.net), reps, seed);
    for (std::size_t i = 0; i < beta.size(); ++i) {
      emit("sinr_ccdf", "beta_db", beta_db[i], est.ccdf[i]);
    }
  } else {
    throw CLI::ValidationError("--metric must be pt, q, starvation, uplink_marginal or sinr");
  }
  return kExitOk;
}

// --------------------------------------------------------------- validate

struct ToleranceProfile {
  double pt, starvation, marginal, q, sinr;
};

int run_validate(const CommonOptions& opts, const std::string& profile_name, double r_sinr,
                 std::vector<double> r_list, std::size_t reps, std::uint64_t seed) {
  // "strict" gates at the Monte Carlo consistency level of the model
  // itself; "paper" allows the looser spread expected from the CCDF
  // approximation and propagation-constant uncertainty.
  ToleranceProfile tol{0.03, 0.01, 0.01, 0.03, 0.05};
  if (profile_name == "paper") {
    tol = {0.05, 0.02, 0.02, 0.05, 0.08};
  } else if (profile_name != "strict") {
    throw CLI::ValidationError("--tolerance-profile must be strict or paper");
  }

  const auto cfg = resolve_config(opts);
  const auto contention = swifi::make_contention_model(cfg.net, cfg.deployment);
  const auto uplink = swifi::make_uplink_model(cfg.net);

  bool all_pass = true;
  std::vector<std::vector<std::string>> rows;
  const auto record = [&](const std::string& name, double analytic, double mc, double tolerance) {
    const double diff = std::fabs(analytic - mc);
    const bool pass = diff <= tolerance;
    all_pass &= pass;
    std::cout << (pass ? "PASS " : "FAIL ") << name << ": analytic=" << fmt(analytic)
              << " mc=" << fmt(mc) << " diff=" << fmt(diff) << " tol=" << fmt(tolerance) << "\n";
    rows.push_back({name, fmt(analytic), fmt(mc), fmt(diff), fmt(tolerance), pass ? "pass" : "fail"});
  };

  if (r_list.empty()) r_list = {100.0, 300.0, 700.0};
  for (double r : r_list) {
    const auto est = swifi::estimate_pt(r, contention, reps, seed);
    record("pt(r=" + fmt(r) + ")", swifi::transmission_probability(r, contention), est.value,
           tol.pt);
  }

  record("starvation", swifi::starvation_probability(cfg.deployment, uplink),
         swifi::estimate_starvation(cfg.deployment, uplink, reps * 10, seed).value,
         tol.starvation);

  record("uplink_marginal", swifi::uplink_marginal(cfg.deployment, uplink),
         swifi::estimate_uplink_marginal(cfg.deployment, uplink, reps * 10, seed).value,
         tol.marginal);

  // Coverage is uplink-limited, so it cannot depend on AP power.
  {
    swifi::NetworkConfig alt = cfg.net;
    alt.p_ap_w = alt.p_ap_w > 1.0 ? 0.1 : 4.0;
    const auto cov_a = swifi::coverage_range(uplink);
    const auto cov_b = swifi::coverage_range(swifi::make_uplink_model(alt));
    const bool same = cov_a.has_value() == cov_b.has_value() &&
                      (!cov_a || *cov_a == *cov_b);
    all_pass &= same;
    std::cout << (same ? "PASS " : "FAIL ") << "coverage_independent_of_p_ap: "
              << (cov_a ? fmt(*cov_a) + " m" : "none") << "\n";
    rows.push_back({"coverage_independent_of_p_ap", cov_a ? fmt(*cov_a) : "none",
                    cov_b ? fmt(*cov_b) : "none", "0", "0", same ? "pass" : "fail"});
  }

  // Conditioned estimators are only meaningful when acceptance is not rare.
  const double p_iso = swifi::isolated_transmission_probability(contention);
  if (p_iso >= 0.05) {
    const double d = 2.0 * contention.detection_radius(1e-3);
    const auto est = swifi::estimate_q(d, contention, reps, seed);
    record("q(d=" + fmt(d) + ")", swifi::concurrent_transmission_probability(d, contention),
           est.value, tol.q);

    const auto sinr_model = swifi::make_sinr_model(cfg.net, cfg.deployment);
    const std::vector<double> beta = {1.0, swifi::db_to_linear(5.0), swifi::db_to_linear(10.0)};
    const auto mc = swifi::estimate_sinr_ccdf(r_sinr, beta, contention,
                                              swifi::make_ap_client_pathloss(cfg.net),
                                              swifi::noise_power_w(cfg.net), reps, seed);
    const auto analytic = sinr_model.sinr_ccdf_curve(beta, r_sinr);
    for (std::size_t i = 0; i < beta.size(); ++i) {
      record("sinr_ccdf(beta=" + fmt(swifi::linear_to_db(beta[i])) + "dB)", analytic.values[i],
             mc.ccdf[i].value, tol.sinr);
    }
  } else {
    std::cout << "SKIP q and sinr checks: isolated transmission probability " << fmt(p_iso)
              << " makes conditioning impractical at this configuration\n";
  }

  if (!opts.out_path.empty()) {
    CsvWriter csv(opts.out_path);
    csv.row({"check", "analytic", "mc", "diff", "tolerance", "status"});
    for (const auto& row : rows) csv.row(row);
  }
  if (!all_pass) throw ValidationFailure("validate: at least one check failed");
  return kExitOk;
}

// ------------------------------------------------------------------- plan

int run_plan(const CommonOptions& opts, const std::string& households_path,
             std::size_t households_count, double area_km2, double rate_mbps,
             int available_channels, double channel_bw_mhz, double per_channel_override) {
  const auto cfg = resolve_config(opts);

  swifi::PlanInput input;
  input.per_household_rate_mbps = rate_mbps;
  input.available_channels = available_channels;
  input.channel_bandwidth_mhz =
      channel_bw_mhz > 0.0 ? channel_bw_mhz : cfg.net.bandwidth_hz / 1e6;

  if (!households_path.empty()) {
    const auto data = swifi::load_households(households_path);
    input.households = data.locations.size();
    input.locations = data.locations;
    input.area_km2 = area_km2 > 0.0 ? area_km2 : data.bbox_area_km2;
  } else {
    input.households = households_count;
    input.area_km2 = area_km2;
  }

  const double required = swifi::required_ase_mbps_km2(input);
  double per_channel = per_channel_override;
  if (per_channel <= 0.0) {
    const auto sinr = swifi::make_sinr_model(cfg.net, cfg.deployment);
    const auto uplink = swifi::make_uplink_model(cfg.net);
    per_channel = swifi::area_spectral_efficiency(sinr, uplink) * input.channel_bandwidth_mhz;
  }
  const auto plan = swifi::make_plan(required, per_channel, input.available_channels);

  std::cout << "households:        " << input.households << "\n"
            << "area:              " << fmt(input.area_km2) << " km^2\n"
            << "required ASE:      " << fmt(plan.required_ase_mbps_km2) << " Mbps/km^2\n"
            << "per-channel ASE:   " << fmt(plan.per_channel_ase_mbps_km2) << " Mbps/km^2\n"
            << "channels needed:   " << plan.channels_needed << " of " << input.available_channels
            << "\n"
            << "feasible:          " << (plan.feasible ? "yes" : "no");
  if (!plan.feasible) std::cout << " (short by " << plan.shortfall << ")";
  std::cout << "\n";

  if (!opts.out_path.empty()) {
    CsvWriter csv(opts.out_path);
    csv.row({"households", "area_km2", "rate_mbps", "required_ase_mbps_km2",
             "per_channel_ase_mbps_km2", "channels_needed", "available_channels", "feasible",
             "fingerprint"});
    csv.row({std::to_string(input.households), fmt(input.area_km2), fmt(rate_mbps),
             fmt(plan.required_ase_mbps_km2), fmt(plan.per_channel_ase_mbps_km2),
             std::to_string(plan.channels_needed), std::to_string(input.available_channels),
             plan.feasible ? "yes" : "no", swifi::config_fingerprint(cfg)});
  }
  return plan.feasible ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Super Wi-Fi TVWS network performance calculator"};
  app.require_subcommand(1);

  CommonOptions analyze_opts, sweep_opts, sim_opts, val_opts, plan_opts;

  auto* analyze = app.add_subcommand("analyze", "metrics for a single configuration");
  add_common(analyze, analyze_opts);
  bool analyze_curve = false;
  double analyze_rmax = 0.0;
  std::size_t analyze_rpoints = 50;
  analyze->add_flag("--curve", analyze_curve, "emit r-indexed metric curve CSV");
  analyze->add_option("--r-max", analyze_rmax, "curve upper distance, m (default: 2x coverage)");
  analyze->add_option("--r-points", analyze_rpoints, "curve sample count");

  auto* sweep = app.add_subcommand("sweep", "metric grid over density, power, height");
  add_common(sweep, sweep_opts);
  std::vector<double> sweep_density, sweep_power, sweep_height;
  std::string sweep_metrics = "pt,coverage,starvation,throughput,ase";
  sweep->add_option("--densities-per-km2", sweep_density, "density axis values");
  sweep->add_option("--p-ap-values-w", sweep_power, "AP power axis values");
  sweep->add_option("--h-ap-values-m", sweep_height, "AP height axis values");
  sweep->add_option("--metrics", sweep_metrics, "metrics to compute");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates");
  add_common(simulate, sim_opts);
  std::string sim_metric = "pt", sim_dump;
  double sim_r = 200.0, sim_d = 0.0;
  std::vector<double> sim_beta_db;
  std::size_t sim_reps = 10000;
  std::uint64_t sim_seed = 1;
  simulate->add_option("--metric", sim_metric, "pt | q | starvation | uplink_marginal | sinr");
  simulate->add_option("--r", sim_r, "AP-client distance, m");
  simulate->add_option("--d", sim_d, "AP-AP distance for q, m");
  simulate->add_option("--beta-db", sim_beta_db, "SINR thresholds, dB");
  simulate->add_option("--reps", sim_reps, "replications (conditioned count for q/sinr)");
  simulate->add_option("--seed", sim_seed, "RNG seed");
  simulate->add_option("--dump", sim_dump, "per-replication raw dump CSV");

  auto* validate = app.add_subcommand("validate", "analytic vs Monte Carlo report");
  add_common(validate, val_opts);
  std::string val_profile = "strict";
  double val_r_sinr = 200.0;
  std::vector<double> val_r_list;
  std::size_t val_reps = 10000;
  std::uint64_t val_seed = 1;
  validate->add_option("--tolerance-profile", val_profile, "strict | paper");
  validate->add_option("--r", val_r_list, "distances for the p_T check, m");
  validate->add_option("--r-sinr", val_r_sinr, "distance for the SINR check, m");
  validate->add_option("--reps", val_reps, "replications");
  validate->add_option("--seed", val_seed, "RNG seed");

  auto* plan = app.add_subcommand("plan", "channel budget for a demand map");
  add_common(plan, plan_opts);
  std::string plan_households;
  std::size_t plan_count = 0;
  double plan_area = 0.0, plan_rate = 10.0, plan_bw = 0.0, plan_per_channel = 0.0;
  int plan_channels = 37;
  plan->add_option("--households", plan_households, "household CSV (id,lat,lon)");
  plan->add_option("--households-count", plan_count, "household count (alternative to CSV)");
  plan->add_option("--area-km2", plan_area, "service area; overrides the bounding-box estimate");
  plan->add_option("--rate-mbps", plan_rate, "per-household rate");
  plan->add_option("--available-channels", plan_channels, "channels available at the site");
  plan->add_option("--channel-bandwidth-mhz", plan_bw, "channel width (default: config bandwidth)");
  plan->add_option("--per-channel-ase-mbps-km2", plan_per_channel,
                   "per-channel area throughput override (default: computed from the model)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (analyze->parsed()) {
      return run_analyze(analyze_opts, analyze_curve, analyze_rmax, analyze_rpoints);
    }
    if (sweep->parsed()) {
      return run_sweep(sweep_opts, sweep_density, sweep_power, sweep_height, sweep_metrics);
    }
    if (simulate->parsed()) {
      return run_simulate(sim_opts, sim_metric, sim_r, sim_d, sim_beta_db, sim_reps, sim_seed,
                          sim_dump);
    }
    if (validate->parsed()) {
      return run_validate(val_opts, val_profile, val_r_sinr, val_r_list, val_reps, val_seed);
    }
    if (plan->parsed()) {
      return run_plan(plan_opts, plan_households, plan_count, plan_area, plan_rate, plan_channels,
                      plan_bw, plan_per_channel);
    }
  } catch (const ValidationFailure& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const swifi::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const swifi::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
