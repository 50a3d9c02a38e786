#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "topdc/bandwidth.hpp"
#include "topdc/phasematch.hpp"

namespace topdc {

enum class BandwidthSource { injected, analytic, numeric };
std::string to_string(BandwidthSource s);
BandwidthSource parse_bandwidth_source(const std::string& s);

struct WaveguideBandwidth {
  BandwidthSource source = BandwidthSource::analytic;
  std::optional<double> tau_inv;  // injected, s^-1
  std::optional<double> beta2;    // analytic; taken from the model when empty
  std::optional<FrequencyBounds> bounds;
  BandwidthQuadratureOptions quadrature;
};

struct WaveguideScenario {
  WaveguideSpec spec;
  // Band frequencies. Missing ones follow from energy conservation where possible.
  std::map<std::string, double> omega;
  WaveguideBandwidth bandwidth;
  // Doubly stimulated mismatch kbar_P - 2 kbar_S - kbar_Gbar (rad/m). Computed from
  // the models when empty, else taken as phase matched.
  std::optional<double> mismatch;
};

struct RingScenario {
  RingSpec spec;
  std::optional<double> pump_detuning;  // from the hot pump resonance; optimal when empty
  double seed_detuning = 0.0;           // from the hot seed resonance
};

struct Scenario {
  std::string name;
  Process process = Process::sp_degenerate;
  double pump_power = 0.0;
  double seed_power = 0.0;
  std::variant<WaveguideScenario, RingScenario> device;

  bool is_ring() const { return std::holds_alternative<RingScenario>(device); }
};

struct RateResult {
  std::string scenario;
  Process process = Process::sp_degenerate;
  std::string device;
  double rate = 0.0;              // s^-1
  double efficiency = 0.0;        // rate / R_P
  double pump_photon_rate = 0.0;  // R_P = P_P / (hbar omega_P)
  double vacuum_power = 0.0;      // W; effective value for stimulated processes
  double tau_inv = 0.0;           // s^-1
  double gamma = 0.0;             // |gamma| used, (W m)^-1
  BandwidthMethod bandwidth_method = BandwidthMethod::analytic;
  std::map<std::string, double> enhancement;  // |F_J|^2
  std::map<std::string, double> diagnostics;
  std::vector<std::string> notes;
};

// |F_J|^2 = (1/L) 2 v eta Gamma / (delta^2 + Gamma^2), delta in rad/s.
double field_enhancement(const RingSpec& ring, const std::string& band_label, double detuning);

RateResult rate_sp_wg(const Scenario& s);
RateResult rate_st_wg(const Scenario& s);
RateResult rate_dst_wg(const Scenario& s);
RateResult rate_sp_ring_degenerate(const Scenario& s);
RateResult rate_sp_ring_nondegenerate(const Scenario& s);
RateResult rate_st_ring(const Scenario& s);
RateResult rate_dst_ring(const Scenario& s);

// Dispatch on device and process.
RateResult evaluate(const Scenario& s);

enum class ScalingParameter { length, circumference, quality, quality_scale, pump_power, seed_power };
std::string to_string(ScalingParameter p);

struct ScalingTarget {
  ScalingParameter parameter = ScalingParameter::length;
  std::string band;  // for `quality`
};
ScalingTarget parse_scaling_target(const std::string& s);  // L, Lring, Q_<band>, Q_all, P_P, P_S
std::string to_string(const ScalingTarget& t);

// Copy of `base` with the parameter set to `value`. quality_scale multiplies every Q.
Scenario with_parameter(const Scenario& base, const ScalingTarget& target, double value);

struct PowerLawFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double max_residual = 0.0;  // in log space
};
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

// Least-squares log-log slope of the rate over `grid` (>= 5 points, >= 1 decade).
PowerLawFit scaling_exponents(const Scenario& base, const ScalingTarget& target, std::span<const double> grid);

}  // namespace topdc
