#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "topdc/dispersion.hpp"
#include "topdc/modeoverlap.hpp"

namespace topdc {

// Band labels used by process roles.
namespace band {
inline const std::string P = "P";
inline const std::string F = "F";
inline const std::string G = "G";
inline const std::string S = "S";
inline const std::string Gbar = "Gbar";
}  // namespace band

enum class Process { sp_degenerate, sp_nondegenerate, stimulated, doubly_stimulated };
std::string to_string(Process p);
Process parse_process(const std::string& s);
bool is_spontaneous(Process p);

struct WaveguideSpec {
  double length = 0.0;
  std::map<std::string, std::shared_ptr<const DispersionModel>> bands;
  NonlinearParameterSet gammas;

  // G, S and Gbar fall back to the F model when not listed separately.
  const DispersionModel& model(const std::string& band_label) const;
  bool has_model(const std::string& band_label) const;
  void validate() const;
};

struct Resonance {
  double omega = 0.0;
  double kappa = 0.0;
  double quality = 0.0;
  double escape_efficiency = 0.5;
  double group_velocity = 0.0;

  double linewidth() const { return omega / (2.0 * quality); }
};

struct RingSpec {
  double circumference = 0.0;
  std::map<std::string, Resonance> resonances;
  NonlinearParameterSet gammas;

  const Resonance& at(const std::string& band_label) const;
  void validate() const;
};

struct PumpState {
  double channel_power = 0.0;
  double circulating_power = 0.0;
  double detuning = 0.0;        // laser minus hot pump resonance, rad/s
  double laser_omega = 0.0;
  std::map<std::string, double> hot_omega;
  std::size_t iterations = 0;
  bool multistable = false;     // the steady-state cubic has three real roots
};

std::map<std::string, double> shifted_wavenumbers_wg(const WaveguideSpec& spec, double pump_power,
                                                     const std::map<std::string, double>& omega);

// Signed mismatch at band centres; `components` replaces the generated band
// wavenumbers (three for Sp degenerate, two for St and non-degenerate Sp, one for DSt).
double mismatch(Process process, const std::map<std::string, double>& kbar,
                std::span<const double> components = {});

struct PhaseMatchRequest {
  Process process = Process::sp_degenerate;
  double lambda_min = 0.0;  // bracket on the unknown wavelength, m
  double lambda_max = 0.0;
  // Sp degenerate: unknown lambda_F with omega_P = 3 omega_F.
  // St / Sp non-degenerate: give one of pump or seed; the other is unknown.
  // DSt: give both; lambda_Gbar is unknown.
  std::optional<double> omega_pump;
  std::optional<double> omega_seed;
  double pump_power = 0.0;
  double tolerance = 1e-3;  // rad/m
  std::size_t scan_points = 256;
};

struct PhaseMatchResult {
  std::map<std::string, double> omega;
  double mismatch = 0.0;
  double energy_residual = 0.0;  // rad/s
  bool root = false;             // false: argmin of |mismatch|
  bool degenerate_medium = false;
  std::string unknown_band;
  std::size_t iterations = 0;

  double wavelength(const std::string& band_label) const;
};

PhaseMatchResult find_phase_matched(const WaveguideSpec& spec, const PhaseMatchRequest& request);

double circulating_power(const RingSpec& ring, const std::string& band_label, double power,
                         double detuning);

std::map<std::string, double> hot_resonances(const RingSpec& ring, double circulating_pump);
// K~_J - K_J for each band.
std::map<std::string, double> hot_wavenumber_shifts(const RingSpec& ring, double circulating_pump);

struct FixedPointOptions {
  double rel_tol = 1e-12;
  std::size_t max_iterations = 10000;
};

PumpState self_consistent_pump(const RingSpec& ring, double pump_power, double laser_omega,
                               const FixedPointOptions& options = {});

// Pump detuning from the hot pump resonance that zeroes the process energy
// mismatch. seed_detuning shifts the seed away from its hot resonance.
double optimal_pump_detuning(const RingSpec& ring, Process process, double circulating_pump,
                             double seed_detuning = 0.0);

// Pump state with the laser held at the optimal detuning from the hot resonance.
PumpState resolve_optimal_pump(const RingSpec& ring, Process process, double pump_power,
                               double seed_detuning = 0.0, const FixedPointOptions& options = {});

// Pump state with a fixed detuning from the hot resonance.
PumpState resolve_detuned_pump(const RingSpec& ring, double pump_power, double detuning,
                               const FixedPointOptions& options = {});

}  // namespace topdc
