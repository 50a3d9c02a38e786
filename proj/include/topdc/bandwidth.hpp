#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "topdc/dispersion.hpp"

namespace topdc {

enum class BandwidthMethod { injected, analytic, numeric, ring_closed_form, monte_carlo };
std::string to_string(BandwidthMethod method);

struct FrequencyBounds {
  double omega_min = 0.0;
  double omega_max = 0.0;
};

struct QuadratureDiagnostics {
  std::size_t outer_evaluations = 0;
  std::size_t inner_evaluations = 0;
  std::size_t outer_intervals = 0;
  std::size_t initial_intervals = 0;  // from the sinc-period node-density rule
  double estimated_rel_error = 0.0;
  bool converged = true;
};

struct BandwidthResult {
  double tau_inv = 0.0;     // s^-1
  double tau_inv_sq = 0.0;  // s^-2
  BandwidthMethod method = BandwidthMethod::analytic;
  QuadratureDiagnostics diagnostics;
};

struct BandwidthQuadratureOptions {
  double rel_tol = 1e-6;
  std::size_t max_intervals = 4000;
  int nodes_per_period = 8;
  // Numeric results whose estimated error exceeds this raise ConvergenceError.
  double acceptable_rel_error = 1e-3;
};

// Bounds default to the model's validity range.
FrequencyBounds resolve_bounds(const DispersionModel& model, const std::optional<FrequencyBounds>& bounds);

// Degenerate spontaneous waveguide bandwidth over the finite generation window,
// in the rotated (Omega1, Omega2) frame. upsilon = (kbar_P - 3 kbar_F) L / 2.
BandwidthResult tau_sp_wg_numeric(const DispersionModel& fundamental, double omega_pump,
                                  double upsilon, double length,
                                  const std::optional<FrequencyBounds>& bounds = std::nullopt,
                                  const BandwidthQuadratureOptions& options = {});

struct SpWaveguideBandwidthInput {
  const DispersionModel* fundamental = nullptr;
  const DispersionModel* pump = nullptr;
  double omega_pump = 0.0;
  double length = 0.0;
  double pump_power = 0.0;
  double gamma_spm = 0.0;
  double gamma_xpm = 0.0;
  std::optional<FrequencyBounds> bounds;
};

double upsilon_sp_wg(const SpWaveguideBandwidthInput& in);
BandwidthResult tau_sp_wg_numeric(const SpWaveguideBandwidthInput& in,
                                  const BandwidthQuadratureOptions& options = {});

// Singly stimulated waveguide bandwidth about omega_G. upsilon = kbar mismatch * L / 2.
BandwidthResult tau_st_wg_numeric(const DispersionModel& generated, double omega_g, double upsilon,
                                  double length,
                                  const std::optional<FrequencyBounds>& bounds = std::nullopt,
                                  const BandwidthQuadratureOptions& options = {});

// Weak higher-order dispersion limits.
double tau_sp_wg_analytic(double beta2, double length);
double tau_st_wg_analytic(double beta2, double length);

enum class RingBandwidthKind { sp_degenerate, sp_nondegenerate, stimulated };

struct RingLinewidths {
  double generated = 0.0;  // Gamma_F or Gamma_G, rad/s
  double seed = 0.0;       // Gamma_S, non-degenerate only
};

// delta is the process energy mismatch against the hot resonances.
BandwidthResult tau_ring(RingBandwidthKind kind, const RingLinewidths& linewidths, double delta);

double vacuum_power(double omega_bar, double tau_inv);

// delta_sp = (w~P + dw~P) - w~S - 2 w~G, delta_st = delta_sp - dw~S.
double effective_vacuum_power(double gamma_g, double gamma_s, double omega_s, double delta_sp,
                              double delta_st);

struct McOptions {
  std::size_t samples = 400000;
  std::uint64_t seed = 20240611;
};

struct McEstimate {
  double value = 0.0;  // tau^-1
  double sigma = 0.0;
  double value_sq = 0.0;  // tau^-2 for the triplet integral
  double sigma_sq = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimates of the bandwidth integrals in the original wavenumber
// coordinates. The energy delta is resolved by eliminating the last wavenumber,
// which contributes a 1/v Jacobian; frequencies come from inverting k(omega).
McEstimate mc_tau_sp_wg(const DispersionModel& fundamental, double omega_pump, double upsilon,
                        double length, const std::optional<FrequencyBounds>& bounds,
                        const McOptions& options = {});
McEstimate mc_tau_st_wg(const DispersionModel& generated, double omega_g, double upsilon,
                        double length, const std::optional<FrequencyBounds>& bounds,
                        const McOptions& options = {});

}  // namespace topdc
