#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "topdc/bandwidth.hpp"
#include "topdc/modeoverlap.hpp"
#include "topdc/phasematch.hpp"
#include "topdc/rates.hpp"

namespace topdc {

enum class Dimension { dimensionless, length, power, frequency };

// "1.72 um", "100 mW", "2.9e4 GHz", "30 MHz_cyclic", or a bare SI number.
// Frequencies are angular: GHz means 1e9 rad/s; the _cyclic suffix multiplies by 2 pi.
double parse_quantity(const std::string& text, Dimension dim);

struct ManifestBand {
  std::optional<double> omega;
  std::optional<std::string> index_table;  // resolved path
  std::optional<std::string> profile;      // resolved path
  std::optional<double> quality;
  std::optional<double> escape_efficiency;
  std::optional<double> group_index;
  std::optional<double> kappa;
};

// Device description: band frequencies, dispersion tables, mode profiles, ring
// resonances and nonlinear parameters.
struct Manifest {
  std::filesystem::path path;
  std::string name;
  NonlinearParameterSet gammas;
  std::optional<double> length;
  std::optional<double> circumference;
  double default_escape_efficiency = 0.5;
  bool escape_efficiency_defaulted = true;
  std::map<std::string, ManifestBand> bands;
  std::map<std::string, std::shared_ptr<const DispersionModel>> models;
  std::vector<std::string> assumptions;

  std::map<std::string, double> omegas() const;
  double omega(const std::string& band_label) const;
  WaveguideSpec waveguide() const;
  RingSpec ring() const;
};

Manifest load_manifest(const std::filesystem::path& path);

struct SweepConfig {
  std::string name;
  std::string scenario;
  ScalingTarget target;
  double from = 0.0;
  double to = 0.0;
  std::size_t points = 0;
  bool log_spacing = true;

  std::vector<double> grid() const;
};

struct BandwidthJob {
  std::string name;
  Process process = Process::sp_degenerate;
  std::vector<std::string> methods;  // numeric, analytic, montecarlo
  std::optional<FrequencyBounds> bounds;
  double length = 0.0;
  double pump_power = 0.0;
  std::size_t samples = 400000;
};

struct PhaseMatchJob {
  std::string name;
  PhaseMatchRequest request;
};

struct OverlapJob {
  std::string name;
  std::array<std::string, 4> bands;
  Conjugation conjugation = Conjugation::two_dagger;
  std::optional<double> chi3_bar;
  std::optional<double> core_index;
};

struct RunConfig {
  std::filesystem::path path;
  Manifest manifest;
  std::filesystem::path output_dir;
  std::vector<std::string> formats;
  std::uint64_t seed = 20240611;
  std::vector<Scenario> scenarios;
  std::vector<SweepConfig> sweeps;
  std::vector<BandwidthJob> bandwidth_jobs;
  std::vector<PhaseMatchJob> phasematch_jobs;
  std::vector<OverlapJob> overlap_jobs;
};

RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace topdc
