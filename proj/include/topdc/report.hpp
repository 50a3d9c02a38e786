#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "topdc/config.hpp"
#include "topdc/rates.hpp"

namespace topdc {

using json = nlohmann::ordered_json;

// Wavelength width of a generation bandwidth around lambda. The angular reading
// divides by 2 pi; the cyclic reading treats tau_inv as Hz.
double delta_lambda_angular(double lambda, double tau_inv);
double delta_lambda_cyclic(double lambda, double tau_inv);

// Inputs, intermediate factors, final rate and assumptions for one scenario.
json rate_report(const Scenario& scenario, const RateResult& result, const Manifest& manifest);

std::vector<std::string> common_assumptions(const Manifest& manifest);

struct SweepPoint {
  double parameter = 0.0;
  double rate = 0.0;
  double tau_inv = 0.0;
  double vacuum_power = 0.0;
};

struct SweepResult {
  std::string name;
  std::string scenario;
  std::string parameter;
  std::vector<SweepPoint> points;
  std::optional<PowerLawFit> fit;  // two or more points
};

std::string sweep_csv(const SweepResult& sweep);
// Standalone log-log line chart; empty for fewer than two points.
std::string sweep_svg(const SweepResult& sweep);
json sweep_report(const SweepResult& sweep);

// Fixed-format numbers shared by CSV and console output.
std::string format_number(double v, int digits = 10);

}  // namespace topdc
