#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "topdc/constants.hpp"
#include "topdc/dispersion.hpp"
#include "topdc/modeoverlap.hpp"
#include "topdc/phasematch.hpp"

#ifndef TOPDC_SOURCE_DIR
#error "TOPDC_SOURCE_DIR must be defined"
#endif

namespace topdc::test {

inline std::string source_path(const std::string& rel) { return std::string(TOPDC_SOURCE_DIR) + "/" + rel; }

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline constexpr double lambda_f = 1.72e-6;
inline constexpr double lambda_s = 2.3e-6;
inline constexpr double k_pump = 1.97e7;

// k(w) = k0 + (w - w0) / v + beta2 (w - w0)^2 / 2 tabulated as n_eff(lambda).
inline IndexTable quadratic_table(double beta2, double lambda_min, double lambda_max, int n, double lambda0 = lambda_f,
                                  double k0 = k_pump / 3.0, double ng = 2.1, const std::string& label = "F") {
  IndexTable t;
  t.band_label = label;
  const double w0 = omega_from_wavelength(lambda0);
  for (int i = 0; i < n; ++i) {
    const double l = lambda_min + (lambda_max - lambda_min) * i / (n - 1);
    const double w = omega_from_wavelength(l);
    const double d = w - w0;
    const double k = k0 + ng / constants::c * d + 0.5 * beta2 * d * d;
    t.wavelength.push_back(l);
    t.n_eff.push_back(k * constants::c / w);
  }
  return t;
}

inline DispersionModel sample_model(const std::string& band_label) {
  return build_model(read_index_csv(source_path("data/sample/band_" + band_label + ".csv")));
}

// E_x = exp(-r^2 / (2 w^2)) on a uniform index, so the effective area is 2 pi w^2.
inline ModeProfile gaussian_mode(double waist, double lambda, std::size_t n = 81, double half_width_in_waists = 6.0,
                                 double index = 1.8, const std::string& label = "F") {
  ModeProfile m;
  m.band_label = label;
  const double d = 2.0 * half_width_in_waists * waist / static_cast<double>(n - 1);
  m.grid = {n, n, d, d};
  m.omega = omega_from_wavelength(lambda);
  m.modal_index = index;
  m.modal_group_index = index;
  m.index_map.assign(n * n, index);
  m.group_index_map = {index};
  m.e_field.resize(n * n);
  const double c = 0.5 * static_cast<double>(n - 1);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = (static_cast<double>(ix) - c) * d, y = (static_cast<double>(iy) - c) * d;
      m.e_field[iy * n + ix] = {cplx(std::exp(-(x * x + y * y) / (2 * waist * waist)), 0.0), 0.0, 0.0};
    }
  }
  return m;
}

// Sample microring: L = 750 um, Q_P = 1e5, other Q = 1e7, eta = 0.5, n_g 2.3 / 2.1.
inline RingSpec sample_ring() {
  const double wf = omega_from_wavelength(lambda_f), wp = 3 * wf, ws = omega_from_wavelength(lambda_s);
  const double wg = (wp - ws) / 2, wgb = wp - 2 * ws;
  const double vf = constants::c / 2.1, vp = constants::c / 2.3;
  RingSpec ring;
  ring.circumference = 750e-6;
  ring.gammas = NonlinearParameterSet::uniform(0.19, 4.3, 0.8);
  ring.resonances[band::P] = {wp, 0.0, 1e5, 0.5, vp};
  ring.resonances[band::F] = {wf, 0.0, 1e7, 0.5, vf};
  ring.resonances[band::G] = {wg, 0.0, 1e7, 0.5, vf};
  ring.resonances[band::S] = {ws, 0.0, 1e7, 0.5, vf};
  ring.resonances[band::Gbar] = {wgb, 0.0, 1e7, 0.5, vf};
  return ring;
}

}  // namespace topdc::test
