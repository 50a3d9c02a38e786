#pragma once

#include <numbers>

namespace topdc {

// CODATA 2018.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double c = 299792458.0;              // m/s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double pi = std::numbers::pi;
}  // namespace constants

// Unit factors to SI. Frequencies are angular throughout, so "GHz" means 1e9 rad/s.
namespace units {
inline constexpr double um = 1e-6;
inline constexpr double nm = 1e-9;
inline constexpr double mm = 1e-3;
inline constexpr double cm = 1e-2;
inline constexpr double m = 1.0;
inline constexpr double W = 1.0;
inline constexpr double mW = 1e-3;
inline constexpr double uW = 1e-6;
inline constexpr double Hz = 1.0;
inline constexpr double MHz = 1e6;
inline constexpr double GHz = 1e9;
inline constexpr double THz = 1e12;
}  // namespace units

inline constexpr double omega_from_wavelength(double lambda) {
  return 2.0 * constants::pi * constants::c / lambda;
}

inline constexpr double wavelength_from_omega(double omega) {
  return 2.0 * constants::pi * constants::c / omega;
}

}  // namespace topdc
