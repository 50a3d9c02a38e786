#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "topdc/spline.hpp"

namespace topdc {

// Effective index samples for one mode band. Wavelengths in meters, increasing.
struct IndexTable {
  std::string band_label;
  std::vector<double> wavelength;
  std::vector<double> n_eff;
  std::string source;

  void validate() const;
};

// CSV with a `wavelength_um,n_eff` header; `#` lines are comments and
// `# band: X` names the band. Without that comment the file stem is used.
IndexTable read_index_csv(const std::string& path);
IndexTable parse_index_csv(std::istream& in, const std::string& fallback_label,
                           const std::string& source = "");
void write_index_csv(const std::string& path, const IndexTable& table);

struct GroupQuantities {
  double v_g;
  double n_g;
  double beta2;
  double beta3;
  double beta4;
};

// Smooth k(omega) for one band. Immutable after construction.
class DispersionModel {
 public:
  static DispersionModel build(const IndexTable& table, const SmoothingOptions& options = {});

  const std::string& band_label() const { return label_; }
  double omega_min() const { return spline_.x_min(); }
  double omega_max() const { return spline_.x_max(); }
  bool contains(double omega) const { return spline_.contains(omega); }

  double wavenumber(double omega) const;
  // n-th derivative of k with respect to omega, n in 0..5.
  double derivative(double omega, int order) const;
  GroupQuantities group_quantities(double omega) const;
  double group_velocity(double omega) const;
  double effective_index(double omega) const;

  // Frequency with k(omega) = k, by Newton iteration on the spline.
  double frequency_at(double k) const;
  double k_min() const { return wavenumber(omega_min()); }
  double k_max() const { return wavenumber(omega_max()); }

  const QuinticSpline& spline() const { return spline_; }

 private:
  void require(double omega, const char* what) const;

  std::string label_;
  QuinticSpline spline_;
};

inline DispersionModel build_model(const IndexTable& table, const SmoothingOptions& options = {}) {
  return DispersionModel::build(table, options);
}

// Series k(w0 + d) - k(w0) truncated after the d^order term (order 1..4).
double taylor_mismatch(const DispersionModel& model, double omega_ref, double delta, int order);

// k(w0 + d) - k(w0) from the interpolant itself.
double direct_mismatch(const DispersionModel& model, double omega_ref, double delta);

}  // namespace topdc
