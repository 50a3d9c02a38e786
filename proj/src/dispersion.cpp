#include "topdc/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "topdc/constants.hpp"
#include "topdc/error.hpp"

namespace topdc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": not a number: '" + field + "'");
  }
  if (trim(field.substr(used)).size() != 0) {
    throw ParseError(where + ": trailing characters in '" + field + "'");
  }
  return v;
}

}  // namespace

void IndexTable::validate() const {
  if (wavelength.size() != n_eff.size()) {
    throw DomainError("index table '" + band_label + "': column lengths differ");
  }
  if (wavelength.size() < 8) {
    throw DomainError("index table '" + band_label + "': need at least 8 samples, got " +
                      std::to_string(wavelength.size()));
  }
  for (std::size_t i = 0; i < wavelength.size(); ++i) {
    if (!(wavelength[i] > 0.0) || !std::isfinite(wavelength[i])) {
      throw DomainError("index table '" + band_label + "': non-positive wavelength at row " +
                        std::to_string(i));
    }
    if (!(n_eff[i] > 0.0) || !std::isfinite(n_eff[i])) {
      throw DomainError("index table '" + band_label + "': non-positive n_eff at row " +
                        std::to_string(i));
    }
    if (i > 0 && !(wavelength[i] > wavelength[i - 1])) {
      throw DomainError("index table '" + band_label +
                        "': wavelengths not strictly increasing at row " + std::to_string(i));
    }
  }
}

IndexTable parse_index_csv(std::istream& in, const std::string& fallback_label,
                           const std::string& source) {
  IndexTable table;
  table.band_label = fallback_label;
  table.source = source;
  bool header_seen = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = (source.empty() ? std::string("index csv") : source) + ":" +
                              std::to_string(lineno);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      if (body.rfind("band:", 0) == 0) table.band_label = trim(body.substr(5));
      continue;
    }
    if (!header_seen) {
      std::string h = t;
      h.erase(std::remove_if(h.begin(), h.end(), ::isspace), h.end());
      if (h != "wavelength_um,n_eff") {
        throw ParseError(where + ": expected header 'wavelength_um,n_eff'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw ParseError(where + ": expected two comma-separated fields");
    }
    table.wavelength.push_back(parse_number(trim(t.substr(0, comma)), where) * units::um);
    table.n_eff.push_back(parse_number(trim(t.substr(comma + 1)), where));
  }
  if (!header_seen) throw ParseError((source.empty() ? "index csv" : source) + ": missing header");
  if (table.band_label.empty()) throw ParseError(source + ": no band label");
  return table;
}

IndexTable read_index_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open index table '" + path + "'");
  return parse_index_csv(in, std::filesystem::path(path).stem().string(), path);
}

void write_index_csv(const std::string& path, const IndexTable& table) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write index table '" + path + "'");
  out << "# band: " << table.band_label << "\n";
  if (!table.source.empty()) out << "# " << table.source << "\n";
  out << "wavelength_um,n_eff\n" << std::setprecision(15);
  for (std::size_t i = 0; i < table.wavelength.size(); ++i) {
    out << table.wavelength[i] / units::um << "," << table.n_eff[i] << "\n";
  }
}

DispersionModel DispersionModel::build(const IndexTable& table, const SmoothingOptions& options) {
  table.validate();
  const std::size_t n = table.wavelength.size();
  // Wavelength increases, so frequency decreases: fill in reverse.
  std::vector<double> omega(n), k(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    omega[i] = omega_from_wavelength(table.wavelength[j]);
    k[i] = table.n_eff[j] * omega[i] / constants::c;
  }
  DispersionModel model;
  model.label_ = table.band_label;
  model.spline_ = QuinticSpline::fit(omega, k, options);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(model.spline_.derivative(omega[i], 1) > 0.0)) {
      throw DomainError("band '" + table.band_label +
                        "': group velocity not positive near sample " + std::to_string(i));
    }
  }
  return model;
}

void DispersionModel::require(double omega, const char* what) const {
  if (!contains(omega)) {
    std::ostringstream os;
    os << what << ": omega = " << omega << " rad/s outside band '" << label_ << "' range ["
       << omega_min() << ", " << omega_max() << "]";
    throw DomainError(os.str());
  }
}

double DispersionModel::wavenumber(double omega) const {
  require(omega, "wavenumber");
  return spline_.value(omega);
}

double DispersionModel::derivative(double omega, int order) const {
  require(omega, "derivative");
  return spline_.derivative(omega, order);
}

GroupQuantities DispersionModel::group_quantities(double omega) const {
  require(omega, "group_quantities");
  const auto d = spline_.derivatives(omega);
  GroupQuantities g{};
  g.v_g = 1.0 / d[1];
  g.n_g = constants::c * d[1];
  g.beta2 = d[2];
  g.beta3 = d[3];
  g.beta4 = d[4];
  return g;
}

double DispersionModel::group_velocity(double omega) const {
  return 1.0 / derivative(omega, 1);
}

double DispersionModel::effective_index(double omega) const {
  return wavenumber(omega) * constants::c / omega;
}

double DispersionModel::frequency_at(double k) const {
  const double klo = spline_.value(omega_min());
  const double khi = spline_.value(omega_max());
  if (k < klo || k > khi) {
    std::ostringstream os;
    os << "frequency_at: k = " << k << " rad/m outside band '" << label_ << "' range [" << klo
       << ", " << khi << "]";
    throw DomainError(os.str());
  }
  double lo = omega_min(), hi = omega_max();
  double w = lo + (k - klo) / (khi - klo) * (hi - lo);
  for (int it = 0; it < 100; ++it) {
    const double f = spline_.value(w) - k;
    if (f > 0) hi = w; else lo = w;
    double next = w - f / spline_.derivative(w, 1);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) <= 1e-15 * std::abs(w)) return next;
    w = next;
  }
  return w;
}

double taylor_mismatch(const DispersionModel& model, double omega_ref, double delta, int order) {
  if (order < 1 || order > 4) throw DomainError("taylor_mismatch: order must be 1..4");
  model.derivative(omega_ref, 0);  // range checks
  model.derivative(omega_ref + delta, 0);
  const auto d = model.spline().derivatives(omega_ref);
  double sum = 0.0, term = 1.0;
  for (int j = 1; j <= order; ++j) {
    term *= delta / j;
    sum += d[j] * term;
  }
  return sum;
}

double direct_mismatch(const DispersionModel& model, double omega_ref, double delta) {
  return model.wavenumber(omega_ref + delta) - model.wavenumber(omega_ref);
}

}  // namespace topdc
