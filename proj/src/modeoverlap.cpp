#include "topdc/modeoverlap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "topdc/constants.hpp"
#include "topdc/error.hpp"

namespace topdc {
namespace {

bool starts_numeric(const std::string& tok) {
  return !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-' ||
                          tok[0] == '+' || tok[0] == '.');
}

double to_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": not a number: '" + s + "'");
  }
}

std::vector<double> grid_weights(const Grid2D& g) {
  const auto wx = simpson_weights(g.nx);
  const auto wy = simpson_weights(g.ny);
  std::vector<double> w(g.nx * g.ny);
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    for (std::size_t ix = 0; ix < g.nx; ++ix) w[iy * g.nx + ix] = wx[ix] * wy[iy] * g.dx * g.dy;
  }
  return w;
}

cplx dot(const Field3& a, const Field3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Field3 conj3(const Field3& a) { return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}; }

double norm3(const Field3& a) { return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2])); }

}  // namespace

void ModeProfile::validate() const {
  const std::string who = "mode profile '" + band_label + "'";
  if (!(grid.dx > 0) || !(grid.dy > 0)) throw DomainError(who + ": grid spacing must be positive");
  if (grid.nx < 16 || grid.ny < 16) throw DomainError(who + ": grid must be at least 16 x 16");
  if (e_field.size() != size() || index_map.size() != size()) {
    throw DomainError(who + ": field or index map size does not match the grid");
  }
  if (group_index_map.size() != 1 && group_index_map.size() != size()) {
    throw DomainError(who + ": group index map must be scalar or per point");
  }
  if (!(omega > 0)) throw DomainError(who + ": centre frequency must be positive");
  bool nonzero = false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(index_map[i] >= 1.0)) throw DomainError(who + ": index below 1 at point " + std::to_string(i));
    if (!(group_index(i) > 0)) throw DomainError(who + ": non-positive group index");
    nonzero = nonzero || norm3(e_field[i]) > 0;
  }
  if (!nonzero) throw DomainError(who + ": field is identically zero");
}

ModeProfile parse_mode_profile(std::istream& in, const std::string& source) {
  const std::string src = source.empty() ? std::string("mode profile") : source;
  std::map<std::string, std::string> header;
  ModeProfile m;
  std::vector<bool> seen;
  std::string line;
  int lineno = 0;
  bool data = false;
  bool per_point_ng = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = src + ":" + std::to_string(lineno);
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!data && !starts_numeric(tok[0])) {
      if (tok.size() != 2) throw ParseError(where + ": header lines are 'key value'");
      header[tok[0]] = tok[1];
      continue;
    }
    if (!data) {
      for (const char* key : {"nx", "ny", "dx_um", "dy_um", "lambda_um", "band"}) {
        if (!header.count(key)) throw ParseError(src + ": missing header key '" + key + "'");
      }
      const double nx = to_double(header["nx"], src), ny = to_double(header["ny"], src);
      if (nx < 1 || ny < 1 || nx != std::floor(nx) || ny != std::floor(ny)) {
        throw ParseError(src + ": nx, ny must be positive integers");
      }
      m.grid = {static_cast<std::size_t>(nx), static_cast<std::size_t>(ny),
                to_double(header["dx_um"], src) * units::um, to_double(header["dy_um"], src) * units::um};
      m.band_label = header["band"];
      m.omega = omega_from_wavelength(to_double(header["lambda_um"], src) * units::um);
      if (header.count("neff")) m.modal_index = to_double(header["neff"], src);
      if (header.count("ng")) m.modal_group_index = to_double(header["ng"], src);
      m.e_field.assign(m.size(), Field3{});
      m.index_map.assign(m.size(), 0.0);
      seen.assign(m.size(), false);
      per_point_ng = tok.size() == 10;
      if (per_point_ng) {
        m.group_index_map.assign(m.size(), 0.0);
      } else if (header.count("ng_material")) {
        m.group_index_map = {to_double(header["ng_material"], src)};
      }
      data = true;
    }
    if (tok.size() != (per_point_ng ? 10u : 9u)) {
      throw ParseError(where + ": expected " + std::to_string(per_point_ng ? 10 : 9) + " columns");
    }
    const double ix = to_double(tok[0], where), iy = to_double(tok[1], where);
    if (ix < 0 || iy < 0 || ix >= static_cast<double>(m.grid.nx) || iy >= static_cast<double>(m.grid.ny)) {
      throw ParseError(where + ": grid index out of range");
    }
    const std::size_t i = static_cast<std::size_t>(iy) * m.grid.nx + static_cast<std::size_t>(ix);
    if (seen[i]) throw ParseError(where + ": duplicate grid point");
    seen[i] = true;
    for (int c = 0; c < 3; ++c) {
      m.e_field[i][c] = {to_double(tok[2 + 2 * c], where), to_double(tok[3 + 2 * c], where)};
    }
    m.index_map[i] = to_double(tok[8], where);
    if (per_point_ng) m.group_index_map[i] = to_double(tok[9], where);
  }
  if (!data) throw ParseError(src + ": no data rows");
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ParseError(src + ": missing grid points");
  }
  if (m.group_index_map.empty()) m.group_index_map = m.index_map;
  m.validate();
  return m;
}

ModeProfile read_mode_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mode profile '" + path + "'");
  return parse_mode_profile(in, path);
}

void write_mode_profile(const std::string& path, const ModeProfile& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write mode profile '" + path + "'");
  out << std::setprecision(12);
  out << "band " << m.band_label << "\nnx " << m.grid.nx << "\nny " << m.grid.ny << "\ndx_um "
      << m.grid.dx / units::um << "\ndy_um " << m.grid.dy / units::um << "\nlambda_um "
      << wavelength_from_omega(m.omega) / units::um << "\n";
  if (m.modal_index) out << "neff " << *m.modal_index << "\n";
  if (m.modal_group_index) out << "ng " << *m.modal_group_index << "\n";
  const bool scalar_ng = m.group_index_map.size() == 1;
  if (scalar_ng) out << "ng_material " << m.group_index_map[0] << "\n";
  for (std::size_t iy = 0; iy < m.grid.ny; ++iy) {
    for (std::size_t ix = 0; ix < m.grid.nx; ++ix) {
      const std::size_t i = iy * m.grid.nx + ix;
      out << ix << ' ' << iy;
      for (int c = 0; c < 3; ++c) out << ' ' << m.e_field[i][c].real() << ' ' << m.e_field[i][c].imag();
      out << ' ' << m.index_map[i];
      if (!scalar_ng) out << ' ' << m.group_index_map[i];
      out << '\n';
    }
  }
}

ModeReference default_reference(const ModeProfile& mode) {
  const double nmax = *std::max_element(mode.index_map.begin(), mode.index_map.end());
  ModeReference r;
  r.nbar = mode.modal_index.value_or(nmax);
  r.v_group = constants::c / mode.modal_group_index.value_or(nmax);
  return r;
}

std::vector<double> simpson_weights(std::size_t n) {
  if (n < 3) throw DomainError("simpson_weights: need at least 3 samples");
  std::vector<double> w(n, 0.0);
  // Odd count: plain composite Simpson. Even count: Simpson up to n-4, then 3/8 on the last 3 panels.
  const std::size_t m = (n % 2 == 1) ? n : n - 3;
  if (m >= 3) {
    for (std::size_t i = 0; i < m; ++i) {
      w[i] += (i == 0 || i == m - 1) ? 1.0 / 3.0 : (i % 2 == 1 ? 4.0 / 3.0 : 2.0 / 3.0);
    }
  }
  if (n % 2 == 0) {
    const std::size_t s = n - 4;
    w[s] += 3.0 / 8.0;
    w[s + 1] += 9.0 / 8.0;
    w[s + 2] += 9.0 / 8.0;
    w[s + 3] += 3.0 / 8.0;
  }
  return w;
}

double normalization_constant(const ModeProfile& mode, const ModeReference& ref) {
  mode.validate();
  if (!(ref.nbar > 0) || !(ref.v_group > 0)) throw DomainError("normalization_constant: bad reference");
  const auto w = grid_weights(mode.grid);
  double sum = 0.0;
  for (std::size_t i = 0; i < mode.size(); ++i) {
    const double e2 = std::real(dot(conj3(mode.e_field[i]), mode.e_field[i]));
    const double v_local = constants::c / mode.group_index(i);
    sum += w[i] * e2 * (mode.index_map[i] / ref.nbar) / (v_local / ref.v_group);
  }
  if (!(sum > 0)) throw DomainError("normalization_constant: zero field");
  return std::sqrt(sum);
}

Chi3Map Chi3Map::core(const ModeProfile& mode, double threshold) {
  Chi3Map c;
  c.relative.resize(mode.size());
  for (std::size_t i = 0; i < mode.size(); ++i) c.relative[i] = mode.index_map[i] > threshold ? 1.0 : 0.0;
  return c;
}

EffectiveArea effective_area_waveguide(const std::array<const ModeProfile*, 4>& modes,
                                       Conjugation pattern, const Chi3Map& chi3,
                                       const std::array<ModeReference, 4>& refs) {
  for (const auto* m : modes) {
    if (!m) throw DomainError("effective_area: null mode");
    if (!(m->grid == modes[0]->grid)) throw DomainError("effective_area: modes do not share one grid");
  }
  const std::size_t n = modes[0]->size();
  if (!chi3.relative.empty() && chi3.relative.size() != n) throw DomainError("effective_area: chi3 map size mismatch");
  if (!chi3.tensor.empty() && chi3.tensor.size() != n) throw DomainError("effective_area: chi3 tensor size mismatch");

  double norm = 1.0;
  for (int j = 0; j < 4; ++j) norm *= normalization_constant(*modes[j], refs[j]);

  const int nconj = pattern == Conjugation::two_dagger ? 2 : 3;
  const auto w = grid_weights(modes[0]->grid);
  cplx sum = 0.0;
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::array<Field3, 4> f;
    for (int j = 0; j < 4; ++j) f[j] = j < nconj ? conj3(modes[j]->e_field[i]) : modes[j]->e_field[i];
    cplx c;
    if (!chi3.tensor.empty()) {
      const auto& t = chi3.tensor[i];
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int d = 0; d < 3; ++d)
            for (int e = 0; e < 3; ++e) c += t[((a * 3 + b) * 3 + d) * 3 + e] * f[0][a] * f[1][b] * f[2][d] * f[3][e];
    } else {
      const double rel = chi3.relative.empty() ? 1.0 : chi3.relative[i];
      c = rel * (dot(f[0], f[1]) * dot(f[2], f[3]) + dot(f[0], f[2]) * dot(f[1], f[3]) +
                 dot(f[0], f[3]) * dot(f[1], f[2])) / 3.0;
    }
    sum += w[i] * c;
    bound += w[i] * norm3(f[0]) * norm3(f[1]) * norm3(f[2]) * norm3(f[3]);
  }
  if (!(std::abs(sum) > 1e-10 * bound)) {
    throw VanishingOverlapError("effective_area: overlap vanishes (infinite effective area)");
  }
  EffectiveArea out;
  out.overlap = sum / norm;
  out.area = 1.0 / std::abs(out.overlap);
  out.phase = std::arg(out.overlap);
  return out;
}

EffectiveArea effective_area_waveguide(const std::array<const ModeProfile*, 4>& modes,
                                       Conjugation pattern, const Chi3Map& chi3) {
  std::array<ModeReference, 4> refs;
  for (int j = 0; j < 4; ++j) {
    if (!modes[j]) throw DomainError("effective_area: null mode");
    refs[j] = default_reference(*modes[j]);
  }
  return effective_area_waveguide(modes, pattern, chi3, refs);
}

cplx azimuthal_factor(double delta_kappa, double circumference) {
  if (!(circumference > 0)) throw DomainError("azimuthal_factor: circumference must be positive");
  const double x = delta_kappa * circumference;
  if (std::abs(x) < 1e-12) return 1.0;
  const double turns = x / (2.0 * constants::pi);
  if (std::abs(turns - std::round(turns)) < 1e-9) return 0.0;
  return (std::exp(cplx(0.0, x)) - 1.0) / cplx(0.0, x);
}

EffectiveArea effective_area_ring(const std::array<const ModeProfile*, 4>& modes,
                                  const std::array<double, 4>& kappa, double circumference,
                                  Conjugation pattern, const Chi3Map& chi3,
                                  const std::array<ModeReference, 4>& refs) {
  const int nconj = pattern == Conjugation::two_dagger ? 2 : 3;
  double dk = 0.0;
  for (int j = 0; j < 4; ++j) dk += j < nconj ? -kappa[j] : kappa[j];
  const cplx az = azimuthal_factor(dk, circumference);
  if (az == 0.0) {
    throw VanishingOverlapError("effective_area_ring: azimuthal phase mismatch makes the overlap vanish");
  }
  EffectiveArea wg = effective_area_waveguide(modes, pattern, chi3, refs);
  EffectiveArea out;
  out.overlap = wg.overlap * az;
  out.area = 1.0 / std::abs(out.overlap);
  out.phase = std::arg(out.overlap);
  return out;
}

cplx gamma_general(const std::array<double, 4>& omega, const std::array<double, 4>& nbar,
                   double chi3_bar, double area, double phase) {
  double wprod = 1.0, nprod = 1.0;
  for (int j = 0; j < 4; ++j) {
    if (!(omega[j] > 0) || !(nbar[j] > 0)) throw DomainError("gamma_general: frequencies and indices must be positive");
    wprod *= omega[j];
    nprod *= nbar[j];
  }
  if (!(area > 0)) throw DomainError("gamma_general: area must be positive");
  const double mag = 3.0 * std::pow(wprod, 0.25) * chi3_bar /
                     (4.0 * constants::epsilon0 * std::sqrt(nprod) * constants::c * constants::c * area);
  return std::polar(mag, phase);
}

std::string to_string(GammaProcess p) {
  switch (p) {
    case GammaProcess::spm: return "spm";
    case GammaProcess::xpm: return "xpm";
    case GammaProcess::fff: return "fff";
    case GammaProcess::gg_s: return "gg_s";
    case GammaProcess::gbar_ss: return "gbar_ss";
    case GammaProcess::ggs_ring: return "ggs";
  }
  return "unknown";
}

GammaProcess parse_gamma_process(const std::string& s) {
  for (auto p : {GammaProcess::spm, GammaProcess::xpm, GammaProcess::fff, GammaProcess::gg_s,
                 GammaProcess::gbar_ss, GammaProcess::ggs_ring}) {
    if (to_string(p) == s) return p;
  }
  throw ParseError("unknown nonlinear process '" + s + "'");
}

double gamma_prefactor(GammaProcess p, const ProcessFrequencies& w) {
  auto need = [](double x, const char* name) {
    if (!(x > 0)) throw DomainError(std::string("gamma_prefactor: missing frequency ") + name);
    return x;
  };
  switch (p) {
    case GammaProcess::spm:
      return 1.0;
    case GammaProcess::xpm:
      return std::sqrt(need(w.generated, "generated") / need(w.pump, "pump"));
    case GammaProcess::fff: {
      const double f = need(w.fundamental, "fundamental");
      return std::pow(f * f * f * need(w.pump, "pump"), 0.25) / f;
    }
    case GammaProcess::gg_s:
      return std::pow(need(w.pump, "pump") / need(w.seed, "seed"), 0.25);
    case GammaProcess::gbar_ss: {
      const double s = need(w.seed, "seed");
      return std::pow(need(w.pump, "pump") * need(w.generated_bar, "generated_bar") / (s * s), 0.25);
    }
    case GammaProcess::ggs_ring: {
      const double g = need(w.generated, "generated"), s = need(w.seed, "seed");
      return std::pow(g * g * s * need(w.pump, "pump"), 0.25) / std::cbrt(g * g * s);
    }
  }
  throw DomainError("gamma_prefactor: unknown process");
}

cplx gamma_process(cplx base, GammaProcess p, const ProcessFrequencies& w) {
  return base * gamma_prefactor(p, w);
}

double NonlinearParameterSet::xpm_for(const std::string& band) const {
  if (auto it = xpm_by_band.find(band); it != xpm_by_band.end()) return std::abs(it->second);
  return std::abs(xpm);
}

NonlinearParameterSet NonlinearParameterSet::uniform(double gamma, double gamma_spm, double gamma_xpm) {
  NonlinearParameterSet s;
  s.spm = gamma_spm;
  s.xpm = gamma_xpm;
  s.fff = s.ggs = s.gg_s = s.gbar_ss = gamma;
  return s;
}

}  // namespace topdc
