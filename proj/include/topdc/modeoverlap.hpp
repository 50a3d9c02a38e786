#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace topdc {

using cplx = std::complex<double>;
using Field3 = std::array<cplx, 3>;

struct Grid2D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 0.0;  // m
  double dy = 0.0;  // m
  bool operator==(const Grid2D&) const = default;
};

// Sampled transverse mode of one band. Point (ix, iy) is stored at iy * nx + ix.
struct ModeProfile {
  std::string band_label;
  Grid2D grid;
  std::vector<Field3> e_field;
  std::vector<double> index_map;
  std::vector<double> group_index_map;  // one value (uniform) or one per point
  double omega = 0.0;
  std::optional<double> modal_index;        // n_eff of the mode, if known
  std::optional<double> modal_group_index;  // n_g of the mode, if known

  std::size_t size() const { return grid.nx * grid.ny; }
  double group_index(std::size_t i) const {
    return group_index_map.size() == 1 ? group_index_map[0] : group_index_map[i];
  }
  void validate() const;
};

// Text format: `key value` header lines (nx, ny, dx_um, dy_um, lambda_um, band,
// optional neff, ng, ng_material), then nx*ny rows of
// `ix iy Re(Ex) Im(Ex) Re(Ey) Im(Ey) Re(Ez) Im(Ez) n [n_g]`. Without a per-point
// n_g column, ng_material is used, else the local index itself.
ModeProfile read_mode_profile(const std::string& path);
ModeProfile parse_mode_profile(std::istream& in, const std::string& source = "");
void write_mode_profile(const std::string& path, const ModeProfile& mode);

// Reference index and modal group velocity entering the normalisation.
struct ModeReference {
  double nbar = 1.0;
  double v_group = 0.0;  // m/s
};
// From the profile's modal_index / modal_group_index, else max(n) and c/max(n).
ModeReference default_reference(const ModeProfile& mode);

// Composite Simpson weights for n equally spaced samples with unit spacing
// (3/8 rule on the last panel when n is even). n >= 3.
std::vector<double> simpson_weights(std::size_t n);

// N = sqrt( integral e*.e (n/nbar) / (v_g/v) dx dy ), local v_g = c / n_g.
double normalization_constant(const ModeProfile& mode, const ModeReference& ref);

// chi3 relative to its nominal value at each grid point. An empty `relative`
// means uniform 1. A non-empty `tensor` (81 components, index ((i*3+j)*3+k)*3+l,
// per point) replaces the isotropic scalar contraction.
struct Chi3Map {
  std::vector<double> relative;
  std::vector<std::array<double, 81>> tensor;

  static Chi3Map uniform() { return {}; }
  // 1 where the index exceeds `threshold`, 0 elsewhere.
  static Chi3Map core(const ModeProfile& mode, double threshold);
};

// Which modes enter conjugated: the first two, or the first three.
enum class Conjugation { two_dagger, three_dagger };

struct EffectiveArea {
  double area = 0.0;   // m^2
  double phase = 0.0;  // rad
  cplx overlap;        // exp(i phase) / area
};

EffectiveArea effective_area_waveguide(const std::array<const ModeProfile*, 4>& modes,
                                       Conjugation pattern, const Chi3Map& chi3,
                                       const std::array<ModeReference, 4>& refs);
EffectiveArea effective_area_waveguide(const std::array<const ModeProfile*, 4>& modes,
                                       Conjugation pattern, const Chi3Map& chi3 = Chi3Map::uniform());

// (1/L) times the loop integral of exp(i dk z). Exactly 1 for dk = 0 and 0 when
// dk L is a non-zero multiple of 2 pi.
cplx azimuthal_factor(double delta_kappa, double circumference);

// Azimuthally symmetric ring modes: the waveguide overlap times the azimuthal
// factor, with dk = sum of unconjugated kappas minus sum of conjugated ones.
EffectiveArea effective_area_ring(const std::array<const ModeProfile*, 4>& modes,
                                  const std::array<double, 4>& kappa, double circumference,
                                  Conjugation pattern, const Chi3Map& chi3,
                                  const std::array<ModeReference, 4>& refs);

cplx gamma_general(const std::array<double, 4>& omega, const std::array<double, 4>& nbar,
                   double chi3_bar, double area, double phase);

enum class GammaProcess { spm, xpm, fff, gg_s, gbar_ss, ggs_ring };
std::string to_string(GammaProcess p);
GammaProcess parse_gamma_process(const std::string& s);

struct ProcessFrequencies {
  double pump = 0.0;
  double fundamental = 0.0;
  double generated = 0.0;  // also the probed band for XPM
  double seed = 0.0;
  double generated_bar = 0.0;
};

double gamma_prefactor(GammaProcess p, const ProcessFrequencies& w);
cplx gamma_process(cplx base, GammaProcess p, const ProcessFrequencies& w);

// Nonlinear parameters by process. Rates use magnitudes; per-band XPM entries
// override the shared value.
struct NonlinearParameterSet {
  cplx spm;
  cplx xpm;
  std::map<std::string, cplx> xpm_by_band;
  cplx fff;
  cplx ggs;
  cplx gg_s;
  cplx gbar_ss;
  std::optional<double> chi3_bar;
  std::map<std::string, double> nbar;
  std::map<std::string, double> area;
  std::map<std::string, double> phase;

  double xpm_for(const std::string& band) const;
  // Same |gamma| for all four TOPDC processes.
  static NonlinearParameterSet uniform(double gamma, double gamma_spm, double gamma_xpm);
};

}  // namespace topdc
