#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "fixtures.hpp"
#include "topdc/constants.hpp"
#include "topdc/error.hpp"
#include "topdc/modeoverlap.hpp"

using namespace topdc;

namespace {

constexpr double pi = std::numbers::pi;

std::array<const ModeProfile*, 4> four(const ModeProfile& a, const ModeProfile& b, const ModeProfile& c,
                                       const ModeProfile& d) {
  return {&a, &b, &c, &d};
}

}  // namespace

TEST_CASE("Simpson weights integrate cubics exactly for odd and even counts") {
  for (std::size_t n : {3u, 4u, 5u, 8u, 11u, 40u}) {
    const auto w = simpson_weights(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i);
      s += w[i] * (2 * x * x * x - x + 1);
    }
    const double b = static_cast<double>(n - 1);
    CHECK(s == doctest::Approx(0.5 * b * b * b * b - 0.5 * b * b + b).epsilon(1e-13));
  }
  CHECK_THROWS_AS(simpson_weights(2), DomainError);
}

TEST_CASE("Gaussian effective area is 2 pi w^2") {
  test::Gen gen(21);
  for (int trial = 0; trial < 5; ++trial) {
    const double w = gen.uniform(0.3e-6, 1.2e-6);
    const auto m = test::gaussian_mode(w, 1.72e-6);
    const auto a = effective_area_waveguide(four(m, m, m, m), Conjugation::two_dagger);
    CHECK(a.area == doctest::Approx(2 * pi * w * w).epsilon(0.005));
    CHECK(std::abs(a.phase) < 1e-12);
  }
}

TEST_CASE("mixed-waist Gaussian overlap matches the closed form") {
  const double w1 = 0.7e-6, w2 = 0.45e-6;
  const auto f = test::gaussian_mode(w1, 1.72e-6, 121, 8.0);
  auto p = f;
  const double d = f.grid.dx, c = 60.0;
  for (std::size_t iy = 0; iy < 121; ++iy) {
    for (std::size_t ix = 0; ix < 121; ++ix) {
      const double x = (ix - c) * d, y = (iy - c) * d;
      p.e_field[iy * 121 + ix][0] = std::exp(-(x * x + y * y) / (2 * w2 * w2));
    }
  }
  const auto a = effective_area_waveguide(four(f, f, f, p), Conjugation::three_dagger);
  const double expect = 0.5 * pi * w1 * w1 * w1 * w2 * (3 / (w1 * w1) + 1 / (w2 * w2));
  CHECK(a.area == doctest::Approx(expect).epsilon(0.005));
}

TEST_CASE("a global phase on the unconjugated mode appears in the overlap phase") {
  auto m = test::gaussian_mode(0.6e-6, 1.72e-6, 41);
  auto shifted = m;
  const double phi = 0.7;
  for (auto& e : shifted.e_field) e[0] *= std::polar(1.0, phi);
  const auto a = effective_area_waveguide(four(m, m, m, shifted), Conjugation::three_dagger);
  CHECK(a.phase == doctest::Approx(phi).epsilon(1e-12));
  const auto b = effective_area_waveguide(four(shifted, m, m, m), Conjugation::three_dagger);
  CHECK(b.phase == doctest::Approx(-phi).epsilon(1e-12));
  const auto base = effective_area_waveguide(four(m, m, m, m), Conjugation::three_dagger);
  CHECK(a.area == doctest::Approx(base.area).epsilon(1e-12));
}

TEST_CASE("odd-parity overlap vanishes") {
  const auto even = test::gaussian_mode(0.6e-6, 1.72e-6, 41);
  auto odd = even;
  const double c = 20.0;
  for (std::size_t iy = 0; iy < 41; ++iy) {
    for (std::size_t ix = 0; ix < 41; ++ix) odd.e_field[iy * 41 + ix][0] *= (static_cast<double>(ix) - c);
  }
  CHECK_THROWS_AS(effective_area_waveguide(four(even, even, even, odd), Conjugation::three_dagger),
                  VanishingOverlapError);
}

TEST_CASE("normalization is positive for complex fields and scales with amplitude") {
  auto m = test::gaussian_mode(0.6e-6, 1.72e-6, 41);
  for (auto& e : m.e_field) e[1] = cplx(0.0, 1.0) * e[0];
  const auto ref = default_reference(m);
  const double n1 = normalization_constant(m, ref);
  CHECK(n1 > 0);
  for (auto& e : m.e_field)
    for (auto& c : e) c *= 3.0;
  CHECK(normalization_constant(m, ref) == doctest::Approx(3 * n1).epsilon(1e-13));
}

TEST_CASE("core chi3 map only counts the high-index region") {
  auto m = test::gaussian_mode(0.6e-6, 1.72e-6, 41);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i % 41 < 20) m.index_map[i] = 1.45;
  }
  const auto map = Chi3Map::core(m, 1.6);
  std::size_t on = 0;
  for (double v : map.relative) on += v > 0.5;
  CHECK(on == 41 * 21);
  CHECK_THROWS_AS(effective_area_waveguide(four(m, m, m, m), Conjugation::two_dagger, Chi3Map{std::vector<double>(3, 1.0), {}}),
                  DomainError);
}

TEST_CASE("azimuthal factor") {
  CHECK(azimuthal_factor(0.0, 750e-6) == cplx(1.0, 0.0));
  CHECK(azimuthal_factor(2 * pi / 750e-6, 750e-6) == cplx(0.0, 0.0));
  CHECK(azimuthal_factor(-6 * pi / 750e-6, 750e-6) == cplx(0.0, 0.0));
  test::Gen gen(13);
  for (int i = 0; i < 50; ++i) {
    const double dk = gen.uniform(-1e5, 1e5);
    CHECK(std::abs(azimuthal_factor(dk, 750e-6)) <= 1.0 + 1e-15);
  }
  CHECK_THROWS_AS(azimuthal_factor(1.0, 0.0), DomainError);
}

TEST_CASE("ring overlap adds the azimuthal factor") {
  const auto m = test::gaussian_mode(0.6e-6, 1.72e-6, 41);
  std::array<ModeReference, 4> refs;
  refs.fill(default_reference(m));
  const auto wg = effective_area_waveguide(four(m, m, m, m), Conjugation::three_dagger, {}, refs);
  const auto ring = effective_area_ring(four(m, m, m, m), {1.0, 1.0, 1.0, 3.0}, 750e-6, Conjugation::three_dagger, {}, refs);
  CHECK(ring.area == doctest::Approx(wg.area).epsilon(1e-14));
  const double L = 750e-6;
  CHECK_THROWS_AS(effective_area_ring(four(m, m, m, m), {0.0, 0.0, 0.0, 2 * pi / L}, L, Conjugation::three_dagger, {}, refs),
                  VanishingOverlapError);
}

TEST_CASE("gamma from chi3 reduces to n2 omega / (c A) for a single frequency") {
  const double w = omega_from_wavelength(1.55e-6), n = 2.0, chi3 = 2.5e-21, area = 1e-12;
  const cplx g = gamma_general({w, w, w, w}, {n, n, n, n}, chi3, area, 0.3);
  const double n2 = 3 * chi3 / (4 * constants::epsilon0 * constants::c * n * n);
  CHECK(std::abs(g) == doctest::Approx(n2 * w / (constants::c * area)).epsilon(1e-14));
  CHECK(std::arg(g) == doctest::Approx(0.3));
  CHECK_THROWS_AS(gamma_general({w, w, w, 0.0}, {n, n, n, n}, chi3, area, 0.0), DomainError);
}

TEST_CASE("process prefactors are consistent with energy conservation") {
  test::Gen gen(17);
  for (int i = 0; i < 100; ++i) {
    const double wp = gen.uniform(3e15, 4e15), ws = gen.uniform(0.2, 0.45) * wp, wg = (wp - ws) / 2;
    ProcessFrequencies f;
    f.pump = wp;
    f.fundamental = wp / 3;
    f.generated = wg;
    f.seed = ws;
    f.generated_bar = wp - 2 * ws;
    CHECK(gamma_prefactor(GammaProcess::fff, f) == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-14));
    const double r = gamma_prefactor(GammaProcess::ggs_ring, f) / gamma_prefactor(GammaProcess::gg_s, f);
    CHECK(r * r == doctest::Approx(std::cbrt(ws / wg)).epsilon(1e-12));
    CHECK(gamma_prefactor(GammaProcess::spm, f) == 1.0);
  }
  ProcessFrequencies missing;
  CHECK_THROWS_AS(gamma_prefactor(GammaProcess::xpm, missing), DomainError);
  CHECK(parse_gamma_process("gbar_ss") == GammaProcess::gbar_ss);
  CHECK_THROWS_AS(parse_gamma_process("nope"), ParseError);
}

TEST_CASE("mode profile round trip and parse errors") {
  const auto m = test::gaussian_mode(0.6e-6, 1.72e-6, 17, 4.0, 1.9, "P");
  const auto path = std::filesystem::temp_directory_path() / "topdc_mode_roundtrip.txt";
  write_mode_profile(path.string(), m);
  const auto back = read_mode_profile(path.string());
  std::filesystem::remove(path);
  CHECK(back.band_label == "P");
  CHECK(back.grid.nx == 17);
  CHECK(back.grid.dx == doctest::Approx(m.grid.dx).epsilon(1e-11));
  CHECK(back.omega == doctest::Approx(m.omega).epsilon(1e-11));
  REQUIRE(back.modal_index);
  CHECK(*back.modal_index == doctest::Approx(1.9));
  for (std::size_t i = 0; i < m.size(); i += 7) {
    CHECK(back.e_field[i][0].real() == doctest::Approx(m.e_field[i][0].real()).epsilon(1e-11));
  }

  std::istringstream missing("nx 16\nny 16\ndx_um 0.1\ndy_um 0.1\nband F\n0 0 1 0 0 0 0 0 1.5\n");
  CHECK_THROWS_AS(parse_mode_profile(missing), ParseError);
  std::istringstream columns("nx 16\nny 16\ndx_um 0.1\ndy_um 0.1\nlambda_um 1.5\nband F\n0 0 1 0 0 0 0 1.5\n");
  CHECK_THROWS_AS(parse_mode_profile(columns), ParseError);
  std::istringstream holes("nx 16\nny 16\ndx_um 0.1\ndy_um 0.1\nlambda_um 1.5\nband F\n0 0 1 0 0 0 0 0 1.5\n");
  CHECK_THROWS_AS(parse_mode_profile(holes), ParseError);
}

TEST_CASE("bundled synthetic profiles load") {
  for (const char* b : {"F", "P"}) {
    const auto m = read_mode_profile(test::source_path(std::string("data/sample/mode_") + b + ".txt"));
    CHECK(m.band_label == b);
    CHECK(m.size() == 41 * 41);
  }
}
