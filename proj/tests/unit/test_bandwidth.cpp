#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "topdc/bandwidth.hpp"
#include "topdc/constants.hpp"
#include "topdc/error.hpp"

using namespace topdc;

namespace {

const double L = 0.01;

FrequencyBounds window_around(double w0, double half) { return {w0 * (1 - half), w0 * (1 + half)}; }

}  // namespace

TEST_CASE("analytic waveguide bandwidths") {
  const double sp = tau_sp_wg_analytic(3.2e-26, L);
  CHECK(sp * sp == doctest::Approx(std::sqrt(3.0) / (9 * 3.2e-26 * L)).epsilon(1e-14));
  CHECK(sp == doctest::Approx(2.4524e13).epsilon(1e-4));
  CHECK(tau_st_wg_analytic(5.5e-26, L) == doctest::Approx(4.5e13).epsilon(0.01));
  CHECK(tau_sp_wg_analytic(-3.2e-26, L) == tau_sp_wg_analytic(3.2e-26, L));
  CHECK_THROWS_AS(tau_sp_wg_analytic(0.0, L), InfiniteBandwidthError);
  CHECK_THROWS_AS(tau_st_wg_analytic(0.0, L), InfiniteBandwidthError);
  CHECK_THROWS_AS(tau_st_wg_analytic(1e-26, 0.0), DomainError);
}

TEST_CASE("analytic scaling with length and beta2") {
  test::Gen gen(4);
  for (int i = 0; i < 50; ++i) {
    const double b2 = gen.log_uniform(1e-27, 1e-24), len = gen.log_uniform(1e-4, 1.0), s = gen.log_uniform(0.1, 10);
    CHECK(tau_sp_wg_analytic(b2, s * len) == doctest::Approx(tau_sp_wg_analytic(b2, len) / std::sqrt(s)).epsilon(1e-12));
    CHECK(tau_st_wg_analytic(b2 * s, len) == doctest::Approx(tau_st_wg_analytic(b2, len) / std::sqrt(s)).epsilon(1e-12));
  }
}

TEST_CASE("quadrature converges to the analytic limit on pure beta2 dispersion") {
  const auto model = build_model(test::quadratic_table(3.2e-26, 1.0e-6, 3.0e-6, 200));
  const double wf = omega_from_wavelength(test::lambda_f);
  double prev_sp = 0.0, prev_st = 0.0;
  for (double half : {0.1, 0.2, 0.4}) {
    const auto sp = tau_sp_wg_numeric(model, 3 * wf, 0.0, L, window_around(wf, half));
    const auto st = tau_st_wg_numeric(model, wf, 0.0, L, window_around(wf, half));
    const double rsp = sp.tau_inv / tau_sp_wg_analytic(3.2e-26, L);
    const double rst = st.tau_inv / tau_st_wg_analytic(3.2e-26, L);
    CHECK(rsp > prev_sp);
    CHECK(rst > prev_st);
    CHECK(sp.diagnostics.estimated_rel_error < 1e-3);
    prev_sp = rsp;
    prev_st = rst;
  }
  CHECK(prev_sp == doctest::Approx(1.0).epsilon(0.01));
  CHECK(prev_st == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("Monte Carlo in the original coordinates agrees with the quadrature") {
  const auto model = build_model(test::quadratic_table(3.2e-26, 1.0e-6, 3.0e-6, 200));
  const double wf = omega_from_wavelength(test::lambda_f);
  const auto fb = window_around(wf, 0.2);
  const auto sp = tau_sp_wg_numeric(model, 3 * wf, 0.0, L, fb);
  const auto mc = mc_tau_sp_wg(model, 3 * wf, 0.0, L, fb, {200000, 99});
  CHECK(std::abs(mc.value - sp.tau_inv) < std::max(3 * mc.sigma, 0.02 * sp.tau_inv));
  const auto st = tau_st_wg_numeric(model, wf, 0.0, L, fb);
  const auto mst = mc_tau_st_wg(model, wf, 0.0, L, fb, {200000, 99});
  CHECK(std::abs(mst.value - st.tau_inv) < std::max(3 * mst.sigma, 0.02 * st.tau_inv));
  CHECK(mst.seed == 99);
}

TEST_CASE("Monte Carlo is reproducible for a fixed seed") {
  const auto model = build_model(test::quadratic_table(3.2e-26, 1.2e-6, 2.6e-6, 120));
  const double wf = omega_from_wavelength(test::lambda_f);
  const auto a = mc_tau_st_wg(model, wf, 0.0, L, window_around(wf, 0.1), {100000, 5});
  const auto b = mc_tau_st_wg(model, wf, 0.0, L, window_around(wf, 0.1), {100000, 5});
  CHECK(a.value == b.value);
  CHECK(a.sigma == b.sigma);
}

TEST_CASE("bandwidth error paths") {
  const auto model = build_model(test::quadratic_table(3.2e-26, 1.2e-6, 2.6e-6, 120));
  const double wf = omega_from_wavelength(test::lambda_f);
  CHECK(tau_st_wg_numeric(model, wf, 0.0, L, FrequencyBounds{wf, wf}).tau_inv == 0.0);
  CHECK_THROWS_AS(resolve_bounds(model, FrequencyBounds{wf * 1.1, wf * 0.9}), DomainError);
  CHECK_THROWS_AS(resolve_bounds(model, FrequencyBounds{wf * 0.1, wf}), DomainError);
  CHECK_THROWS_AS(mc_tau_st_wg(model, wf, 0.0, L, window_around(wf, 0.1), {1000, 1}), DomainError);
  CHECK_THROWS_AS(mc_tau_sp_wg(model, 3 * wf, 0.0, L, FrequencyBounds{wf * 1.1, wf * 0.9}, {}), DomainError);
  CHECK(mc_tau_sp_wg(model, 3 * wf, 0.0, L, FrequencyBounds{wf, wf}, {}).value == 0.0);
}

TEST_CASE("numeric bandwidths of the sample dataset stay near the analytic values") {
  const auto f = test::sample_model("F");
  const auto p = test::sample_model("P");
  const double wf = omega_from_wavelength(test::lambda_f);
  SpWaveguideBandwidthInput in{&f, &p, 3 * wf, L, 0.1, 4.3, 0.8,
                               FrequencyBounds{omega_from_wavelength(2.2e-6), omega_from_wavelength(1.4e-6)}};
  const double ratio_sp = tau_sp_wg_numeric(in).tau_inv / tau_sp_wg_analytic(3.2e-26, L);
  CHECK(ratio_sp >= 0.8);
  CHECK(ratio_sp <= 1.3);
  const double ws = omega_from_wavelength(test::lambda_s), wg = (3 * wf - ws) / 2;
  const double ups = (p.wavenumber(3 * wf) - f.wavenumber(ws) - 2 * f.wavenumber(wg)) * L / 2;
  const double ratio_st = tau_st_wg_numeric(f, wg, ups, L).tau_inv / tau_st_wg_analytic(5.5e-26, L);
  CHECK(ratio_st >= 0.8);
  CHECK(ratio_st <= 1.3);
}

TEST_CASE("ring closed forms") {
  const double gf = 1.0951e15 / 2e7;
  CHECK(tau_ring(RingBandwidthKind::sp_degenerate, {gf, 0}, 0.0).tau_inv == doctest::Approx(gf / std::sqrt(18.0)).epsilon(1e-15));
  CHECK(tau_ring(RingBandwidthKind::stimulated, {gf, 0}, 0.0).tau_inv == doctest::Approx(gf / 2).epsilon(1e-15));
  // Lorentzian in delta: maximal at zero, monotone in |delta|.
  test::Gen gen(8);
  for (auto kind : {RingBandwidthKind::sp_degenerate, RingBandwidthKind::sp_nondegenerate, RingBandwidthKind::stimulated}) {
    const double peak = tau_ring(kind, {gf, gf}, 0.0).tau_inv_sq;
    double prev = peak;
    for (double d = 0.1 * gf; d < 50 * gf; d *= 1.7) {
      const double v = tau_ring(kind, {gf, gf}, d).tau_inv_sq;
      CHECK(v < prev);
      CHECK(tau_ring(kind, {gf, gf}, -d).tau_inv_sq == v);
      prev = v;
    }
  }
  CHECK_THROWS_AS(tau_ring(RingBandwidthKind::stimulated, {0, 0}, 0.0), DomainError);
}

TEST_CASE("vacuum power") {
  CHECK(vacuum_power(2.0, 3.0) == doctest::Approx(6.0 * constants::hbar));
  CHECK_THROWS_AS(vacuum_power(-1.0, 1.0), DomainError);
  const double gg = 6e7, gs = 4e7, ws = 8e14;
  // At zero detunings the effective vacuum power is hbar w_S (4 gg^2)(gs)/(4 gg (2gg+gs)).
  CHECK(effective_vacuum_power(gg, gs, ws, 0.0, 0.0) ==
        doctest::Approx(constants::hbar * ws * gg * gs / (2 * gg + gs)).epsilon(1e-14));
}
