#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "fixtures.hpp"
#include "topdc/constants.hpp"
#include "topdc/error.hpp"
#include "topdc/rates.hpp"

using namespace topdc;

namespace {

WaveguideScenario sample_waveguide(double tau_inv) {
  WaveguideScenario w;
  w.spec.length = 0.01;
  w.spec.gammas = NonlinearParameterSet::uniform(0.19, 4.3, 0.8);
  const double wf = omega_from_wavelength(test::lambda_f);
  w.omega = {{band::P, 3 * wf}, {band::F, wf}, {band::S, omega_from_wavelength(test::lambda_s)}};
  w.bandwidth.source = BandwidthSource::injected;
  w.bandwidth.tau_inv = tau_inv;
  return w;
}

Scenario waveguide(const std::string& name, Process p, double tau_inv, double seed = 0.0) {
  Scenario s;
  s.name = name;
  s.process = p;
  s.pump_power = 0.1;
  s.seed_power = seed;
  auto w = sample_waveguide(tau_inv);
  if (p == Process::doubly_stimulated) w.mismatch = 0.0;
  s.device = w;
  return s;
}

Scenario ring(const std::string& name, Process p, double seed = 0.0) {
  Scenario s;
  s.name = name;
  s.process = p;
  s.pump_power = 0.1;
  s.seed_power = seed;
  s.device = RingScenario{test::sample_ring(), std::nullopt, 0.0};
  return s;
}

std::vector<double> decades(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return g;
}

}  // namespace

TEST_CASE("sample rates land within 15 percent of the reference table") {
  struct Row {
    Scenario s;
    double expected;
  };
  const std::vector<Row> rows = {
      {waveguide("wg_sp", Process::sp_degenerate, 2.9e13), 12.0},
      {waveguide("wg_st", Process::stimulated, 4.0e13, 10e-3), 5.7e4},
      {waveguide("wg_dst", Process::doubly_stimulated, 0.0, 10e-3), 1.8e7},
      {ring("ring_sp", Process::sp_degenerate), 5.9e-3},
      {ring("ring_st", Process::stimulated, 20e-6), 2.3e5},
      {ring("ring_dst", Process::doubly_stimulated, 20e-6), 1.3e12},
  };
  for (const auto& row : rows) {
    CAPTURE(row.s.name);
    const RateResult r = evaluate(row.s);
    CHECK(std::abs(r.rate / row.expected - 1.0) <= 0.15);
    CHECK(r.efficiency * r.pump_photon_rate == doctest::Approx(r.rate).epsilon(1e-12));
    CHECK(r.pump_photon_rate == doctest::Approx(0.1 / (constants::hbar * 3 * omega_from_wavelength(test::lambda_f))));
  }
}

TEST_CASE("ring bandwidths and vacuum powers") {
  const RateResult sp = evaluate(ring("ring_sp", Process::sp_degenerate));
  const RateResult st = evaluate(ring("ring_st", Process::stimulated, 20e-6));
  const auto spec = test::sample_ring();
  CHECK(sp.tau_inv == doctest::Approx(spec.at(band::F).linewidth() / std::sqrt(18.0)).epsilon(1e-12));
  CHECK(st.tau_inv == doctest::Approx(spec.at(band::G).omega / (4 * spec.at(band::G).quality)).epsilon(1e-12));
  CHECK(sp.vacuum_power == doctest::Approx(1.5e-12).epsilon(0.05));
  CHECK(st.vacuum_power == doctest::Approx(4.0e-12).epsilon(0.05));
}

TEST_CASE("stimulated to spontaneous ratio equals seed over mean vacuum power") {
  test::Gen gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    RingSpec spec = test::sample_ring();
    for (auto& [b, r] : spec.resonances) {
      if (b != band::P) r.quality = gen.log_uniform(1e5, 1e7);
    }
    const double wg = spec.at(band::G).omega, ws = spec.at(band::S).omega;
    const double ggs = 0.19;
    spec.gammas.ggs = ggs;
    spec.gammas.gg_s = ggs * std::pow(wg / ws, 1.0 / 6.0);
    const double seed = gen.log_uniform(1e-7, 1e-3);
    Scenario sp = ring("sp", Process::sp_nondegenerate);
    Scenario st = ring("st", Process::stimulated, seed);
    sp.device = RingScenario{spec, std::nullopt, 0.0};
    st.device = RingScenario{spec, std::nullopt, 0.0};
    const RateResult rsp = evaluate(sp), rst = evaluate(st);
    const double ratio = rst.rate / rsp.rate;
    const double gamma_ratio = std::pow(rst.gamma / rsp.gamma, 2);
    CHECK(ratio == doctest::Approx(gamma_ratio * seed * rst.vacuum_power / std::pow(rsp.vacuum_power, 2)).epsilon(1e-10));
    CHECK(ratio == doctest::Approx(seed / rst.diagnostics.at("effective_vacuum_power")).epsilon(1e-10));
  }
}

TEST_CASE("waveguide power scaling is exact") {
  const RateResult base = evaluate(waveguide("st", Process::stimulated, 4e13, 1e-3));
  const RateResult doubled = evaluate(waveguide("st", Process::stimulated, 4e13, 2e-3));
  CHECK(doubled.rate / base.rate == doctest::Approx(2.0).epsilon(1e-12));
  const RateResult d1 = evaluate(waveguide("dst", Process::doubly_stimulated, 0, 1e-3));
  const RateResult d2 = evaluate(waveguide("dst", Process::doubly_stimulated, 0, 3e-3));
  CHECK(d2.rate / d1.rate == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("scaling exponents") {
  struct Case {
    Scenario s;
    std::string target;
    double lo, hi, exponent;
  };
  auto analytic = [](Scenario s) {
    auto& w = std::get<WaveguideScenario>(s.device);
    w.bandwidth.source = BandwidthSource::analytic;
    w.bandwidth.beta2 = 3.2e-26;
    return s;
  };
  const std::vector<Case> cases = {
      {analytic(waveguide("sp", Process::sp_degenerate, 0)), "L", 1e-3, 1e-1, 1.0},
      {analytic(waveguide("st", Process::stimulated, 0, 1e-2)), "L", 1e-3, 1e-1, 1.5},
      {waveguide("dst", Process::doubly_stimulated, 0, 1e-2), "L", 1e-3, 1e-1, 2.0},
      {ring("sp", Process::sp_degenerate), "Lring", 1e-4, 1e-2, -2.0},
      {ring("st", Process::stimulated, 2e-5), "Lring", 1e-4, 1e-2, -2.0},
      {ring("dst", Process::doubly_stimulated, 2e-5), "Lring", 1e-4, 1e-2, -2.0},
      {ring("sp", Process::sp_degenerate), "Q_all", 1e-2, 1.0, 2.0},
      {ring("st", Process::stimulated, 2e-5), "Q_all", 1e-2, 1.0, 3.0},
      {ring("dst", Process::doubly_stimulated, 2e-5), "Q_all", 1e-2, 1.0, 4.0},
      {ring("sp", Process::sp_degenerate), "Q_P", 1e3, 1e5, 1.0},
      {ring("sp", Process::sp_degenerate), "Q_F", 1e5, 1e7, 1.0},
      {ring("st", Process::stimulated, 2e-5), "Q_S", 1e5, 1e7, 1.0},
      {ring("dst", Process::doubly_stimulated, 2e-5), "Q_S", 1e5, 1e7, 2.0},
      {ring("sp", Process::sp_degenerate), "P_P", 1e-3, 1e-1, 1.0},
      {ring("st", Process::stimulated, 2e-5), "P_S", 2e-7, 2e-5, 1.0},
      {ring("dst", Process::doubly_stimulated, 2e-5), "P_S", 2e-7, 2e-5, 2.0},
  };
  for (const auto& c : cases) {
    CAPTURE(c.s.name);
    CAPTURE(c.target);
    const auto fit = scaling_exponents(c.s, parse_scaling_target(c.target), decades(c.lo, c.hi, 9));
    CHECK(fit.exponent == doctest::Approx(c.exponent).epsilon(0.01));
  }
}

TEST_CASE("power law fit recovers random exponents") {
  test::Gen gen(77);
  for (int trial = 0; trial < 50; ++trial) {
    const double p = gen.uniform(-4, 4), a = gen.log_uniform(1e-6, 1e6);
    const auto x = decades(gen.log_uniform(1e-3, 1), gen.log_uniform(10, 1e3), gen.integer(2, 20));
    std::vector<double> y;
    for (double v : x) y.push_back(a * std::pow(v, p));
    const auto fit = fit_power_law(x, y);
    CHECK(fit.exponent == doctest::Approx(p).epsilon(1e-9));
    CHECK(fit.max_residual < 1e-9);
  }
}

TEST_CASE("sweep targets parse and apply") {
  CHECK(to_string(parse_scaling_target("Q_Gbar")) == "Q_Gbar");
  CHECK_THROWS_AS(parse_scaling_target("Q"), ParseError);
  CHECK_THROWS_AS(parse_scaling_target("bogus"), ParseError);
  const Scenario s = ring("sp", Process::sp_degenerate);
  const Scenario q = with_parameter(s, parse_scaling_target("Q_all"), 0.5);
  CHECK(std::get<RingScenario>(q.device).spec.at(band::P).quality == doctest::Approx(5e4));
  CHECK_THROWS_AS(with_parameter(s, parse_scaling_target("L"), 1.0), DomainError);
}

TEST_CASE("unsupported and invalid scenarios fail loudly") {
  Scenario nd = waveguide("nd", Process::sp_nondegenerate, 1e13);
  CHECK_THROWS_AS(evaluate(nd), DomainError);
  CHECK_THROWS_AS(evaluate(waveguide("st", Process::stimulated, 4e13, 0.0)), DomainError);
  CHECK_THROWS_AS(evaluate(ring("st", Process::stimulated, 0.0)), DomainError);
  Scenario neg = ring("neg", Process::sp_degenerate);
  neg.pump_power = -1;
  CHECK_THROWS_AS(evaluate(neg), DomainError);
  Scenario missing = waveguide("missing", Process::sp_degenerate, 2.9e13);
  std::get<WaveguideScenario>(missing.device).bandwidth.tau_inv.reset();
  CHECK_THROWS_AS(evaluate(missing), DomainError);
  try {
    evaluate(nd);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("nd") != std::string::npos);
  }
}

TEST_CASE("field enhancement is a Lorentzian") {
  const RingSpec spec = test::sample_ring();
  const double g = spec.at(band::F).linewidth();
  const double peak = field_enhancement(spec, band::F, 0.0);
  CHECK(peak == doctest::Approx(2 * spec.at(band::F).group_velocity * 0.5 / (spec.circumference * g)).epsilon(1e-14));
  CHECK(field_enhancement(spec, band::F, g) == doctest::Approx(peak / 2).epsilon(1e-12));
  CHECK(field_enhancement(spec, band::F, 0.3 * g) < peak);
}
