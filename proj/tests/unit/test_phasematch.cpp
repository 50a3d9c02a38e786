#include <doctest.h>

#include <cmath>
#include <memory>
#include <unsupported/Eigen/Polynomials>

#include "fixtures.hpp"
#include "topdc/bandwidth.hpp"
#include "topdc/constants.hpp"
#include "topdc/error.hpp"
#include "topdc/phasematch.hpp"

using namespace topdc;

namespace {

WaveguideSpec sample_waveguide() {
  WaveguideSpec spec;
  spec.length = 0.01;
  spec.bands[band::F] = std::make_shared<const DispersionModel>(test::sample_model("F"));
  spec.bands[band::P] = std::make_shared<const DispersionModel>(test::sample_model("P"));
  spec.gammas = NonlinearParameterSet::uniform(0.19, 4.3, 0.8);
  return spec;
}

// Real positive roots of x((d0 + a x)^2 + G^2) - P b = 0.
std::vector<double> cubic_roots(double a, double d0, double gam, double pb) {
  Eigen::Vector4d c;
  c << -pb, d0 * d0 + gam * gam, 2 * a * d0, a * a;
  Eigen::PolynomialSolver<double, 3> solver(c);
  std::vector<double> roots;
  for (int i = 0; i < 3; ++i) {
    const auto r = solver.roots()[i];
    if (std::abs(r.imag()) <= 1e-9 * std::abs(r.real()) && r.real() > 0) roots.push_back(r.real());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double buildup_coefficient(const RingSpec& ring) {
  const auto& p = ring.at(band::P);
  return 2.0 * p.group_velocity * p.escape_efficiency * p.linewidth() / ring.circumference;
}

}  // namespace

TEST_CASE("process names round trip") {
  for (auto p : {Process::sp_degenerate, Process::sp_nondegenerate, Process::stimulated, Process::doubly_stimulated}) {
    CHECK(parse_process(to_string(p)) == p);
  }
  CHECK(is_spontaneous(Process::sp_nondegenerate));
  CHECK_FALSE(is_spontaneous(Process::stimulated));
  CHECK_THROWS_AS(parse_process("spdc"), ParseError);
}

TEST_CASE("mismatch with explicit components") {
  const std::map<std::string, double> k = {{band::P, 10.0}, {band::F, 3.0}, {band::S, 2.0}, {band::G, 3.5}, {band::Gbar, 5.0}};
  CHECK(mismatch(Process::sp_degenerate, k) == doctest::Approx(1.0));
  CHECK(mismatch(Process::stimulated, k) == doctest::Approx(1.0));
  CHECK(mismatch(Process::doubly_stimulated, k) == doctest::Approx(1.0));
  const std::vector<double> three = {3.0, 3.5, 2.5};
  CHECK(mismatch(Process::sp_degenerate, k, three) == doctest::Approx(1.0));
  CHECK_THROWS_AS(mismatch(Process::stimulated, k, three), DomainError);
}

TEST_CASE("degenerate phase matching on the sample dataset") {
  const auto spec = sample_waveguide();
  PhaseMatchRequest rq;
  rq.process = Process::sp_degenerate;
  rq.lambda_min = 1.5e-6;
  rq.lambda_max = 1.9e-6;
  rq.pump_power = 0.1;
  const auto r = find_phase_matched(spec, rq);
  CHECK(r.root);
  CHECK(r.unknown_band == band::F);
  CHECK(std::abs(r.mismatch) <= 1e-3);
  CHECK(r.wavelength(band::F) == doctest::Approx(1.72e-6).epsilon(1e-3));
  CHECK(r.wavelength(band::P) * 3 == doctest::Approx(r.wavelength(band::F)).epsilon(1e-12));
  CHECK(r.energy_residual == 0.0);
  // SPM shift at 100 mW is far below the pump wavenumber.
  const double kp = spec.model(band::P).wavenumber(r.omega.at(band::P));
  CHECK(kp == doctest::Approx(1.97e7).epsilon(2e-3));
  CHECK(std::log10(kp / (4.3 * 0.1)) >= 7.0);
}

TEST_CASE("stimulated and doubly stimulated phase matching") {
  const auto spec = sample_waveguide();
  const double wp = 3 * omega_from_wavelength(test::lambda_f);
  PhaseMatchRequest st;
  st.process = Process::stimulated;
  st.lambda_min = 2.1e-6;
  st.lambda_max = 2.5e-6;
  st.omega_pump = wp;
  const auto r = find_phase_matched(spec, st);
  CHECK(r.root);
  CHECK(r.unknown_band == band::S);
  CHECK(std::abs(r.mismatch) <= 1e-3);
  CHECK(r.wavelength(band::S) == doctest::Approx(2.3e-6).epsilon(2e-3));
  CHECK(std::abs(r.energy_residual) <= 1e-6 * wp);

  PhaseMatchRequest dst;
  dst.process = Process::doubly_stimulated;
  dst.lambda_min = 1.0e-6;
  dst.lambda_max = 1.3e-6;
  dst.omega_pump = wp;
  dst.omega_seed = omega_from_wavelength(test::lambda_s);
  const auto d = find_phase_matched(spec, dst);
  CHECK(d.unknown_band == band::Gbar);
  CHECK(std::abs(d.mismatch) <= 1e-3);
  CHECK(d.omega.at(band::Gbar) == doctest::Approx(wp - 2 * *dst.omega_seed).epsilon(1e-3));

  st.omega_seed = 1.0;
  CHECK_THROWS_AS(find_phase_matched(spec, st), DomainError);
}

TEST_CASE("a dispersionless medium is flagged degenerate") {
  WaveguideSpec spec;
  spec.length = 0.01;
  // n_eff = n_g = 2.1 everywhere, so k(3w) = 3 k(w) identically.
  const double k0 = 2.1 * omega_from_wavelength(test::lambda_f) / constants::c;
  const auto flat = std::make_shared<const DispersionModel>(
      build_model(test::quadratic_table(0.0, 0.4e-6, 2.6e-6, 200, test::lambda_f, k0, 2.1)));
  spec.bands[band::F] = flat;
  spec.bands[band::P] = flat;
  PhaseMatchRequest rq;
  rq.lambda_min = 1.5e-6;
  rq.lambda_max = 1.9e-6;
  const auto r = find_phase_matched(spec, rq);
  CHECK(r.degenerate_medium);
}

TEST_CASE("circulating power is a Lorentzian in the detuning") {
  const RingSpec ring = test::sample_ring();
  const double g = ring.at(band::P).linewidth();
  const double peak = circulating_power(ring, band::P, 0.1, 0.0);
  CHECK(peak == doctest::Approx(1.05).epsilon(0.02));
  CHECK(circulating_power(ring, band::P, 0.1, g) == doctest::Approx(peak / 2).epsilon(1e-12));
  CHECK(circulating_power(ring, band::P, 0.1, -g) == doctest::Approx(peak / 2).epsilon(1e-12));
  test::Gen gen(23);
  for (int i = 0; i < 100; ++i) {
    const double d = gen.uniform(-10 * g, 10 * g);
    CHECK(circulating_power(ring, band::P, 0.1, d) <= peak);
    const double p = gen.uniform(0.0, 1.0);
    CHECK(circulating_power(ring, band::P, p, d) == doctest::Approx(p * circulating_power(ring, band::P, 1.0, d)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(circulating_power(ring, band::P, -1.0, 0.0), DomainError);
}

TEST_CASE("self-consistent pump solves the steady-state cubic") {
  test::Gen gen(31);
  for (int trial = 0; trial < 60; ++trial) {
    RingSpec ring = test::sample_ring();
    ring.gammas.spm = gen.log_uniform(0.1, 1e4);
    const auto& p = ring.at(band::P);
    const double power = gen.log_uniform(1e-3, 1.0);
    const double d0 = gen.uniform(-5, 5) * p.linewidth();
    const double a = std::abs(ring.gammas.spm) * p.group_velocity;
    const auto roots = cubic_roots(a, d0, p.linewidth(), power * buildup_coefficient(ring));
    REQUIRE(!roots.empty());
    try {
      const PumpState s = self_consistent_pump(ring, power, p.omega + d0);
      const double pc = s.circulating_power;
      const bool matches = std::any_of(roots.begin(), roots.end(), [&](double r) { return std::abs(pc - r) <= 1e-9 * r; });
      CHECK(matches);
      CHECK(s.multistable == (roots.size() == 3));
      if (roots.size() == 1) CHECK(pc == doctest::Approx(roots[0]).epsilon(1e-10));
    } catch (const BistabilityError& e) {
      CHECK(roots.size() == 3);
      CHECK(e.lower() <= e.upper());
    }
  }
}

TEST_CASE("SPM fixed point stays within 0.1 percent of the cold buildup") {
  const RingSpec ring = test::sample_ring();
  const PumpState s = resolve_optimal_pump(ring, Process::sp_degenerate, 0.1);
  RingSpec cold = ring;
  cold.gammas.spm = 0.0;
  cold.gammas.xpm = 0.0;
  const PumpState c = resolve_optimal_pump(cold, Process::sp_degenerate, 0.1);
  CHECK(s.circulating_power == doctest::Approx(c.circulating_power).epsilon(1e-3));
  CHECK(c.circulating_power == doctest::Approx(1.05).epsilon(0.02));
  CHECK_FALSE(s.multistable);
  // Detuning on the tens-of-MHz scale, far below the pump linewidth.
  CHECK(std::abs(s.detuning) / (2 * constants::pi) > 1e6);
  CHECK(std::abs(s.detuning) / (2 * constants::pi) < 1e8);
  CHECK(std::abs(s.detuning) < ring.at(band::P).linewidth() / 100);
}

TEST_CASE("optimal detuning maximises the ring bandwidth") {
  const RingSpec ring = test::sample_ring();
  for (auto process : {Process::sp_degenerate, Process::stimulated}) {
    const PumpState s = resolve_optimal_pump(ring, process, 0.1);
    const auto& hot = s.hot_omega;
    const bool sp = process == Process::sp_degenerate;
    auto energy = [&](double det) {
      return sp ? hot.at(band::P) + det - 3 * hot.at(band::F) : hot.at(band::P) + det - 2 * hot.at(band::G) - hot.at(band::S);
    };
    const RingBandwidthKind kind = sp ? RingBandwidthKind::sp_degenerate : RingBandwidthKind::stimulated;
    const double gen = ring.at(sp ? band::F : band::G).linewidth();
    auto tau = [&](double det) { return tau_ring(kind, {gen, 0}, energy(det)).tau_inv; };
    CHECK(std::abs(energy(s.detuning)) <= 1e-6 * gen);
    for (double step : {0.01, 0.1, 1.0}) {
      CHECK(tau(s.detuning + step * gen) < tau(s.detuning));
      CHECK(tau(s.detuning - step * gen) < tau(s.detuning));
    }
  }
}

TEST_CASE("hot resonances shift down with circulating power") {
  const RingSpec ring = test::sample_ring();
  const auto cold = hot_resonances(ring, 0.0);
  const auto hot = hot_resonances(ring, 1.0);
  for (const auto& [b, w] : cold) CHECK(hot.at(b) < w);
  const auto dk = hot_wavenumber_shifts(ring, 1.0);
  CHECK(dk.at(band::P) == doctest::Approx(-4.3));
  CHECK(dk.at(band::F) == doctest::Approx(-1.6));
}

TEST_CASE("fixed detuning resolves without iteration") {
  const RingSpec ring = test::sample_ring();
  const double g = ring.at(band::P).linewidth();
  const PumpState s = resolve_detuned_pump(ring, 0.1, g);
  CHECK(s.circulating_power == doctest::Approx(circulating_power(ring, band::P, 0.1, 0.0) / 2).epsilon(1e-12));
  CHECK(s.detuning == doctest::Approx(g).epsilon(1e-9));
}
