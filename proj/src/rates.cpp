#include "topdc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "topdc/constants.hpp"
#include "topdc/error.hpp"
#include "topdc/quadrature.hpp"

namespace topdc {
namespace {

using constants::hbar;

const WaveguideScenario& wg(const Scenario& s, const char* what) {
  if (!std::holds_alternative<WaveguideScenario>(s.device)) {
    throw DomainError(std::string(what) + ": scenario '" + s.name + "' is not a waveguide");
  }
  return std::get<WaveguideScenario>(s.device);
}

const RingScenario& ring_of(const Scenario& s, const char* what) {
  if (!std::holds_alternative<RingScenario>(s.device)) {
    throw DomainError(std::string(what) + ": scenario '" + s.name + "' is not a ring");
  }
  return std::get<RingScenario>(s.device);
}

void check_process(const Scenario& s, Process expected, const char* what) {
  if (s.process != expected) {
    throw DomainError(std::string(what) + ": scenario '" + s.name + "' is " + to_string(s.process));
  }
}

void check_powers(const Scenario& s, const char* what) {
  if (s.pump_power < 0 || s.seed_power < 0) {
    throw DomainError(std::string(what) + ": powers must be non-negative");
  }
}

double positive_gamma(cplx g, const char* name) {
  const double m = std::abs(g);
  if (!(m > 0) || !std::isfinite(m)) throw DomainError(std::string("nonlinear parameter ") + name + " not set");
  return m;
}

RateResult start(const Scenario& s, const char* device, double omega_pump) {
  RateResult r;
  r.scenario = s.name;
  r.process = s.process;
  r.device = device;
  if (!(omega_pump > 0)) throw DomainError("scenario '" + s.name + "': pump frequency missing");
  r.pump_photon_rate = s.pump_power / (hbar * omega_pump);
  return r;
}

void finish(RateResult& r) {
  r.efficiency = r.pump_photon_rate > 0 ? r.rate / r.pump_photon_rate : 0.0;
  r.notes.push_back("frequencies are angular (rad/s); 1 GHz in reports means 1e9 rad/s");
}

// Band frequencies with energy conservation filling the gaps.
std::map<std::string, double> resolve_frequencies(const Scenario& s, const WaveguideScenario& w) {
  auto om = w.omega;
  auto has = [&](const std::string& b) { return om.count(b) && om[b] > 0; };
  switch (s.process) {
    case Process::sp_degenerate:
      if (!has(band::P) && has(band::F)) om[band::P] = 3.0 * om[band::F];
      if (!has(band::F) && has(band::P)) om[band::F] = om[band::P] / 3.0;
      break;
    case Process::sp_nondegenerate:
    case Process::stimulated:
      if (!has(band::G) && has(band::P) && has(band::S)) om[band::G] = (om[band::P] - om[band::S]) / 2.0;
      break;
    case Process::doubly_stimulated:
      if (!has(band::Gbar) && has(band::P) && has(band::S)) om[band::Gbar] = om[band::P] - 2.0 * om[band::S];
      break;
  }
  return om;
}

double need(const std::map<std::string, double>& m, const std::string& b, const Scenario& s) {
  auto it = m.find(b);
  if (it == m.end() || !(it->second > 0)) {
    throw DomainError("scenario '" + s.name + "': frequency of band '" + b + "' missing");
  }
  return it->second;
}

BandwidthResult waveguide_bandwidth(const Scenario& s, const WaveguideScenario& w,
                                    const std::map<std::string, double>& om, RateResult& r) {
  const bool sp = s.process == Process::sp_degenerate;
  const std::string gen = sp ? band::F : band::G;
  const double L = w.spec.length;
  BandwidthResult b;
  switch (w.bandwidth.source) {
    case BandwidthSource::injected:
      if (!w.bandwidth.tau_inv || !(*w.bandwidth.tau_inv >= 0)) {
        throw DomainError("scenario '" + s.name + "': injected bandwidth missing");
      }
      b.tau_inv = *w.bandwidth.tau_inv;
      b.tau_inv_sq = b.tau_inv * b.tau_inv;
      b.method = BandwidthMethod::injected;
      break;
    case BandwidthSource::analytic: {
      double beta2 = 0.0;
      if (w.bandwidth.beta2) {
        beta2 = *w.bandwidth.beta2;
      } else if (w.spec.has_model(gen)) {
        beta2 = w.spec.model(gen).group_quantities(need(om, gen, s)).beta2;
      } else {
        throw DomainError("scenario '" + s.name + "': analytic bandwidth needs beta2 or a dispersion model");
      }
      b.tau_inv = sp ? tau_sp_wg_analytic(beta2, L) : tau_st_wg_analytic(beta2, L);
      b.tau_inv_sq = b.tau_inv * b.tau_inv;
      b.method = BandwidthMethod::analytic;
      r.diagnostics["beta2"] = beta2;
      break;
    }
    case BandwidthSource::numeric: {
      if (sp) {
        SpWaveguideBandwidthInput in;
        in.fundamental = &w.spec.model(band::F);
        in.pump = &w.spec.model(band::P);
        in.omega_pump = need(om, band::P, s);
        in.length = L;
        in.pump_power = s.pump_power;
        in.gamma_spm = std::abs(w.spec.gammas.spm);
        in.gamma_xpm = w.spec.gammas.xpm_for(band::F);
        in.bounds = w.bandwidth.bounds;
        r.diagnostics["upsilon"] = upsilon_sp_wg(in);
        b = tau_sp_wg_numeric(in, w.bandwidth.quadrature);
      } else {
        const auto kbar = shifted_wavenumbers_wg(
            w.spec, s.pump_power,
            {{band::P, need(om, band::P, s)}, {band::S, need(om, band::S, s)}, {band::G, need(om, band::G, s)}});
        const double ups = mismatch(Process::stimulated, kbar) * L / 2.0;
        r.diagnostics["upsilon"] = ups;
        b = tau_st_wg_numeric(w.spec.model(band::G), om.at(band::G), ups, L, w.bandwidth.bounds,
                              w.bandwidth.quadrature);
      }
      r.diagnostics["quadrature_rel_error"] = b.diagnostics.estimated_rel_error;
      r.diagnostics["quadrature_evaluations"] =
          static_cast<double>(b.diagnostics.outer_evaluations + b.diagnostics.inner_evaluations);
      break;
    }
  }
  r.bandwidth_method = b.method;
  return b;
}

}  // namespace

std::string to_string(BandwidthSource s) {
  switch (s) {
    case BandwidthSource::injected: return "injected";
    case BandwidthSource::analytic: return "analytic";
    case BandwidthSource::numeric: return "numeric";
  }
  return "unknown";
}

BandwidthSource parse_bandwidth_source(const std::string& s) {
  for (auto v : {BandwidthSource::injected, BandwidthSource::analytic, BandwidthSource::numeric}) {
    if (to_string(v) == s) return v;
  }
  throw ParseError("unknown bandwidth method '" + s + "'");
}

double field_enhancement(const RingSpec& ring, const std::string& b, double detuning) {
  const Resonance& r = ring.at(b);
  const double g = r.linewidth();
  if (!(g > 0)) throw DomainError("field_enhancement: linewidth must be positive");
  return (2.0 * r.group_velocity * r.escape_efficiency * g / ring.circumference) / (detuning * detuning + g * g);
}

RateResult rate_sp_wg(const Scenario& s) {
  const auto& w = wg(s, "rate_sp_wg");
  check_process(s, Process::sp_degenerate, "rate_sp_wg");
  check_powers(s, "rate_sp_wg");
  w.spec.validate();
  const auto om = resolve_frequencies(s, w);
  RateResult r = start(s, "waveguide", need(om, band::P, s));
  const double wf = need(om, band::F, s);
  const BandwidthResult b = waveguide_bandwidth(s, w, om, r);
  r.gamma = positive_gamma(w.spec.gammas.fff, "gamma_FFF");
  r.tau_inv = b.tau_inv;
  r.vacuum_power = vacuum_power(wf, b.tau_inv);
  const double gl = r.gamma * w.spec.length;
  r.rate = gl * gl * r.vacuum_power * r.vacuum_power * r.pump_photon_rate;
  finish(r);
  return r;
}

RateResult rate_st_wg(const Scenario& s) {
  const auto& w = wg(s, "rate_st_wg");
  check_process(s, Process::stimulated, "rate_st_wg");
  check_powers(s, "rate_st_wg");
  if (!(s.seed_power > 0)) throw DomainError("rate_st_wg: scenario '" + s.name + "' needs a seed power");
  w.spec.validate();
  const auto om = resolve_frequencies(s, w);
  RateResult r = start(s, "waveguide", need(om, band::P, s));
  const double wg_ = need(om, band::G, s);
  const BandwidthResult b = waveguide_bandwidth(s, w, om, r);
  r.gamma = positive_gamma(w.spec.gammas.gg_s, "gamma_GG(S)");
  r.tau_inv = b.tau_inv;
  r.vacuum_power = vacuum_power(wg_, b.tau_inv);
  const double gl = r.gamma * w.spec.length;
  r.rate = gl * gl * s.seed_power * r.vacuum_power * r.pump_photon_rate;
  finish(r);
  return r;
}

RateResult rate_dst_wg(const Scenario& s) {
  const auto& w = wg(s, "rate_dst_wg");
  check_process(s, Process::doubly_stimulated, "rate_dst_wg");
  check_powers(s, "rate_dst_wg");
  w.spec.validate();
  const auto om = resolve_frequencies(s, w);
  RateResult r = start(s, "waveguide", need(om, band::P, s));
  double dk = 0.0;
  if (w.mismatch) {
    dk = *w.mismatch;
  } else if (w.spec.has_model(band::P) && w.spec.has_model(band::S) && w.spec.has_model(band::Gbar)) {
    dk = mismatch(Process::doubly_stimulated,
                  shifted_wavenumbers_wg(w.spec, s.pump_power,
                                         {{band::P, need(om, band::P, s)},
                                          {band::S, need(om, band::S, s)},
                                          {band::Gbar, need(om, band::Gbar, s)}}));
  } else {
    r.notes.push_back("no dispersion models: doubly stimulated process taken as phase matched");
  }
  r.gamma = positive_gamma(w.spec.gammas.gbar_ss, "gamma_Gbar(SS)");
  const double L = w.spec.length;
  const double x = sinc(dk * L / 2.0);
  const double gl = r.gamma * L * s.seed_power;
  r.rate = gl * gl * x * x * r.pump_photon_rate / (2.0 * constants::pi);
  r.bandwidth_method = BandwidthMethod::analytic;
  r.diagnostics["mismatch"] = dk;
  r.diagnostics["sinc2"] = x * x;
  finish(r);
  return r;
}

namespace {

struct RingContext {
  const RingSpec* ring = nullptr;
  PumpState pump;
  double f_pump = 0.0;
  double pump_detuning_used = 0.0;
};

RingContext ring_context(const Scenario& s, const RingScenario& rs, RateResult& r) {
  rs.spec.validate();
  RingContext c;
  c.ring = &rs.spec;
  c.pump = rs.pump_detuning ? resolve_detuned_pump(rs.spec, s.pump_power, *rs.pump_detuning)
                            : resolve_optimal_pump(rs.spec, s.process, s.pump_power, rs.seed_detuning);
  const Resonance& p = rs.spec.at(band::P);
  // Keep the pump Lorentzian on resonance only when the detuning is far inside the linewidth.
  const bool small = std::abs(c.pump.detuning) < p.linewidth() / 100.0;
  c.pump_detuning_used = small ? 0.0 : c.pump.detuning;
  c.f_pump = field_enhancement(rs.spec, band::P, c.pump_detuning_used);
  r.enhancement[band::P] = c.f_pump;
  r.diagnostics["circulating_pump_power"] = c.pump.circulating_power;
  r.diagnostics["pump_detuning"] = c.pump.detuning;
  r.diagnostics["pump_detuning_cyclic_hz"] = c.pump.detuning / (2.0 * constants::pi);
  r.diagnostics["pump_linewidth"] = p.linewidth();
  r.diagnostics["pump_iterations"] = static_cast<double>(c.pump.iterations);
  r.notes.push_back(small ? "pump Lorentzian evaluated on resonance (|detuning| < linewidth/100)"
                          : "pump Lorentzian evaluated at the full detuning");
  r.notes.push_back(rs.pump_detuning ? "pump detuning fixed by the scenario"
                                     : "pump detuning chosen to zero the hot-resonance energy mismatch");
  for (const auto& [b, res] : rs.spec.resonances) {
    r.diagnostics["escape_efficiency_" + b] = res.escape_efficiency;
  }
  return c;
}

}  // namespace

RateResult rate_sp_ring_degenerate(const Scenario& s) {
  const auto& rs = ring_of(s, "rate_sp_ring_degenerate");
  check_process(s, Process::sp_degenerate, "rate_sp_ring_degenerate");
  check_powers(s, "rate_sp_ring_degenerate");
  RateResult r = start(s, "ring", rs.spec.at(band::P).omega);
  const RingContext c = ring_context(s, rs, r);
  const Resonance& f = rs.spec.at(band::F);
  const auto& hot = c.pump.hot_omega;
  const double delta = hot.at(band::P) + c.pump.detuning - 3.0 * hot.at(band::F);
  const BandwidthResult b = tau_ring(RingBandwidthKind::sp_degenerate, {f.linewidth(), 0.0}, delta);
  const double ff = field_enhancement(rs.spec, band::F, 0.0);
  r.enhancement[band::F] = ff;
  r.gamma = positive_gamma(rs.spec.gammas.fff, "gamma_FFF");
  r.tau_inv = b.tau_inv;
  r.bandwidth_method = b.method;
  r.vacuum_power = vacuum_power(f.omega, b.tau_inv);
  r.diagnostics["energy_mismatch"] = delta;
  const double gl = r.gamma * rs.spec.circumference;
  r.rate = gl * gl * r.vacuum_power * r.vacuum_power * ff * ff * ff * c.f_pump * r.pump_photon_rate;
  finish(r);
  return r;
}

RateResult rate_sp_ring_nondegenerate(const Scenario& s) {
  const auto& rs = ring_of(s, "rate_sp_ring_nondegenerate");
  check_process(s, Process::sp_nondegenerate, "rate_sp_ring_nondegenerate");
  check_powers(s, "rate_sp_ring_nondegenerate");
  RateResult r = start(s, "ring", rs.spec.at(band::P).omega);
  const RingContext c = ring_context(s, rs, r);
  const Resonance& g = rs.spec.at(band::G);
  const Resonance& sd = rs.spec.at(band::S);
  const auto& hot = c.pump.hot_omega;
  const double delta = hot.at(band::P) + c.pump.detuning - 2.0 * hot.at(band::G) - hot.at(band::S);
  const BandwidthResult b =
      tau_ring(RingBandwidthKind::sp_nondegenerate, {g.linewidth(), sd.linewidth()}, delta);
  const double fg = field_enhancement(rs.spec, band::G, 0.0);
  const double fs = field_enhancement(rs.spec, band::S, 0.0);
  r.enhancement[band::G] = fg;
  r.enhancement[band::S] = fs;
  r.gamma = positive_gamma(rs.spec.gammas.ggs, "gamma_GGS");
  r.tau_inv = b.tau_inv;
  r.bandwidth_method = b.method;
  r.vacuum_power = vacuum_power(std::cbrt(g.omega * g.omega * sd.omega), b.tau_inv);
  r.diagnostics["energy_mismatch"] = delta;
  const double gl = r.gamma * rs.spec.circumference;
  r.rate = gl * gl * r.vacuum_power * r.vacuum_power * fg * fg * fs * c.f_pump * r.pump_photon_rate;
  finish(r);
  return r;
}

RateResult rate_st_ring(const Scenario& s) {
  const auto& rs = ring_of(s, "rate_st_ring");
  check_process(s, Process::stimulated, "rate_st_ring");
  check_powers(s, "rate_st_ring");
  if (!(s.seed_power > 0)) throw DomainError("rate_st_ring: scenario '" + s.name + "' needs a seed power");
  RateResult r = start(s, "ring", rs.spec.at(band::P).omega);
  const RingContext c = ring_context(s, rs, r);
  const Resonance& g = rs.spec.at(band::G);
  const Resonance& sd = rs.spec.at(band::S);
  const auto& hot = c.pump.hot_omega;
  const double delta_sp = hot.at(band::P) + c.pump.detuning - hot.at(band::S) - 2.0 * hot.at(band::G);
  const double delta = delta_sp - rs.seed_detuning;
  const BandwidthResult b = tau_ring(RingBandwidthKind::stimulated, {g.linewidth(), 0.0}, delta);
  const double fg = field_enhancement(rs.spec, band::G, 0.0);
  const double fs = field_enhancement(rs.spec, band::S, rs.seed_detuning);
  r.enhancement[band::G] = fg;
  r.enhancement[band::S] = fs;
  r.gamma = positive_gamma(rs.spec.gammas.gg_s, "gamma_GG(S)");
  r.tau_inv = b.tau_inv;
  r.bandwidth_method = b.method;
  r.vacuum_power = vacuum_power(g.omega, b.tau_inv);
  r.diagnostics["energy_mismatch"] = delta;
  r.diagnostics["effective_vacuum_power"] =
      effective_vacuum_power(g.linewidth(), sd.linewidth(), sd.omega, delta_sp, delta);
  const double gl = r.gamma * rs.spec.circumference;
  r.rate = gl * gl * s.seed_power * r.vacuum_power * fg * fg * fs * c.f_pump * r.pump_photon_rate;
  finish(r);
  return r;
}

RateResult rate_dst_ring(const Scenario& s) {
  const auto& rs = ring_of(s, "rate_dst_ring");
  check_process(s, Process::doubly_stimulated, "rate_dst_ring");
  check_powers(s, "rate_dst_ring");
  RateResult r = start(s, "ring", rs.spec.at(band::P).omega);
  const RingContext c = ring_context(s, rs, r);
  const Resonance& gb = rs.spec.at(band::Gbar);
  const auto& hot = c.pump.hot_omega;
  const double delta_gbar =
      hot.at(band::P) + c.pump.detuning - 2.0 * (hot.at(band::S) + rs.seed_detuning) - hot.at(band::Gbar);
  const double fs = field_enhancement(rs.spec, band::S, rs.seed_detuning);
  const double fgb = field_enhancement(rs.spec, band::Gbar, delta_gbar);
  r.enhancement[band::S] = fs;
  r.enhancement[band::Gbar] = fgb;
  r.gamma = positive_gamma(rs.spec.gammas.gbar_ss, "gamma_Gbar(SS)");
  r.bandwidth_method = BandwidthMethod::ring_closed_form;
  r.diagnostics["gbar_detuning"] = delta_gbar;
  r.diagnostics["gbar_detuning_over_linewidth"] = std::abs(delta_gbar) / gb.linewidth();
  const double gl = r.gamma * rs.spec.circumference * s.seed_power;
  r.rate = gl * gl * fs * fs * c.f_pump * fgb * r.pump_photon_rate;
  finish(r);
  return r;
}

RateResult evaluate(const Scenario& s) {
  if (s.is_ring()) {
    switch (s.process) {
      case Process::sp_degenerate: return rate_sp_ring_degenerate(s);
      case Process::sp_nondegenerate: return rate_sp_ring_nondegenerate(s);
      case Process::stimulated: return rate_st_ring(s);
      case Process::doubly_stimulated: return rate_dst_ring(s);
    }
  } else {
    switch (s.process) {
      case Process::sp_degenerate: return rate_sp_wg(s);
      case Process::sp_nondegenerate:
        throw DomainError("scenario '" + s.name +
                          "': the non-degenerate spontaneous waveguide rate has no closed form here; "
                          "use a ring device or the degenerate process");
      case Process::stimulated: return rate_st_wg(s);
      case Process::doubly_stimulated: return rate_dst_wg(s);
    }
  }
  throw DomainError("evaluate: unknown process");
}

std::string to_string(ScalingParameter p) {
  switch (p) {
    case ScalingParameter::length: return "L";
    case ScalingParameter::circumference: return "Lring";
    case ScalingParameter::quality: return "Q";
    case ScalingParameter::quality_scale: return "Q_all";
    case ScalingParameter::pump_power: return "P_P";
    case ScalingParameter::seed_power: return "P_S";
  }
  return "unknown";
}

ScalingTarget parse_scaling_target(const std::string& s) {
  if (s == "L") return {ScalingParameter::length, ""};
  if (s == "Lring") return {ScalingParameter::circumference, ""};
  if (s == "Q_all") return {ScalingParameter::quality_scale, ""};
  if (s == "P_P") return {ScalingParameter::pump_power, ""};
  if (s == "P_S") return {ScalingParameter::seed_power, ""};
  if (s.rfind("Q_", 0) == 0 && s.size() > 2) return {ScalingParameter::quality, s.substr(2)};
  throw ParseError("unknown sweep parameter '" + s + "' (expected L, Lring, Q_<band>, Q_all, P_P or P_S)");
}

std::string to_string(const ScalingTarget& t) {
  return t.parameter == ScalingParameter::quality ? "Q_" + t.band : to_string(t.parameter);
}

Scenario with_parameter(const Scenario& base, const ScalingTarget& t, double value) {
  Scenario s = base;
  const bool ring_only = t.parameter == ScalingParameter::circumference || t.parameter == ScalingParameter::quality ||
                         t.parameter == ScalingParameter::quality_scale;
  if (t.parameter == ScalingParameter::length && s.is_ring()) {
    throw DomainError("sweep: L applies to waveguide scenarios; '" + s.name + "' is a ring");
  }
  if (ring_only && !s.is_ring()) {
    throw DomainError("sweep: " + to_string(t) + " applies to ring scenarios; '" + s.name + "' is a waveguide");
  }
  switch (t.parameter) {
    case ScalingParameter::length:
      std::get<WaveguideScenario>(s.device).spec.length = value;
      break;
    case ScalingParameter::circumference:
      std::get<RingScenario>(s.device).spec.circumference = value;
      break;
    case ScalingParameter::quality: {
      auto& res = std::get<RingScenario>(s.device).spec.resonances;
      auto it = res.find(t.band);
      if (it == res.end()) throw DomainError("sweep: ring has no resonance '" + t.band + "'");
      it->second.quality = value;
      break;
    }
    case ScalingParameter::quality_scale:
      for (auto& [b, r] : std::get<RingScenario>(s.device).spec.resonances) r.quality *= value;
      break;
    case ScalingParameter::pump_power:
      s.pump_power = value;
      break;
    case ScalingParameter::seed_power:
      s.seed_power = value;
      break;
  }
  return s;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_power_law: need matching samples");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw DomainError("fit_power_law: non-positive value in family");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0)) throw DomainError("fit_power_law: grid has no spread");
  PowerLawFit f;
  f.exponent = sxy / sxx;
  f.log_prefactor = my - f.exponent * mx;
  for (std::size_t i = 0; i < n; ++i) {
    f.max_residual = std::max(f.max_residual, std::abs(ly[i] - f.log_prefactor - f.exponent * lx[i]));
  }
  return f;
}

PowerLawFit scaling_exponents(const Scenario& base, const ScalingTarget& target, std::span<const double> grid) {
  if (grid.size() < 5) throw DomainError("scaling_exponents: need at least 5 grid points");
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  if (!(*lo > 0) || *hi / *lo < 10.0 * (1.0 - 1e-12)) {
    throw DomainError("scaling_exponents: grid must be positive and span at least one decade");
  }
  std::vector<double> rates;
  rates.reserve(grid.size());
  for (double v : grid) {
    const double rate = evaluate(with_parameter(base, target, v)).rate;
    if (!(rate > 0)) {
      std::ostringstream os;
      os << "scaling_exponents: non-positive rate at " << to_string(target) << " = " << v;
      throw DomainError(os.str());
    }
    rates.push_back(rate);
  }
  return fit_power_law(grid, rates);
}

}  // namespace topdc
