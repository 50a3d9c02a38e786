#include "topdc/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "topdc/constants.hpp"
#include "topdc/error.hpp"
#include "topdc/quadrature.hpp"

namespace topdc {
namespace {

using constants::pi;

double sinc2(double x) {
  const double s = sinc(x);
  return s * s;
}

// Keeps round-off at the window edges from tripping the model's range check.
double clamp_to(const FrequencyBounds& b, double omega) {
  return std::clamp(omega, b.omega_min, b.omega_max);
}

// Initial subdivision count giving `nodes_per_period` nodes per sinc^2 period,
// judged from the total variation of the phase sampled along the interval.
template <class Phase>
std::size_t initial_intervals(const Phase& phase, double a, double b, int nodes_per_period) {
  constexpr int samples = 64;
  double tv = 0.0, prev = phase(a);
  for (int i = 1; i <= samples; ++i) {
    const double cur = phase(a + (b - a) * i / samples);
    tv += std::abs(cur - prev);
    prev = cur;
  }
  const double periods = tv / pi;
  return 1 + static_cast<std::size_t>(std::ceil(nodes_per_period * periods / 15.0));
}

void check_window(const FrequencyBounds& b, double center, const char* what) {
  if (!(center > b.omega_min && center < b.omega_max)) {
    std::ostringstream os;
    os << what << ": centre frequency " << center << " rad/s not inside the generation window ["
       << b.omega_min << ", " << b.omega_max << "]";
    throw DomainError(os.str());
  }
}

void check_length(double length, const char* what) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError(std::string(what) + ": length must be positive");
  }
}

void finish_numeric(BandwidthResult& r, const BandwidthQuadratureOptions& options, const char* what) {
  if (!r.diagnostics.converged || r.diagnostics.estimated_rel_error > options.acceptable_rel_error) {
    std::ostringstream os;
    os << what << ": quadrature did not reach the requested accuracy (estimated relative error "
       << r.diagnostics.estimated_rel_error << ")";
    throw ConvergenceError(os.str());
  }
}

}  // namespace

std::string to_string(BandwidthMethod method) {
  switch (method) {
    case BandwidthMethod::injected: return "injected";
    case BandwidthMethod::analytic: return "analytic";
    case BandwidthMethod::numeric: return "numeric";
    case BandwidthMethod::ring_closed_form: return "ring-closed-form";
    case BandwidthMethod::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

FrequencyBounds resolve_bounds(const DispersionModel& model, const std::optional<FrequencyBounds>& bounds) {
  if (!bounds) return {model.omega_min(), model.omega_max()};
  const FrequencyBounds b = *bounds;
  if (b.omega_min > b.omega_max) throw DomainError("frequency bounds inverted");
  if (!model.contains(b.omega_min) || !model.contains(b.omega_max)) {
    std::ostringstream os;
    os << "frequency bounds [" << b.omega_min << ", " << b.omega_max << "] exceed band '"
       << model.band_label() << "' range [" << model.omega_min() << ", " << model.omega_max() << "]";
    throw DomainError(os.str());
  }
  return b;
}

BandwidthResult tau_sp_wg_numeric(const DispersionModel& model, double omega_pump, double upsilon,
                                  double length, const std::optional<FrequencyBounds>& bounds,
                                  const BandwidthQuadratureOptions& options) {
  check_length(length, "tau_sp_wg_numeric");
  const FrequencyBounds b = resolve_bounds(model, bounds);
  BandwidthResult r;
  r.method = BandwidthMethod::numeric;
  if (b.omega_min == b.omega_max) return r;
  const double wf = omega_pump / 3.0;
  check_window(b, wf, "tau_sp_wg_numeric");

  const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  const double kf = model.wavenumber(wf);
  auto delta_sum = [&](double o1, double o2) {
    const double d1 = 2.0 / s6 * o2;
    const double d2 = -o1 / s2 - o2 / s6;
    const double d3 = o1 / s2 - o2 / s6;
    return model.wavenumber(clamp_to(b, wf + d1)) + model.wavenumber(clamp_to(b, wf + d2)) +
           model.wavenumber(clamp_to(b, wf + d3)) - 3.0 * kf;
  };
  auto phase = [&](double o1, double o2) { return upsilon - delta_sum(o1, o2) * length / 2.0; };
  auto inner_limits = [&](double o2) {
    const double c = b.omega_max - wf + o2 / s6;
    const double d = b.omega_min - wf + o2 / s6;
    return std::pair{std::max(-s2 * c, s2 * d), std::min(s2 * c, -s2 * d)};
  };

  const double o2min = s6 / 2.0 * b.omega_min - omega_pump / s6;
  const double o2max = s6 / 2.0 * b.omega_max - omega_pump / s6;

  QuadratureOptions inner_opt;
  inner_opt.rel_tol = options.rel_tol * 0.1;
  inner_opt.max_intervals = options.max_intervals;
  // Inner integrals near the window corners are tiny; an absolute floor keeps
  // them from dominating the work.
  inner_opt.abs_tol = options.rel_tol * 1e-3 * (o2max - o2min);

  std::size_t inner_evals = 0, max_initial = 0;
  double worst_inner_err = 0.0;
  bool inner_ok = true;
  auto outer_integrand = [&](double o2) {
    const auto [lo, hi] = inner_limits(o2);
    if (!(hi > lo)) return 0.0;
    QuadratureOptions opt = inner_opt;
    opt.initial_intervals = initial_intervals([&](double o1) { return phase(o1, o2); }, lo, hi,
                                              options.nodes_per_period);
    max_initial = std::max(max_initial, opt.initial_intervals);
    const QuadratureResult q =
        integrate([&](double o1) { return sinc2(phase(o1, o2)); }, lo, hi, opt);
    inner_evals += q.evaluations;
    worst_inner_err = std::max(worst_inner_err, q.error);
    inner_ok = inner_ok && q.converged;
    return q.value;
  };

  QuadratureOptions outer_opt;
  outer_opt.rel_tol = options.rel_tol;
  outer_opt.max_intervals = options.max_intervals;
  outer_opt.initial_intervals = initial_intervals([&](double o2) { return phase(0.0, o2); },
                                                  o2min, o2max, options.nodes_per_period);
  const QuadratureResult outer = integrate(outer_integrand, o2min, o2max, outer_opt);

  const double integral = outer.value;
  r.tau_inv_sq = std::sqrt(3.0) / (18.0 * pi * pi) * integral;
  r.tau_inv = std::sqrt(std::max(r.tau_inv_sq, 0.0));
  auto& d = r.diagnostics;
  d.outer_evaluations = outer.evaluations;
  d.inner_evaluations = inner_evals;
  d.outer_intervals = outer.intervals;
  d.initial_intervals = std::max(outer_opt.initial_intervals, max_initial);
  d.converged = outer.converged && inner_ok;
  d.estimated_rel_error =
      integral > 0 ? (outer.error + worst_inner_err * (o2max - o2min)) / integral : 0.0;
  finish_numeric(r, options, "tau_sp_wg_numeric");
  return r;
}

double upsilon_sp_wg(const SpWaveguideBandwidthInput& in) {
  if (!in.fundamental || !in.pump) throw DomainError("upsilon_sp_wg: missing band model");
  if (in.pump_power < 0) throw DomainError("upsilon_sp_wg: negative pump power");
  const double kp = in.pump->wavenumber(in.omega_pump) + in.gamma_spm * in.pump_power;
  const double kf = in.fundamental->wavenumber(in.omega_pump / 3.0) + 2.0 * in.gamma_xpm * in.pump_power;
  return (kp - 3.0 * kf) * in.length / 2.0;
}

BandwidthResult tau_sp_wg_numeric(const SpWaveguideBandwidthInput& in,
                                  const BandwidthQuadratureOptions& options) {
  return tau_sp_wg_numeric(*in.fundamental, in.omega_pump, upsilon_sp_wg(in), in.length, in.bounds,
                           options);
}

BandwidthResult tau_st_wg_numeric(const DispersionModel& model, double omega_g, double upsilon,
                                  double length, const std::optional<FrequencyBounds>& bounds,
                                  const BandwidthQuadratureOptions& options) {
  check_length(length, "tau_st_wg_numeric");
  const FrequencyBounds b = resolve_bounds(model, bounds);
  BandwidthResult r;
  r.method = BandwidthMethod::numeric;
  if (b.omega_min == b.omega_max) return r;
  check_window(b, omega_g, "tau_st_wg_numeric");

  const double kg = model.wavenumber(omega_g);
  auto phase = [&](double o) {
    const double sum = model.wavenumber(clamp_to(b, omega_g + o / 2.0)) +
                       model.wavenumber(clamp_to(b, omega_g - o / 2.0)) - 2.0 * kg;
    return upsilon - sum * length / 2.0;
  };
  const double lo = std::max(2.0 * (b.omega_min - omega_g), -2.0 * (b.omega_max - omega_g));
  const double hi = std::min(2.0 * (b.omega_max - omega_g), -2.0 * (b.omega_min - omega_g));

  QuadratureOptions opt;
  opt.rel_tol = options.rel_tol;
  opt.max_intervals = options.max_intervals;
  opt.initial_intervals = initial_intervals(phase, lo, hi, options.nodes_per_period);
  const QuadratureResult q = integrate([&](double o) { return sinc2(phase(o)); }, lo, hi, opt);

  r.tau_inv = q.value / (2.0 * pi);
  r.tau_inv_sq = r.tau_inv * r.tau_inv;
  auto& d = r.diagnostics;
  d.outer_evaluations = q.evaluations;
  d.outer_intervals = q.intervals;
  d.initial_intervals = opt.initial_intervals;
  d.converged = q.converged;
  d.estimated_rel_error = q.value > 0 ? q.error / q.value : 0.0;
  finish_numeric(r, options, "tau_st_wg_numeric");
  return r;
}

double tau_sp_wg_analytic(double beta2, double length) {
  check_length(length, "tau_sp_wg_analytic");
  if (beta2 == 0.0) throw InfiniteBandwidthError("tau_sp_wg_analytic: beta2 = 0 gives unbounded bandwidth");
  return std::sqrt(std::sqrt(3.0) / (9.0 * std::abs(beta2) * length));
}

double tau_st_wg_analytic(double beta2, double length) {
  check_length(length, "tau_st_wg_analytic");
  if (beta2 == 0.0) throw InfiniteBandwidthError("tau_st_wg_analytic: beta2 = 0 gives unbounded bandwidth");
  return 4.0 / 3.0 * std::sqrt(2.0 / (pi * std::abs(beta2) * length));
}

BandwidthResult tau_ring(RingBandwidthKind kind, const RingLinewidths& g, double delta) {
  BandwidthResult r;
  r.method = BandwidthMethod::ring_closed_form;
  const double d2 = delta * delta;
  switch (kind) {
    case RingBandwidthKind::sp_degenerate: {
      if (!(g.generated > 0)) throw DomainError("tau_ring: linewidth must be positive");
      const double gf = g.generated;
      r.tau_inv_sq = 0.5 * gf * gf * gf * gf / (d2 + 9.0 * gf * gf);
      r.tau_inv = std::sqrt(r.tau_inv_sq);
      break;
    }
    case RingBandwidthKind::sp_nondegenerate: {
      if (!(g.generated > 0) || !(g.seed > 0)) throw DomainError("tau_ring: linewidths must be positive");
      const double gg = g.generated, gs = g.seed, sum = 2.0 * gg + gs;
      r.tau_inv_sq = 0.5 * gg * gg * gs * sum / (d2 + sum * sum);
      r.tau_inv = std::sqrt(r.tau_inv_sq);
      break;
    }
    case RingBandwidthKind::stimulated: {
      if (!(g.generated > 0)) throw DomainError("tau_ring: linewidth must be positive");
      const double gg = g.generated;
      r.tau_inv = 2.0 * gg * gg * gg / (d2 + 4.0 * gg * gg);
      r.tau_inv_sq = r.tau_inv * r.tau_inv;
      break;
    }
  }
  return r;
}

double vacuum_power(double omega_bar, double tau_inv) {
  if (omega_bar < 0 || tau_inv < 0) throw DomainError("vacuum_power: negative input");
  return constants::hbar * omega_bar * tau_inv;
}

double effective_vacuum_power(double gamma_g, double gamma_s, double omega_s, double delta_sp,
                              double delta_st) {
  if (!(gamma_g > 0) || !(gamma_s > 0)) throw DomainError("effective_vacuum_power: linewidths must be positive");
  const double sum = 2.0 * gamma_g + gamma_s;
  const double lorentz = (delta_st * delta_st + 4.0 * gamma_g * gamma_g) / (delta_sp * delta_sp + sum * sum);
  return constants::hbar * omega_s * lorentz * gamma_s * sum / (4.0 * gamma_g);
}

namespace {

struct Welford {
  std::size_t n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double sem() const { return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0; }
};

void check_mc(const McOptions& options, const char* what) {
  if (options.samples < 100000) {
    throw DomainError(std::string(what) + ": at least 1e5 samples required");
  }
}

}  // namespace

McEstimate mc_tau_sp_wg(const DispersionModel& model, double omega_pump, double upsilon,
                        double length, const std::optional<FrequencyBounds>& bounds,
                        const McOptions& options) {
  check_mc(options, "mc_tau_sp_wg");
  check_length(length, "mc_tau_sp_wg");
  const FrequencyBounds b = resolve_bounds(model, bounds);
  McEstimate out;
  out.seed = options.seed;
  if (b.omega_min == b.omega_max) return out;
  const double wf = omega_pump / 3.0;
  check_window(b, wf, "mc_tau_sp_wg");

  const double kf = model.wavenumber(wf);
  const double vf = model.group_velocity(wf);
  const double klo = model.wavenumber(b.omega_min), khi = model.wavenumber(b.omega_max);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uk(klo, khi);
  Welford acc;
  for (std::size_t i = 0; i < options.samples; ++i) {
    const double k1 = uk(rng), k2 = uk(rng);
    const double w1 = model.frequency_at(k1), w2 = model.frequency_at(k2);
    const double w3 = omega_pump - w1 - w2;
    double f = 0.0;
    if (w3 >= b.omega_min && w3 <= b.omega_max) {
      const double k3 = model.wavenumber(w3);
      f = sinc2(upsilon - (k1 + k2 + k3 - 3.0 * kf) * length / 2.0) * model.derivative(w3, 1);
    }
    acc.add(f);
  }
  const double pref = vf * vf * vf / (6.0 * pi * pi) * (khi - klo) * (khi - klo);
  out.samples = options.samples;
  out.value_sq = pref * acc.mean;
  out.sigma_sq = pref * acc.sem();
  out.value = std::sqrt(std::max(out.value_sq, 0.0));
  out.sigma = out.value > 0 ? out.sigma_sq / (2.0 * out.value) : 0.0;
  return out;
}

McEstimate mc_tau_st_wg(const DispersionModel& model, double omega_g, double upsilon,
                        double length, const std::optional<FrequencyBounds>& bounds,
                        const McOptions& options) {
  check_mc(options, "mc_tau_st_wg");
  check_length(length, "mc_tau_st_wg");
  const FrequencyBounds b = resolve_bounds(model, bounds);
  McEstimate out;
  out.seed = options.seed;
  if (b.omega_min == b.omega_max) return out;
  check_window(b, omega_g, "mc_tau_st_wg");

  const double kg = model.wavenumber(omega_g);
  const double vg = model.group_velocity(omega_g);
  const double klo = model.wavenumber(b.omega_min), khi = model.wavenumber(b.omega_max);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uk(klo, khi);
  Welford acc;
  for (std::size_t i = 0; i < options.samples; ++i) {
    const double k1 = uk(rng);
    const double w1 = model.frequency_at(k1);
    const double w2 = 2.0 * omega_g - w1;
    double f = 0.0;
    if (w2 >= b.omega_min && w2 <= b.omega_max) {
      const double k2 = model.wavenumber(w2);
      f = sinc2(upsilon - (k1 + k2 - 2.0 * kg) * length / 2.0) * model.derivative(w2, 1);
    }
    acc.add(f);
  }
  const double pref = vg * vg / pi * (khi - klo);
  out.samples = options.samples;
  out.value = pref * acc.mean;
  out.sigma = pref * acc.sem();
  out.value_sq = out.value * out.value;
  out.sigma_sq = 2.0 * out.value * out.sigma;
  return out;
}

}  // namespace topdc
