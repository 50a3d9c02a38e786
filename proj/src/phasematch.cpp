#include "topdc/phasematch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "topdc/constants.hpp"
#include "topdc/error.hpp"

namespace topdc {

std::string to_string(Process p) {
  switch (p) {
    case Process::sp_degenerate: return "sp_degenerate";
    case Process::sp_nondegenerate: return "sp_nondegenerate";
    case Process::stimulated: return "stimulated";
    case Process::doubly_stimulated: return "doubly_stimulated";
  }
  return "unknown";
}

Process parse_process(const std::string& s) {
  for (auto p : {Process::sp_degenerate, Process::sp_nondegenerate, Process::stimulated,
                 Process::doubly_stimulated}) {
    if (to_string(p) == s) return p;
  }
  throw ParseError("unknown process variant '" + s + "'");
}

bool is_spontaneous(Process p) {
  return p == Process::sp_degenerate || p == Process::sp_nondegenerate;
}

const DispersionModel& WaveguideSpec::model(const std::string& b) const {
  if (auto it = bands.find(b); it != bands.end() && it->second) return *it->second;
  if (b != band::P && b != band::F) {
    if (auto it = bands.find(band::F); it != bands.end() && it->second) return *it->second;
  }
  throw DomainError("waveguide: no dispersion model for band '" + b + "'");
}

bool WaveguideSpec::has_model(const std::string& b) const {
  try {
    model(b);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

void WaveguideSpec::validate() const {
  if (!(length > 0)) throw DomainError("waveguide: length must be positive");
}

const Resonance& RingSpec::at(const std::string& b) const {
  auto it = resonances.find(b);
  if (it == resonances.end()) throw DomainError("ring: no resonance for band '" + b + "'");
  return it->second;
}

void RingSpec::validate() const {
  if (!(circumference > 0)) throw DomainError("ring: circumference must be positive");
  for (const auto& [name, r] : resonances) {
    if (!(r.omega > 0)) throw DomainError("ring: resonance '" + name + "' frequency must be positive");
    if (!(r.quality > 0)) throw DomainError("ring: resonance '" + name + "' Q must be positive");
    if (!(r.escape_efficiency >= 0 && r.escape_efficiency <= 1)) {
      throw DomainError("ring: resonance '" + name + "' escape efficiency outside [0, 1]");
    }
    if (!(r.group_velocity > 0)) throw DomainError("ring: resonance '" + name + "' group velocity must be positive");
  }
}

std::map<std::string, double> shifted_wavenumbers_wg(const WaveguideSpec& spec, double pump_power,
                                                     const std::map<std::string, double>& omega) {
  if (pump_power < 0) throw DomainError("shifted_wavenumbers: negative pump power");
  std::map<std::string, double> out;
  for (const auto& [b, w] : omega) {
    const double k = spec.model(b).wavenumber(w);
    out[b] = b == band::P ? k + std::abs(spec.gammas.spm) * pump_power
                          : k + 2.0 * spec.gammas.xpm_for(b) * pump_power;
  }
  return out;
}

namespace {

double get(const std::map<std::string, double>& m, const std::string& b, const char* what) {
  auto it = m.find(b);
  if (it == m.end()) throw DomainError(std::string(what) + ": missing band '" + b + "'");
  return it->second;
}

}  // namespace

double mismatch(Process process, const std::map<std::string, double>& kbar,
                std::span<const double> comp) {
  const double kp = get(kbar, band::P, "mismatch");
  auto need = [&](std::size_t n) {
    if (!comp.empty() && comp.size() != n) {
      throw DomainError("mismatch: expected " + std::to_string(n) + " component wavenumbers");
    }
    return !comp.empty();
  };
  switch (process) {
    case Process::sp_degenerate:
      if (need(3)) return kp - comp[0] - comp[1] - comp[2];
      return kp - 3.0 * get(kbar, band::F, "mismatch");
    case Process::sp_nondegenerate:
    case Process::stimulated: {
      const double ks = get(kbar, band::S, "mismatch");
      if (need(2)) return kp - ks - comp[0] - comp[1];
      return kp - ks - 2.0 * get(kbar, band::G, "mismatch");
    }
    case Process::doubly_stimulated: {
      const double ks = get(kbar, band::S, "mismatch");
      if (need(1)) return kp - 2.0 * ks - comp[0];
      return kp - 2.0 * ks - get(kbar, band::Gbar, "mismatch");
    }
  }
  throw DomainError("mismatch: unknown process");
}

double PhaseMatchResult::wavelength(const std::string& b) const {
  return wavelength_from_omega(get(omega, b, "wavelength"));
}

PhaseMatchResult find_phase_matched(const WaveguideSpec& spec, const PhaseMatchRequest& req) {
  if (!(req.lambda_min > 0) || !(req.lambda_max > req.lambda_min)) {
    throw DomainError("find_phase_matched: invalid wavelength bracket");
  }
  if (req.scan_points < 3) throw DomainError("find_phase_matched: need at least 3 scan points");

  // Map the unknown frequency to the full set of band frequencies.
  std::string unknown;
  std::function<std::map<std::string, double>(double)> assign;
  switch (req.process) {
    case Process::sp_degenerate:
      unknown = band::F;
      assign = [](double w) { return std::map<std::string, double>{{band::P, 3.0 * w}, {band::F, w}}; };
      break;
    case Process::sp_nondegenerate:
    case Process::stimulated:
      if (req.omega_pump.has_value() == req.omega_seed.has_value()) {
        throw DomainError("find_phase_matched: give exactly one of pump or seed frequency");
      }
      if (req.omega_pump) {
        unknown = band::S;
        const double wp = *req.omega_pump;
        assign = [wp](double w) {
          return std::map<std::string, double>{{band::P, wp}, {band::S, w}, {band::G, (wp - w) / 2.0}};
        };
      } else {
        unknown = band::P;
        const double ws = *req.omega_seed;
        assign = [ws](double w) {
          return std::map<std::string, double>{{band::P, w}, {band::S, ws}, {band::G, (w - ws) / 2.0}};
        };
      }
      break;
    case Process::doubly_stimulated:
      if (!req.omega_pump || !req.omega_seed) {
        throw DomainError("find_phase_matched: doubly stimulated search needs pump and seed frequencies");
      }
      unknown = band::Gbar;
      assign = [wp = *req.omega_pump, ws = *req.omega_seed](double w) {
        return std::map<std::string, double>{{band::P, wp}, {band::S, ws}, {band::Gbar, w}};
      };
      break;
  }

  std::size_t evaluations = 0;
  auto f = [&](double w) {
    ++evaluations;
    return mismatch(req.process, shifted_wavenumbers_wg(spec, req.pump_power, assign(w)));
  };

  const double wlo = omega_from_wavelength(req.lambda_max);
  const double whi = omega_from_wavelength(req.lambda_min);
  const std::size_t n = req.scan_points;
  std::vector<double> ws(n), fs(n);
  for (std::size_t i = 0; i < n; ++i) {
    ws[i] = wlo + (whi - wlo) * static_cast<double>(i) / static_cast<double>(n - 1);
    fs[i] = f(ws[i]);
  }

  PhaseMatchResult out;
  out.unknown_band = unknown;
  auto finish = [&](double w, bool root) {
    out.omega = assign(w);
    out.mismatch = f(w);
    out.root = root;
    out.iterations = evaluations;
    const auto& o = out.omega;
    switch (req.process) {
      case Process::sp_degenerate: out.energy_residual = o.at(band::P) - 3.0 * o.at(band::F); break;
      case Process::sp_nondegenerate:
      case Process::stimulated: out.energy_residual = o.at(band::P) - o.at(band::S) - 2.0 * o.at(band::G); break;
      case Process::doubly_stimulated: out.energy_residual = o.at(band::P) - 2.0 * o.at(band::S) - o.at(band::Gbar); break;
    }
    return out;
  };

  if (std::all_of(fs.begin(), fs.end(), [&](double v) { return std::abs(v) <= req.tolerance; })) {
    out.degenerate_medium = true;
    return finish(0.5 * (wlo + whi), true);
  }

  // Sign change nearest the bracket centre.
  const double mid = 0.5 * (wlo + whi);
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (fs[i] == 0.0) return finish(ws[i], true);
    if ((fs[i] < 0) != (fs[i + 1] < 0)) {
      if (!pick || std::abs(ws[i] - mid) < std::abs(ws[*pick] - mid)) pick = i;
    }
  }

  if (pick) {
    double a = ws[*pick], b = ws[*pick + 1], fa = fs[*pick], fb = fs[*pick + 1];
    double w = a, fw = fa;
    for (int it = 0; it < 200; ++it) {
      // Secant step when it lands inside the bracket, bisection otherwise and on every third step.
      double trial = (it % 3 == 2) ? 0.5 * (a + b) : b - fb * (b - a) / (fb - fa);
      if (!(trial > a && trial < b)) trial = 0.5 * (a + b);
      w = trial;
      fw = f(w);
      if ((fw < 0) == (fa < 0)) {
        a = w;
        fa = fw;
      } else {
        b = w;
        fb = fw;
      }
      const bool tight = (b - a) <= 1e-6 * w;
      if ((std::abs(fw) <= req.tolerance && tight) || (b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * w) break;
    }
    if (std::abs(fa) < std::abs(fw)) w = a;
    if (std::abs(fb) < std::abs(f(w))) w = b;
    return finish(w, true);
  }

  // No sign change: golden-section search on |mismatch| around the best sample.
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(fs[i]) < std::abs(fs[best])) best = i;
  }
  if (best == 0 || best == n - 1) {
    std::ostringstream os;
    os << "find_phase_matched: no root or interior minimum of the " << to_string(req.process)
       << " mismatch in [" << req.lambda_min << ", " << req.lambda_max << "] m";
    throw DomainError(os.str());
  }
  double a = ws[best - 1], b = ws[best + 1];
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = std::abs(f(c)), fd = std::abs(f(d));
  while ((b - a) > 1e-12 * b) {
    if (fc < fd) {
      b = d; d = c; fd = fc; c = b - r * (b - a); fc = std::abs(f(c));
    } else {
      a = c; c = d; fc = fd; d = a + r * (b - a); fd = std::abs(f(d));
    }
  }
  return finish(0.5 * (a + b), false);
}

double circulating_power(const RingSpec& ring, const std::string& b, double power, double detuning) {
  if (power < 0) throw DomainError("circulating_power: negative power");
  const Resonance& r = ring.at(b);
  const double g = r.linewidth();
  return power * (2.0 * r.group_velocity * r.escape_efficiency * g / ring.circumference) /
         (detuning * detuning + g * g);
}

std::map<std::string, double> hot_wavenumber_shifts(const RingSpec& ring, double pc) {
  if (pc < 0) throw DomainError("hot resonances: negative circulating power");
  std::map<std::string, double> out;
  for (const auto& [b, r] : ring.resonances) {
    out[b] = b == band::P ? -std::abs(ring.gammas.spm) * pc : -2.0 * ring.gammas.xpm_for(b) * pc;
  }
  return out;
}

std::map<std::string, double> hot_resonances(const RingSpec& ring, double pc) {
  std::map<std::string, double> out;
  for (const auto& [b, dk] : hot_wavenumber_shifts(ring, pc)) {
    const Resonance& r = ring.at(b);
    out[b] = r.omega + r.group_velocity * dk;
  }
  return out;
}

double optimal_pump_detuning(const RingSpec& ring, Process process, double pc, double seed_detuning) {
  const auto hot = hot_resonances(ring, pc);
  const double wp = get(hot, band::P, "optimal_pump_detuning");
  switch (process) {
    case Process::sp_degenerate:
      return 3.0 * get(hot, band::F, "optimal_pump_detuning") - wp;
    case Process::sp_nondegenerate:
    case Process::stimulated:
      return 2.0 * get(hot, band::G, "optimal_pump_detuning") + get(hot, band::S, "optimal_pump_detuning") +
             seed_detuning - wp;
    case Process::doubly_stimulated:
      return 2.0 * (get(hot, band::S, "optimal_pump_detuning") + seed_detuning) +
             get(hot, band::Gbar, "optimal_pump_detuning") - wp;
  }
  throw DomainError("optimal_pump_detuning: unknown process");
}

namespace {

// Damped iteration x <- x + a (g(x) - x). The damping a = 1 / (1 - g') uses a
// secant slope, and steps leaving the bracket [lo, hi] known from the sign of
// g(x) - x are replaced by bisection. Converged when successive iterates agree
// to rel_tol; otherwise BistabilityError carries the last bracket.
double damped_fixed_point(const std::function<double(double)>& g, double x0,
                          const FixedPointOptions& opt, std::size_t& iterations) {
  double x = x0, gx = g(x), a = 1.0;
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
    iterations = it;
    const double h = gx - x;
    if (h == 0.0) return x;
    if (h > 0) lo = std::max(lo, x);
    else hi = std::min(hi, x);
    double next = std::max(0.0, x + a * h);
    if (std::isfinite(hi) && !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double gnext = g(next);
    if (std::abs(next - x) <= opt.rel_tol * std::abs(next)) return next;
    const double slope = (gnext - gx) / (next - x);
    a = slope < 0.0 ? 1.0 / (1.0 - slope) : 1.0;
    x = next;
    gx = gnext;
  }
  std::ostringstream os;
  os << "pump fixed point did not converge in " << opt.max_iterations
     << " iterations (bistable regime?); circulating power bracketed by [" << lo << ", " << hi << "] W";
  throw BistabilityError(os.str(), lo, hi);
}

// Steady state x((d0 + a x)^2 + G^2) = P b is cubic in x; three real roots mean multistability.
bool cubic_multistable(double a, double d0, double gam, double pb) {
  if (a == 0.0 || pb <= 0.0) return false;
  const double A = a * a, B = 2.0 * a * d0, C = d0 * d0 + gam * gam, D = -pb;
  const double disc = 18 * A * B * C * D - 4 * B * B * B * D + B * B * C * C - 4 * A * C * C * C - 27 * A * A * D * D;
  return disc > 0;
}

PumpState make_state(const RingSpec& ring, double power, double pc, double laser, std::size_t iterations) {
  PumpState s;
  s.channel_power = power;
  s.circulating_power = pc;
  s.hot_omega = hot_resonances(ring, pc);
  s.laser_omega = laser;
  s.detuning = laser - s.hot_omega.at(band::P);
  s.iterations = iterations;
  return s;
}

}  // namespace

PumpState self_consistent_pump(const RingSpec& ring, double power, double laser,
                               const FixedPointOptions& opt) {
  if (power < 0) throw DomainError("self_consistent_pump: negative power");
  const Resonance& p = ring.at(band::P);
  const double shift_rate = std::abs(ring.gammas.spm) * p.group_velocity;  // d(w~P)/dP'
  auto g = [&](double pc) { return circulating_power(ring, band::P, power, laser - (p.omega - shift_rate * pc)); };
  std::size_t iterations = 0;
  const double pc = power == 0.0 ? 0.0 : damped_fixed_point(g, 0.0, opt, iterations);
  PumpState s = make_state(ring, power, pc, laser, iterations);
  const double b = 2.0 * p.group_velocity * p.escape_efficiency * p.linewidth() / ring.circumference;
  s.multistable = cubic_multistable(shift_rate, laser - p.omega, p.linewidth(), power * b);
  return s;
}

PumpState resolve_optimal_pump(const RingSpec& ring, Process process, double power, double seed_detuning,
                               const FixedPointOptions& opt) {
  if (power < 0) throw DomainError("resolve_optimal_pump: negative power");
  auto g = [&](double pc) {
    return circulating_power(ring, band::P, power, optimal_pump_detuning(ring, process, pc, seed_detuning));
  };
  std::size_t iterations = 0;
  const double pc = power == 0.0 ? 0.0 : damped_fixed_point(g, 0.0, opt, iterations);
  const double detuning = optimal_pump_detuning(ring, process, pc, seed_detuning);
  PumpState s = make_state(ring, power, pc, hot_resonances(ring, pc).at(band::P) + detuning, iterations);
  // The optimal detuning is linear in P', so the steady state is the same cubic.
  const Resonance& p = ring.at(band::P);
  const double d0 = optimal_pump_detuning(ring, process, 0.0, seed_detuning);
  const double slope = optimal_pump_detuning(ring, process, 1.0, seed_detuning) - d0;
  const double b = 2.0 * p.group_velocity * p.escape_efficiency * p.linewidth() / ring.circumference;
  s.multistable = cubic_multistable(slope, d0, p.linewidth(), power * b);
  return s;
}

PumpState resolve_detuned_pump(const RingSpec& ring, double power, double detuning, const FixedPointOptions&) {
  // The detuning is fixed relative to the hot resonance, so the buildup does not depend on P'.
  const double pc = circulating_power(ring, band::P, power, detuning);
  return make_state(ring, power, pc, hot_resonances(ring, pc).at(band::P) + detuning, 0);
}

}  // namespace topdc
