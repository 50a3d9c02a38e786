#include "topdc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "topdc/constants.hpp"

namespace topdc {

double delta_lambda_angular(double lambda, double tau_inv) {
  return lambda * lambda * tau_inv / (2.0 * constants::pi * constants::c);
}

double delta_lambda_cyclic(double lambda, double tau_inv) { return lambda * lambda * tau_inv / constants::c; }

std::string format_number(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

std::vector<std::string> common_assumptions(const Manifest& manifest) {
  std::vector<std::string> a = {"angular frequency convention: 1 GHz means 1e9 rad/s"};
  a.insert(a.end(), manifest.assumptions.begin(), manifest.assumptions.end());
  return a;
}

namespace {

std::string generated_band(Process p) {
  switch (p) {
    case Process::sp_degenerate: return band::F;
    case Process::doubly_stimulated: return band::Gbar;
    default: return band::G;
  }
}

json device_inputs(const Scenario& s) {
  json in;
  if (const auto* w = std::get_if<WaveguideScenario>(&s.device)) {
    in["length_m"] = w->spec.length;
    in["bandwidth_source"] = to_string(w->bandwidth.source);
    if (w->bandwidth.tau_inv) in["tau_inv_injected_per_s"] = *w->bandwidth.tau_inv;
    if (w->bandwidth.beta2) in["beta2_s2_per_m"] = *w->bandwidth.beta2;
    if (w->bandwidth.bounds) {
      in["window_omega_min_rad_per_s"] = w->bandwidth.bounds->omega_min;
      in["window_omega_max_rad_per_s"] = w->bandwidth.bounds->omega_max;
    }
    json om;
    for (const auto& [b, v] : w->omega) om[b] = v;
    in["omega_rad_per_s"] = om;
  } else {
    const auto& r = std::get<RingScenario>(s.device);
    in["circumference_m"] = r.spec.circumference;
    if (r.pump_detuning) {
      in["pump_detuning_rad_per_s"] = *r.pump_detuning;
    } else {
      in["pump_detuning_rad_per_s"] = "optimal";
    }
    in["seed_detuning_rad_per_s"] = r.seed_detuning;
    json res;
    for (const auto& [b, v] : r.spec.resonances) {
      res[b] = {{"omega_rad_per_s", v.omega},
                {"quality", v.quality},
                {"escape_efficiency", v.escape_efficiency},
                {"group_velocity_m_per_s", v.group_velocity}};
    }
    in["resonances"] = res;
  }
  return in;
}

}  // namespace

json rate_report(const Scenario& s, const RateResult& r, const Manifest& manifest) {
  json j;
  j["scenario"] = r.scenario;
  j["device"] = r.device;
  j["process"] = to_string(r.process);
  json in = {{"manifest", manifest.name}, {"pump_power_W", s.pump_power}, {"seed_power_W", s.seed_power}};
  in.update(device_inputs(s));
  j["inputs"] = in;

  json f;
  f["gamma_per_W_m"] = r.gamma;
  f["tau_inv_per_s"] = r.tau_inv;
  f["tau_inv_GHz"] = r.tau_inv / 1e9;
  f["bandwidth_method"] = to_string(r.bandwidth_method);
  f["vacuum_power_W"] = r.vacuum_power;
  f["pump_photon_rate_per_s"] = r.pump_photon_rate;
  double omega_gen = 0.0;
  if (const auto* w = std::get_if<WaveguideScenario>(&s.device)) {
    auto it = w->omega.find(generated_band(s.process));
    if (it != w->omega.end()) omega_gen = it->second;
  } else {
    const auto& res = std::get<RingScenario>(s.device).spec.resonances;
    auto it = res.find(generated_band(s.process));
    if (it != res.end()) omega_gen = it->second.omega;
  }
  if (omega_gen > 0) {
    const double lambda = wavelength_from_omega(omega_gen);
    f["generated_wavelength_m"] = lambda;
    f["delta_lambda_angular_m"] = delta_lambda_angular(lambda, r.tau_inv);
    f["delta_lambda_cyclic_m"] = delta_lambda_cyclic(lambda, r.tau_inv);
  }
  json enh;
  for (const auto& [b, v] : r.enhancement) enh[b] = v;
  if (!enh.empty()) f["field_enhancement_per_m"] = enh;
  json diag = json::object();
  for (const auto& [k, v] : r.diagnostics) diag[k] = v;
  f["diagnostics"] = diag;
  j["factors"] = f;

  j["rate_per_s"] = r.rate;
  j["efficiency"] = r.efficiency;
  j["assumptions"] = common_assumptions(manifest);
  j["notes"] = r.notes;
  return j;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "parameter,rate_per_s,tau_inv_per_s,vacuum_power_W\n";
  for (const auto& p : sweep.points) {
    os << format_number(p.parameter) << ',' << format_number(p.rate) << ',' << format_number(p.tau_inv) << ','
       << format_number(p.vacuum_power) << '\n';
  }
  return os.str();
}

json sweep_report(const SweepResult& sweep) {
  json j;
  j["sweep"] = sweep.name;
  j["scenario"] = sweep.scenario;
  j["parameter"] = sweep.parameter;
  j["points"] = sweep.points.size();
  if (sweep.fit) {
    j["exponent"] = sweep.fit->exponent;
    j["log_prefactor"] = sweep.fit->log_prefactor;
    j["max_log_residual"] = sweep.fit->max_residual;
  }
  json rows = json::array();
  for (const auto& p : sweep.points) {
    rows.push_back({{"parameter", p.parameter},
                    {"rate_per_s", p.rate},
                    {"tau_inv_per_s", p.tau_inv},
                    {"vacuum_power_W", p.vacuum_power}});
  }
  j["data"] = rows;
  return j;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string sweep_svg(const SweepResult& sweep) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : sweep.points) {
    if (p.parameter > 0 && p.rate > 0) pts.emplace_back(std::log10(p.parameter), std::log10(p.rate));
  }
  if (pts.size() < 2) return {};

  const double width = 640, height = 440, left = 80, right = 30, top = 40, bottom = 60;
  auto [xmin_it, xmax_it] = std::minmax_element(pts.begin(), pts.end(), [](auto a, auto b) { return a.first < b.first; });
  auto [ymin_it, ymax_it] = std::minmax_element(pts.begin(), pts.end(), [](auto a, auto b) { return a.second < b.second; });
  double x0 = std::floor(xmin_it->first), x1 = std::ceil(xmax_it->first);
  double y0 = std::floor(ymin_it->second), y1 = std::ceil(ymax_it->second);
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
  auto sy = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::string title = sweep.name + ": rate vs " + sweep.parameter;
  if (sweep.fit) title += " (slope " + fixed(sweep.fit->exponent) + ")";
  os << "<text x=\"" << fixed(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << escape_xml(title) << "</text>\n";

  os << "<g stroke=\"#ccc\" stroke-width=\"1\">\n";
  for (int d = static_cast<int>(x0); d <= static_cast<int>(x1); ++d) {
    os << "<line x1=\"" << fixed(sx(d)) << "\" y1=\"" << fixed(sy(y0)) << "\" x2=\"" << fixed(sx(d)) << "\" y2=\""
       << fixed(sy(y1)) << "\"/>\n";
  }
  for (int d = static_cast<int>(y0); d <= static_cast<int>(y1); ++d) {
    os << "<line x1=\"" << fixed(sx(x0)) << "\" y1=\"" << fixed(sy(d)) << "\" x2=\"" << fixed(sx(x1)) << "\" y2=\""
       << fixed(sy(d)) << "\"/>\n";
  }
  os << "</g>\n";
  os << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(width - left - right)
     << "\" height=\"" << fixed(height - top - bottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(x0); d <= static_cast<int>(x1); ++d) {
    os << "<text x=\"" << fixed(sx(d)) << "\" y=\"" << fixed(height - bottom + 18)
       << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(y0); d <= static_cast<int>(y1); ++d) {
    os << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(sy(d) + 4) << "\" text-anchor=\"end\">1e" << d
       << "</text>\n";
  }
  os << "<text x=\"" << fixed(left + (width - left - right) / 2) << "\" y=\"" << fixed(height - 16)
     << "\" text-anchor=\"middle\">" << escape_xml(sweep.parameter) << " (SI)</text>\n";
  os << "<text x=\"18\" y=\"" << fixed(top + (height - top - bottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << fixed(top + (height - top - bottom) / 2) << ")\">rate (1/s)</text>\n";

  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << (i ? " " : "") << fixed(sx(pts[i].first)) << ',' << fixed(sy(pts[i].second));
  }
  os << "\"/>\n";
  for (const auto& [x, y] : pts) {
    os << "<circle cx=\"" << fixed(sx(x)) << "\" cy=\"" << fixed(sy(y)) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace topdc
