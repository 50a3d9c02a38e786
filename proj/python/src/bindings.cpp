#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <sstream>

#include "topdc/bandwidth.hpp"
#include "topdc/cli.hpp"
#include "topdc/config.hpp"
#include "topdc/constants.hpp"
#include "topdc/error.hpp"
#include "topdc/modeoverlap.hpp"
#include "topdc/phasematch.hpp"
#include "topdc/rates.hpp"

namespace py = pybind11;
using namespace topdc;

namespace {

std::optional<FrequencyBounds> bounds(std::optional<double> lo, std::optional<double> hi) {
  if (!lo && !hi) return std::nullopt;
  if (!lo || !hi) throw DomainError("give both omega_min and omega_max or neither");
  return FrequencyBounds{*lo, *hi};
}

py::dict bandwidth_dict(const BandwidthResult& r) {
  py::dict d;
  d["tau_inv"] = r.tau_inv;
  d["tau_inv_sq"] = r.tau_inv_sq;
  d["method"] = to_string(r.method);
  d["estimated_rel_error"] = r.diagnostics.estimated_rel_error;
  d["converged"] = r.diagnostics.converged;
  return d;
}

py::dict mc_dict(const McEstimate& m) {
  py::dict d;
  d["tau_inv"] = m.value;
  d["sigma"] = m.sigma;
  d["tau_inv_sq"] = m.value_sq;
  d["sigma_sq"] = m.sigma_sq;
  d["samples"] = m.samples;
  d["seed"] = m.seed;
  return d;
}

py::dict rate_dict(const RateResult& r) {
  py::dict d;
  d["scenario"] = r.scenario;
  d["device"] = r.device;
  d["process"] = to_string(r.process);
  d["rate"] = r.rate;
  d["efficiency"] = r.efficiency;
  d["pump_photon_rate"] = r.pump_photon_rate;
  d["vacuum_power"] = r.vacuum_power;
  d["tau_inv"] = r.tau_inv;
  d["gamma"] = r.gamma;
  d["bandwidth_method"] = to_string(r.bandwidth_method);
  d["enhancement"] = r.enhancement;
  d["diagnostics"] = r.diagnostics;
  d["notes"] = r.notes;
  return d;
}

RingBandwidthKind ring_kind(const std::string& s) {
  if (s == "sp_degenerate") return RingBandwidthKind::sp_degenerate;
  if (s == "sp_nondegenerate") return RingBandwidthKind::sp_nondegenerate;
  if (s == "stimulated") return RingBandwidthKind::stimulated;
  throw ParseError("unknown ring bandwidth kind '" + s + "'");
}

Dimension dimension(const std::string& s) {
  if (s == "dimensionless") return Dimension::dimensionless;
  if (s == "length") return Dimension::length;
  if (s == "power") return Dimension::power;
  if (s == "frequency") return Dimension::frequency;
  throw ParseError("unknown dimension '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "TOPDC photon-triplet rate calculator";

  auto base = py::register_exception<Error>(m, "TopdcError");
  auto parse = py::register_exception<ParseError>(m, "ParseError", base.ptr());
  auto physics = py::register_exception<PhysicsError>(m, "PhysicsError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", physics.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", physics.ptr());
  (void)parse;

  m.def("parse_quantity", [](const std::string& text, const std::string& dim) { return parse_quantity(text, dimension(dim)); },
        py::arg("text"), py::arg("dimension"), "Parse '1.72 um' style input to SI.");
  m.def("omega_from_wavelength", &omega_from_wavelength, py::arg("wavelength"));
  m.def("wavelength_from_omega", &wavelength_from_omega, py::arg("omega"));

  py::class_<DispersionModel>(m, "DispersionModel")
      .def_static("from_csv", [](const std::string& path) { return build_model(read_index_csv(path)); }, py::arg("path"))
      .def_static(
          "from_samples",
          [](const std::vector<double>& wavelength, const std::vector<double>& n_eff, const std::string& label) {
            IndexTable t;
            t.band_label = label;
            t.wavelength = wavelength;
            t.n_eff = n_eff;
            return build_model(t);
          },
          py::arg("wavelength"), py::arg("n_eff"), py::arg("band") = "F")
      .def_property_readonly("band", &DispersionModel::band_label)
      .def_property_readonly("omega_min", &DispersionModel::omega_min)
      .def_property_readonly("omega_max", &DispersionModel::omega_max)
      .def("wavenumber", &DispersionModel::wavenumber, py::arg("omega"))
      .def("derivative", &DispersionModel::derivative, py::arg("omega"), py::arg("order"))
      .def("effective_index", &DispersionModel::effective_index, py::arg("omega"))
      .def("frequency_at", &DispersionModel::frequency_at, py::arg("k"))
      .def("group_quantities", [](const DispersionModel& d, double omega) {
        const auto g = d.group_quantities(omega);
        py::dict out;
        out["v_g"] = g.v_g;
        out["n_g"] = g.n_g;
        out["beta2"] = g.beta2;
        out["beta3"] = g.beta3;
        out["beta4"] = g.beta4;
        return out;
      }, py::arg("omega"));

  m.def("tau_sp_wg_analytic", &tau_sp_wg_analytic, py::arg("beta2"), py::arg("length"));
  m.def("tau_st_wg_analytic", &tau_st_wg_analytic, py::arg("beta2"), py::arg("length"));
  m.def(
      "tau_sp_wg_numeric",
      [](const DispersionModel& f, double omega_pump, double upsilon, double length, std::optional<double> lo,
         std::optional<double> hi) { return bandwidth_dict(tau_sp_wg_numeric(f, omega_pump, upsilon, length, bounds(lo, hi))); },
      py::arg("model"), py::arg("omega_pump"), py::arg("upsilon"), py::arg("length"), py::arg("omega_min") = py::none(),
      py::arg("omega_max") = py::none());
  m.def(
      "tau_st_wg_numeric",
      [](const DispersionModel& g, double omega_g, double upsilon, double length, std::optional<double> lo,
         std::optional<double> hi) { return bandwidth_dict(tau_st_wg_numeric(g, omega_g, upsilon, length, bounds(lo, hi))); },
      py::arg("model"), py::arg("omega_g"), py::arg("upsilon"), py::arg("length"), py::arg("omega_min") = py::none(),
      py::arg("omega_max") = py::none());
  m.def(
      "mc_tau_sp_wg",
      [](const DispersionModel& f, double omega_pump, double upsilon, double length, std::optional<double> lo,
         std::optional<double> hi, std::size_t samples, std::uint64_t seed) {
        return mc_dict(mc_tau_sp_wg(f, omega_pump, upsilon, length, bounds(lo, hi), {samples, seed}));
      },
      py::arg("model"), py::arg("omega_pump"), py::arg("upsilon"), py::arg("length"), py::arg("omega_min") = py::none(),
      py::arg("omega_max") = py::none(), py::arg("samples") = McOptions{}.samples, py::arg("seed") = McOptions{}.seed);
  m.def(
      "mc_tau_st_wg",
      [](const DispersionModel& g, double omega_g, double upsilon, double length, std::optional<double> lo,
         std::optional<double> hi, std::size_t samples, std::uint64_t seed) {
        return mc_dict(mc_tau_st_wg(g, omega_g, upsilon, length, bounds(lo, hi), {samples, seed}));
      },
      py::arg("model"), py::arg("omega_g"), py::arg("upsilon"), py::arg("length"), py::arg("omega_min") = py::none(),
      py::arg("omega_max") = py::none(), py::arg("samples") = McOptions{}.samples, py::arg("seed") = McOptions{}.seed);
  m.def(
      "tau_ring",
      [](const std::string& kind, double gamma_generated, double gamma_seed, double delta) {
        return bandwidth_dict(tau_ring(ring_kind(kind), {gamma_generated, gamma_seed}, delta));
      },
      py::arg("kind"), py::arg("gamma_generated"), py::arg("gamma_seed") = 0.0, py::arg("delta") = 0.0);
  m.def("vacuum_power", &vacuum_power, py::arg("omega_bar"), py::arg("tau_inv"));

  m.def(
      "find_phase_matched",
      [](const std::filesystem::path& manifest, const std::string& process, double lambda_min, double lambda_max,
         std::optional<double> lambda_pump, std::optional<double> lambda_seed, double pump_power) {
        const Manifest mf = load_manifest(manifest);
        PhaseMatchRequest rq;
        rq.process = parse_process(process);
        rq.lambda_min = lambda_min;
        rq.lambda_max = lambda_max;
        if (lambda_pump) rq.omega_pump = omega_from_wavelength(*lambda_pump);
        if (lambda_seed) rq.omega_seed = omega_from_wavelength(*lambda_seed);
        rq.pump_power = pump_power;
        const auto r = find_phase_matched(mf.waveguide(), rq);
        py::dict wl;
        for (const auto& [b, w] : r.omega) wl[py::str(b)] = wavelength_from_omega(w);
        py::dict d;
        d["wavelength"] = wl;
        d["omega"] = r.omega;
        d["mismatch"] = r.mismatch;
        d["energy_residual"] = r.energy_residual;
        d["root"] = r.root;
        d["degenerate_medium"] = r.degenerate_medium;
        d["unknown_band"] = r.unknown_band;
        return d;
      },
      py::arg("manifest"), py::arg("process"), py::arg("lambda_min"), py::arg("lambda_max"),
      py::arg("lambda_pump") = py::none(), py::arg("lambda_seed") = py::none(), py::arg("pump_power") = 0.0);

  m.def(
      "effective_area",
      [](const std::vector<std::string>& paths, const std::string& conjugation) {
        if (paths.size() != 4) throw DomainError("effective_area: need four mode profiles");
        std::vector<ModeProfile> modes;
        for (const auto& p : paths) modes.push_back(read_mode_profile(p));
        Conjugation c;
        if (conjugation == "two_dagger") {
          c = Conjugation::two_dagger;
        } else if (conjugation == "three_dagger") {
          c = Conjugation::three_dagger;
        } else {
          throw ParseError("unknown conjugation '" + conjugation + "'");
        }
        const auto a = effective_area_waveguide({&modes[0], &modes[1], &modes[2], &modes[3]}, c);
        return py::make_tuple(a.area, a.phase);
      },
      py::arg("profiles"), py::arg("conjugation") = "three_dagger");

  m.def(
      "rates",
      [](const std::filesystem::path& config) {
        const RunConfig cfg = load_run_config(config);
        py::list out;
        for (const auto& s : cfg.scenarios) out.append(rate_dict(evaluate(s)));
        return out;
      },
      py::arg("config"), "Evaluate every scenario in a run configuration.");

  m.def(
      "scaling_exponents",
      [](const std::filesystem::path& config) {
        const RunConfig cfg = load_run_config(config);
        py::dict out;
        for (const auto& sw : cfg.sweeps) {
          const auto grid = sw.grid();
          if (grid.size() < 5) continue;
          const auto base = std::find_if(cfg.scenarios.begin(), cfg.scenarios.end(),
                                         [&](const Scenario& s) { return s.name == sw.scenario; });
          out[py::str(sw.name)] = scaling_exponents(*base, sw.target, grid).exponent;
        }
        return out;
      },
      py::arg("config"), "Fitted log-log exponent of every sweep with at least five points.");

  m.def(
      "run_cli",
      [](const std::string& command, const std::filesystem::path& config, std::optional<std::filesystem::path> out_dir,
         bool json, unsigned threads) {
        CliOptions o;
        o.command = command;
        o.config = config;
        o.out = out_dir;
        o.json = json;
        o.threads = threads;
        std::ostringstream out, err;
        int status;
        {
          py::gil_scoped_release release;
          status = run(o, out, err);
        }
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("command"), py::arg("config"), py::arg("out") = py::none(), py::arg("json") = false,
      py::arg("threads") = 0, "Run a subcommand; returns (exit status, stdout, stderr).");
}
