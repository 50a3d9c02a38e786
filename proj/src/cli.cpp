#include "topdc/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "topdc/config.hpp"
#include "topdc/constants.hpp"
#include "topdc/error.hpp"
#include "topdc/parallel.hpp"
#include "topdc/report.hpp"

namespace topdc {

namespace fs = std::filesystem;

namespace {

struct Context {
  const CliOptions& options;
  RunConfig config;
  fs::path out_dir;
  std::ostream& out;
  std::ostream& err;

  bool wants(const std::string& format) const {
    return std::find(config.formats.begin(), config.formats.end(), format) != config.formats.end();
  }
  void log(const std::string& msg) const {
    if (options.verbose) err << msg << '\n';
  }
};

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// First failure in index order, rethrown with the job name attached.
template <typename T>
void rethrow_first(const std::vector<TaskResult<T>>& results, const std::vector<std::string>& names,
                   const char* kind) {
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].error) continue;
    try {
      std::rethrow_exception(results[i].error);
    } catch (const ParseError& e) {
      throw ParseError(std::string(kind) + " '" + names[i] + "': " + e.what());
    } catch (const PhysicsError& e) {
      throw PhysicsError(std::string(kind) + " '" + names[i] + "': " + e.what());
    }
  }
}

json header(const Context& ctx, const char* command) {
  json j;
  j["command"] = command;
  j["manifest"] = ctx.config.manifest.name;
  j["seed"] = ctx.config.seed;
  j["assumptions"] = common_assumptions(ctx.config.manifest);
  return j;
}

const Scenario& find_scenario(const RunConfig& cfg, const std::string& name) {
  for (const auto& s : cfg.scenarios) {
    if (s.name == name) return s;
  }
  throw ParseError("unknown scenario '" + name + "'");
}

int cmd_rate(Context& ctx) {
  const auto& scenarios = ctx.config.scenarios;
  if (scenarios.empty()) throw ParseError(ctx.config.path.string() + ": no [scenario.*] sections");
  std::vector<std::string> names;
  for (const auto& s : scenarios) names.push_back(s.name);
  auto results = parallel_map<RateResult>(scenarios.size(), ctx.options.threads,
                                          [&](std::size_t i) { return evaluate(scenarios[i]); });

  json summary = header(ctx, "rate");
  json reports = json::array();
  std::ostringstream csv;
  csv << "scenario,device,process,rate_per_s,tau_inv_per_s,vacuum_power_W,efficiency,gamma_per_W_m\n";
  std::ostringstream table;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-10s %-18s %12s %12s %12s\n", "scenario", "device", "process", "rate[1/s]",
                "tau_inv[1/s]", "P_vac[W]");
  table << line;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (!results[i].value) continue;
    const RateResult& r = *results[i].value;
    json rep = rate_report(scenarios[i], r, ctx.config.manifest);
    rep["seed"] = ctx.config.seed;
    if (ctx.wants("json")) write_text(ctx.out_dir / "rates" / (r.scenario + ".json"), dump(rep));
    reports.push_back(rep);
    csv << r.scenario << ',' << r.device << ',' << to_string(r.process) << ',' << format_number(r.rate) << ','
        << format_number(r.tau_inv) << ',' << format_number(r.vacuum_power) << ',' << format_number(r.efficiency)
        << ',' << format_number(r.gamma) << '\n';
    std::snprintf(line, sizeof line, "%-20s %-10s %-18s %12.4e %12.4e %12.4e\n", r.scenario.c_str(), r.device.c_str(),
                  to_string(r.process).c_str(), r.rate, r.tau_inv, r.vacuum_power);
    table << line;
  }
  if (ctx.wants("csv")) write_text(ctx.out_dir / "rates.csv", csv.str());
  summary["scenarios"] = reports;
  if (ctx.wants("json")) write_text(ctx.out_dir / "rates.json", dump(summary));
  if (ctx.options.json) {
    ctx.out << dump(summary);
  } else {
    ctx.out << table.str();
  }
  rethrow_first(results, names, "scenario");
  return exit_ok;
}

int cmd_sweep(Context& ctx) {
  const auto& sweeps = ctx.config.sweeps;
  if (sweeps.empty()) throw ParseError(ctx.config.path.string() + ": no [sweep.*] sections");
  struct Task {
    std::size_t sweep;
    Scenario scenario;
    double value;
  };
  std::vector<Task> tasks;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < sweeps.size(); ++k) {
    const Scenario& base = find_scenario(ctx.config, sweeps[k].scenario);
    for (double v : sweeps[k].grid()) {
      tasks.push_back({k, with_parameter(base, sweeps[k].target, v), v});
      names.push_back(base.name + "' in sweep '" + sweeps[k].name);
    }
  }
  ctx.log("evaluating " + std::to_string(tasks.size()) + " sweep points");
  auto results = parallel_map<RateResult>(tasks.size(), ctx.options.threads,
                                          [&](std::size_t i) { return evaluate(tasks[i].scenario); });
  rethrow_first(results, names, "scenario");

  std::vector<SweepResult> out(sweeps.size());
  for (std::size_t k = 0; k < sweeps.size(); ++k) {
    out[k].name = sweeps[k].name;
    out[k].scenario = sweeps[k].scenario;
    out[k].parameter = to_string(sweeps[k].target);
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const RateResult& r = *results[i].value;
    out[tasks[i].sweep].points.push_back({tasks[i].value, r.rate, r.tau_inv, r.vacuum_power});
  }

  json summary = header(ctx, "sweep");
  json reports = json::array();
  std::ostringstream table;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-20s %-10s %7s %10s\n", "sweep", "scenario", "parameter", "points",
                "exponent");
  table << line;
  for (auto& sw : out) {
    std::vector<double> x, y;
    for (const auto& p : sw.points) {
      if (p.rate > 0) {
        x.push_back(p.parameter);
        y.push_back(p.rate);
      }
    }
    if (x.size() >= 2) sw.fit = fit_power_law(x, y);
    if (ctx.wants("csv")) write_text(ctx.out_dir / "sweeps" / (sw.name + ".csv"), sweep_csv(sw));
    if (ctx.wants("svg")) {
      const std::string svg = sweep_svg(sw);
      if (!svg.empty()) write_text(ctx.out_dir / "sweeps" / (sw.name + ".svg"), svg);
    }
    reports.push_back(sweep_report(sw));
    std::snprintf(line, sizeof line, "%-24s %-20s %-10s %7zu %10s\n", sw.name.c_str(), sw.scenario.c_str(),
                  sw.parameter.c_str(), sw.points.size(), sw.fit ? format_number(sw.fit->exponent, 4).c_str() : "-");
    table << line;
  }
  summary["sweeps"] = reports;
  if (ctx.wants("json")) write_text(ctx.out_dir / "sweeps.json", dump(summary));
  if (ctx.options.json) {
    ctx.out << dump(summary);
  } else {
    ctx.out << table.str();
  }
  return exit_ok;
}

struct BandwidthSetup {
  const DispersionModel* generated = nullptr;
  double omega_pump = 0.0;
  double omega_generated = 0.0;
  double upsilon = 0.0;
  std::string note;
};

BandwidthSetup bandwidth_setup(const Manifest& m, const BandwidthJob& job) {
  WaveguideSpec spec = m.waveguide();
  spec.length = job.length;
  BandwidthSetup b;
  b.omega_pump = m.omega(band::P);
  if (job.process == Process::sp_degenerate) {
    if (!spec.has_model(band::F)) throw ParseError("band F has no index table");
    b.generated = &spec.model(band::F);
    b.omega_generated = b.omega_pump / 3.0;
    if (spec.has_model(band::P)) {
      SpWaveguideBandwidthInput in;
      in.fundamental = b.generated;
      in.pump = &spec.model(band::P);
      in.omega_pump = b.omega_pump;
      in.length = job.length;
      in.pump_power = job.pump_power;
      in.gamma_spm = std::abs(spec.gammas.spm);
      in.gamma_xpm = spec.gammas.xpm_for(band::F);
      b.upsilon = upsilon_sp_wg(in);
    } else {
      b.note = "no pump dispersion model; upsilon = 0";
    }
  } else {
    if (!spec.has_model(band::G)) throw ParseError("band G has no index table");
    b.generated = &spec.model(band::G);
    b.omega_generated = m.omega(band::G);
    if (spec.has_model(band::P)) {
      const auto kbar = shifted_wavenumbers_wg(
          spec, job.pump_power, {{band::P, b.omega_pump}, {band::S, m.omega(band::S)}, {band::G, b.omega_generated}});
      b.upsilon = mismatch(Process::stimulated, kbar) * job.length / 2.0;
    } else {
      b.note = "no pump dispersion model; upsilon = 0";
    }
  }
  return b;
}

json bandwidth_entry(double tau_inv, double lambda) {
  return {{"tau_inv_per_s", tau_inv},
          {"tau_inv_GHz", tau_inv / 1e9},
          {"delta_lambda_angular_m", delta_lambda_angular(lambda, tau_inv)},
          {"delta_lambda_cyclic_m", delta_lambda_cyclic(lambda, tau_inv)}};
}

int cmd_bandwidth(Context& ctx) {
  const auto& jobs = ctx.config.bandwidth_jobs;
  if (jobs.empty()) throw ParseError(ctx.config.path.string() + ": no [bandwidth.*] sections");
  std::vector<BandwidthSetup> setups;
  for (const auto& job : jobs) setups.push_back(bandwidth_setup(ctx.config.manifest, job));

  struct Task {
    std::size_t job;
    std::string method;
  };
  std::vector<Task> tasks;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    for (const auto& m : jobs[k].methods) {
      tasks.push_back({k, m});
      names.push_back(jobs[k].name + "' method '" + m);
    }
  }
  auto results = parallel_map<json>(tasks.size(), ctx.options.threads, [&](std::size_t i) -> json {
    const BandwidthJob& job = jobs[tasks[i].job];
    const BandwidthSetup& b = setups[tasks[i].job];
    const bool sp = job.process == Process::sp_degenerate;
    const double lambda = wavelength_from_omega(b.omega_generated);
    if (tasks[i].method == "analytic") {
      const double beta2 = b.generated->group_quantities(b.omega_generated).beta2;
      const double t = sp ? tau_sp_wg_analytic(beta2, job.length) : tau_st_wg_analytic(beta2, job.length);
      json j = bandwidth_entry(t, lambda);
      j["beta2_s2_per_m"] = beta2;
      return j;
    }
    if (tasks[i].method == "numeric") {
      const BandwidthResult r =
          sp ? tau_sp_wg_numeric(*b.generated, b.omega_pump, b.upsilon, job.length, job.bounds)
             : tau_st_wg_numeric(*b.generated, b.omega_generated, b.upsilon, job.length, job.bounds);
      json j = bandwidth_entry(r.tau_inv, lambda);
      if (sp) j["tau_inv_sq_per_s2"] = r.tau_inv_sq;
      j["estimated_rel_error"] = r.diagnostics.estimated_rel_error;
      j["outer_intervals"] = r.diagnostics.outer_intervals;
      j["evaluations"] = r.diagnostics.outer_evaluations + r.diagnostics.inner_evaluations;
      return j;
    }
    McOptions mc{job.samples, ctx.config.seed};
    const McEstimate e = sp ? mc_tau_sp_wg(*b.generated, b.omega_pump, b.upsilon, job.length, job.bounds, mc)
                            : mc_tau_st_wg(*b.generated, b.omega_generated, b.upsilon, job.length, job.bounds, mc);
    json j = bandwidth_entry(e.value, lambda);
    j["sigma_per_s"] = e.sigma;
    j["samples"] = e.samples;
    j["seed"] = e.seed;
    return j;
  });
  rethrow_first(results, names, "bandwidth job");

  json summary = header(ctx, "bandwidth");
  json reports = json::array();
  std::ostringstream table;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-14s %-11s %14s\n", "job", "process", "method", "tau_inv[1/s]");
  table << line;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& job = jobs[k];
    json j;
    j["job"] = job.name;
    j["process"] = to_string(job.process);
    j["length_m"] = job.length;
    j["pump_power_W"] = job.pump_power;
    j["upsilon"] = setups[k].upsilon;
    j["generated_wavelength_m"] = wavelength_from_omega(setups[k].omega_generated);
    const FrequencyBounds fb = resolve_bounds(*setups[k].generated, job.bounds);
    j["window_lambda_min_m"] = wavelength_from_omega(fb.omega_max);
    j["window_lambda_max_m"] = wavelength_from_omega(fb.omega_min);
    if (!setups[k].note.empty()) j["note"] = setups[k].note;
    json methods;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].job != k) continue;
      methods[tasks[i].method] = *results[i].value;
      std::snprintf(line, sizeof line, "%-20s %-14s %-11s %14.6e\n", job.name.c_str(), to_string(job.process).c_str(),
                    tasks[i].method.c_str(), (*results[i].value)["tau_inv_per_s"].get<double>());
      table << line;
    }
    if (methods.contains("numeric") && methods.contains("analytic")) {
      j["numeric_over_analytic"] =
          methods["numeric"]["tau_inv_per_s"].get<double>() / methods["analytic"]["tau_inv_per_s"].get<double>();
    }
    if (methods.contains("numeric") && methods.contains("montecarlo")) {
      j["montecarlo_over_numeric"] =
          methods["montecarlo"]["tau_inv_per_s"].get<double>() / methods["numeric"]["tau_inv_per_s"].get<double>();
    }
    j["methods"] = methods;
    reports.push_back(j);
  }
  summary["jobs"] = reports;
  if (ctx.wants("json")) write_text(ctx.out_dir / "bandwidth.json", dump(summary));
  if (ctx.options.json) {
    ctx.out << dump(summary);
  } else {
    ctx.out << table.str();
  }
  return exit_ok;
}

int cmd_phasematch(Context& ctx) {
  const auto& jobs = ctx.config.phasematch_jobs;
  if (jobs.empty()) throw ParseError(ctx.config.path.string() + ": no [phasematch.*] sections");
  const WaveguideSpec spec = ctx.config.manifest.waveguide();
  std::vector<std::string> names;
  for (const auto& j : jobs) names.push_back(j.name);
  auto results = parallel_map<PhaseMatchResult>(jobs.size(), ctx.options.threads, [&](std::size_t i) {
    return find_phase_matched(spec, jobs[i].request);
  });
  rethrow_first(results, names, "phasematch job");

  json summary = header(ctx, "phasematch");
  json reports = json::array();
  std::ostringstream table;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-18s %-6s %14s %12s %5s\n", "job", "process", "band", "lambda[m]",
                "dk[rad/m]", "root");
  table << line;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const PhaseMatchResult& r = *results[i].value;
    json j;
    j["job"] = jobs[i].name;
    j["process"] = to_string(jobs[i].request.process);
    j["pump_power_W"] = jobs[i].request.pump_power;
    j["unknown_band"] = r.unknown_band;
    json wl;
    for (const auto& [b, w] : r.omega) wl[b] = wavelength_from_omega(w);
    j["wavelength_m"] = wl;
    j["mismatch_rad_per_m"] = r.mismatch;
    j["energy_residual_rad_per_s"] = r.energy_residual;
    j["root"] = r.root;
    j["degenerate_medium"] = r.degenerate_medium;
    j["iterations"] = r.iterations;
    if (spec.has_model(band::P) && r.omega.count(band::P)) {
      const double kp = spec.model(band::P).wavenumber(r.omega.at(band::P));
      const double shift = std::abs(spec.gammas.spm) * jobs[i].request.pump_power;
      j["k_pump_rad_per_m"] = kp;
      j["spm_shift_rad_per_m"] = shift;
    }
    reports.push_back(j);
    std::snprintf(line, sizeof line, "%-20s %-18s %-6s %14.6e %12.3e %5s\n", jobs[i].name.c_str(),
                  to_string(jobs[i].request.process).c_str(), r.unknown_band.c_str(), r.wavelength(r.unknown_band),
                  r.mismatch, r.root ? "yes" : "no");
    table << line;
  }
  summary["jobs"] = reports;
  if (ctx.wants("json")) write_text(ctx.out_dir / "phasematch.json", dump(summary));
  if (ctx.options.json) {
    ctx.out << dump(summary);
  } else {
    ctx.out << table.str();
  }
  return exit_ok;
}

int cmd_overlap(Context& ctx) {
  const auto& jobs = ctx.config.overlap_jobs;
  if (jobs.empty()) throw ParseError(ctx.config.path.string() + ": no [overlap.*] sections");
  std::map<std::string, std::shared_ptr<const ModeProfile>> profiles;
  for (const auto& job : jobs) {
    for (const auto& b : job.bands) {
      if (!profiles.count(b)) {
        profiles[b] = std::make_shared<const ModeProfile>(read_mode_profile(*ctx.config.manifest.bands.at(b).profile));
      }
    }
  }
  std::vector<std::string> names;
  for (const auto& j : jobs) names.push_back(j.name);
  auto results = parallel_map<json>(jobs.size(), ctx.options.threads, [&](std::size_t i) -> json {
    const OverlapJob& job = jobs[i];
    std::array<const ModeProfile*, 4> modes{};
    std::array<ModeReference, 4> refs{};
    std::array<double, 4> omega{}, nbar{};
    for (std::size_t q = 0; q < 4; ++q) {
      modes[q] = profiles.at(job.bands[q]).get();
      refs[q] = default_reference(*modes[q]);
      omega[q] = modes[q]->omega;
      nbar[q] = refs[q].nbar;
    }
    const Chi3Map chi3 = job.core_index ? Chi3Map::core(*modes[0], *job.core_index) : Chi3Map::uniform();
    const EffectiveArea ea = effective_area_waveguide(modes, job.conjugation, chi3, refs);
    json j;
    j["job"] = job.name;
    j["bands"] = job.bands;
    j["conjugation"] = job.conjugation == Conjugation::two_dagger ? "two_dagger" : "three_dagger";
    j["area_m2"] = ea.area;
    j["area_um2"] = ea.area * 1e12;
    j["phase_rad"] = ea.phase;
    if (job.chi3_bar) {
      const cplx g = gamma_general(omega, nbar, *job.chi3_bar, ea.area, ea.phase);
      j["chi3_bar_m2_per_V2"] = *job.chi3_bar;
      j["gamma_abs_per_W_m"] = std::abs(g);
      j["gamma_re_per_W_m"] = g.real();
      j["gamma_im_per_W_m"] = g.imag();
    }
    return j;
  });
  rethrow_first(results, names, "overlap job");

  json summary = header(ctx, "overlap");
  json reports = json::array();
  std::ostringstream table;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-16s %14s %14s\n", "job", "bands", "area[um^2]", "|gamma|[1/Wm]");
  table << line;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const json& j = *results[i].value;
    reports.push_back(j);
    const std::string bands = jobs[i].bands[0] + "," + jobs[i].bands[1] + "," + jobs[i].bands[2] + "," + jobs[i].bands[3];
    const std::string gamma = j.contains("gamma_abs_per_W_m") ? format_number(j["gamma_abs_per_W_m"].get<double>(), 4) : "-";
    std::snprintf(line, sizeof line, "%-20s %-16s %14.6f %14s\n", jobs[i].name.c_str(), bands.c_str(),
                  j["area_um2"].get<double>(), gamma.c_str());
    table << line;
  }
  summary["jobs"] = reports;
  if (ctx.wants("json")) write_text(ctx.out_dir / "overlap.json", dump(summary));
  if (ctx.options.json) {
    ctx.out << dump(summary);
  } else {
    ctx.out << table.str();
  }
  return exit_ok;
}

}  // namespace

int run(const CliOptions& options, std::ostream& out, std::ostream& err) {
  try {
    Context ctx{options, load_run_config(options.config), {}, out, err};
    if (options.seed) ctx.config.seed = *options.seed;
    ctx.out_dir = options.out ? *options.out : ctx.config.output_dir;
    ctx.log("config " + options.config.string() + ", output " + ctx.out_dir.string());
    if (options.command == "rate") return cmd_rate(ctx);
    if (options.command == "sweep") return cmd_sweep(ctx);
    if (options.command == "bandwidth") return cmd_bandwidth(ctx);
    if (options.command == "phasematch") return cmd_phasematch(ctx);
    if (options.command == "overlap") return cmd_overlap(ctx);
    throw ParseError("unknown command '" + options.command + "'");
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_parse_error;
  } catch (const PhysicsError& e) {
    err << "physics error: " << e.what() << '\n';
    return exit_physics_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Third-order parametric down-conversion rate calculator"};
  app.require_subcommand(1);
  CliOptions options;
  std::uint64_t seed = 0;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"rate", "Evaluate every [scenario.*] section"},
      {"sweep", "Run every [sweep.*] section and fit log-log exponents"},
      {"phasematch", "Solve every [phasematch.*] section"},
      {"bandwidth", "Compute every [bandwidth.*] section"},
      {"overlap", "Evaluate every [overlap.*] section"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", options.config, "Run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", options.out, "Output directory (overrides [run] output)");
    sub->add_flag("--json", options.json, "Print the machine-readable summary");
    sub->add_option("--seed", seed, "Monte Carlo seed (overrides [run] seed)");
    sub->add_option("-j,--threads", options.threads, "Worker threads (0 = all cores)");
    sub->add_flag("-v,--verbose", options.verbose, "Progress messages on stderr");
    sub->final_callback([&options, sub, &seed] {
      options.command = sub->get_name();
      if (sub->count("--seed")) options.seed = seed;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : exit_parse_error;
  }
  return run(options, std::cout, std::cerr);
}

}  // namespace topdc
