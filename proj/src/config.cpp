#include "topdc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "topdc/constants.hpp"
#include "topdc/error.hpp"

namespace topdc {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

// Inline comments start at a ';' preceded by whitespace.
std::string strip_comment(const std::string& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] == ';' && std::isspace(static_cast<unsigned char>(s[i - 1]))) return trim(s.substr(0, i));
  }
  return trim(s);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct UnitEntry {
  const char* name;
  Dimension dim;
  double scale;
};

constexpr double two_pi = 2.0 * constants::pi;

const UnitEntry unit_table[] = {
    {"m", Dimension::length, 1.0},
    {"cm", Dimension::length, 1e-2},
    {"mm", Dimension::length, 1e-3},
    {"um", Dimension::length, 1e-6},
    {"nm", Dimension::length, 1e-9},
    {"W", Dimension::power, 1.0},
    {"mW", Dimension::power, 1e-3},
    {"uW", Dimension::power, 1e-6},
    {"nW", Dimension::power, 1e-9},
    {"rad/s", Dimension::frequency, 1.0},
    {"1/s", Dimension::frequency, 1.0},
    {"Hz", Dimension::frequency, 1.0},
    {"kHz", Dimension::frequency, 1e3},
    {"MHz", Dimension::frequency, 1e6},
    {"GHz", Dimension::frequency, 1e9},
    {"THz", Dimension::frequency, 1e12},
    {"Hz_cyclic", Dimension::frequency, two_pi},
    {"kHz_cyclic", Dimension::frequency, two_pi * 1e3},
    {"MHz_cyclic", Dimension::frequency, two_pi * 1e6},
    {"GHz_cyclic", Dimension::frequency, two_pi * 1e9},
    {"THz_cyclic", Dimension::frequency, two_pi * 1e12},
};

const char* dimension_name(Dimension d) {
  switch (d) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::length: return "length";
    case Dimension::power: return "power";
    case Dimension::frequency: return "frequency";
  }
  return "?";
}

// Strict key access for one INI section; unknown keys are errors.
class Section {
 public:
  Section(std::string name, const pt::ptree& tree, fs::path base)
      : name_(std::move(name)), tree_(tree), base_(std::move(base)) {}

  const std::string& name() const { return name_; }

  std::optional<std::string> text(const std::string& key) {
    used_.insert(key);
    for (const auto& [k, v] : tree_) {
      if (k == key) {
        std::string s = strip_comment(v.data());
        if (s.empty()) fail(key, "empty value");
        return s;
      }
    }
    return std::nullopt;
  }

  std::string require(const std::string& key) {
    auto s = text(key);
    if (!s) throw ParseError("[" + name_ + "]: missing key '" + key + "'");
    return *s;
  }

  std::optional<double> quantity(const std::string& key, Dimension dim) {
    auto s = text(key);
    if (!s) return std::nullopt;
    try {
      return parse_quantity(*s, dim);
    } catch (const ParseError& e) {
      fail(key, e.what());
    }
  }

  double require_quantity(const std::string& key, Dimension dim) {
    auto v = quantity(key, dim);
    if (!v) throw ParseError("[" + name_ + "]: missing key '" + key + "'");
    return *v;
  }

  std::optional<std::size_t> count(const std::string& key) {
    auto s = text(key);
    if (!s) return std::nullopt;
    std::size_t n = 0;
    auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), n);
    if (ec != std::errc() || p != s->data() + s->size()) fail(key, "expected a non-negative integer");
    return n;
  }

  std::optional<fs::path> path(const std::string& key) {
    auto s = text(key);
    if (!s) return std::nullopt;
    fs::path p(*s);
    if (p.is_relative()) p = base_ / p;
    p = p.lexically_normal();
    if (!fs::exists(p)) fail(key, "file not found: " + p.string());
    return p;
  }

  bool has(const std::string& key) const {
    return std::any_of(tree_.begin(), tree_.end(), [&](const auto& kv) { return kv.first == key; });
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    for (const auto& kv : tree_) out.push_back(kv.first);
    return out;
  }

  void finish() const {
    for (const auto& kv : tree_) {
      if (!used_.count(kv.first)) throw ParseError("[" + name_ + "]: unknown key '" + kv.first + "'");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ParseError("[" + name_ + "] " + key + ": " + msg);
  }

 private:
  std::string name_;
  const pt::ptree& tree_;
  fs::path base_;
  std::set<std::string> used_;
};

pt::ptree read_tree(const fs::path& path) {
  if (!fs::exists(path)) throw ParseError("file not found: " + path.string());
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.what());
  }
  for (const auto& [name, section] : tree) {
    if (!section.data().empty() && section.empty()) {
      throw ParseError(path.string() + ": key '" + name + "' outside any section");
    }
  }
  return tree;
}

// "prefix.name" -> name, else empty.
std::string suffix_after(const std::string& section, const std::string& prefix) {
  const std::string p = prefix + ".";
  if (section.rfind(p, 0) == 0 && section.size() > p.size()) return section.substr(p.size());
  return {};
}

const std::vector<std::string> known_bands = {band::P, band::F, band::G, band::S, band::Gbar};

bool is_known_band(const std::string& b) {
  return std::find(known_bands.begin(), known_bands.end(), b) != known_bands.end();
}

}  // namespace

double parse_quantity(const std::string& raw, Dimension dim) {
  const std::string s = trim(raw);
  if (s.empty()) throw ParseError("empty quantity");
  double value = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc()) throw ParseError("not a number: '" + s + "'");
  const std::string unit = trim(std::string(p, s.data() + s.size()));
  if (!std::isfinite(value)) throw ParseError("non-finite quantity: '" + s + "'");
  if (unit.empty()) return value;
  for (const auto& u : unit_table) {
    if (unit == u.name) {
      if (u.dim != dim) {
        throw ParseError("unit '" + unit + "' is not a " + std::string(dimension_name(dim)) + " unit");
      }
      return value * u.scale;
    }
  }
  throw ParseError("unknown unit '" + unit + "' in '" + s + "'");
}

std::map<std::string, double> Manifest::omegas() const {
  std::map<std::string, double> om;
  for (const auto& [b, info] : bands) {
    if (info.omega) om[b] = *info.omega;
  }
  auto has = [&](const std::string& b) { return om.count(b) != 0; };
  if (!has(band::P) && has(band::F)) om[band::P] = 3.0 * om[band::F];
  if (!has(band::F) && has(band::P)) om[band::F] = om[band::P] / 3.0;
  if (!has(band::G) && has(band::P) && has(band::S)) om[band::G] = (om[band::P] - om[band::S]) / 2.0;
  if (!has(band::Gbar) && has(band::P) && has(band::S)) om[band::Gbar] = om[band::P] - 2.0 * om[band::S];
  return om;
}

double Manifest::omega(const std::string& band_label) const {
  const auto om = omegas();
  auto it = om.find(band_label);
  if (it == om.end()) throw ParseError(path.string() + ": frequency of band '" + band_label + "' not defined");
  return it->second;
}

WaveguideSpec Manifest::waveguide() const {
  WaveguideSpec spec;
  spec.length = length.value_or(0.0);
  spec.bands = models;
  spec.gammas = gammas;
  return spec;
}

RingSpec Manifest::ring() const {
  RingSpec ring;
  ring.circumference = circumference.value_or(0.0);
  ring.gammas = gammas;
  const auto om = omegas();
  auto band_info = [&](const std::string& b) -> const ManifestBand* {
    auto it = bands.find(b);
    return it == bands.end() ? nullptr : &it->second;
  };
  const ManifestBand* fund = band_info(band::F);
  for (const auto& [b, w] : om) {
    const ManifestBand* info = band_info(b);
    const bool shares_f = b == band::G || b == band::S || b == band::Gbar;
    Resonance r;
    r.omega = w;
    if (info && info->quality) {
      r.quality = *info->quality;
    } else if (shares_f && fund && fund->quality) {
      r.quality = *fund->quality;
    } else {
      continue;
    }
    r.escape_efficiency = info && info->escape_efficiency ? *info->escape_efficiency : default_escape_efficiency;
    // Bands without their own table share the F group index, like their Q.
    std::optional<double> ng;
    if (info && info->group_index) ng = info->group_index;
    auto model_for = models.find(b);
    if (!ng && model_for == models.end() && shares_f) {
      if (fund && fund->group_index) ng = fund->group_index;
      model_for = models.find(band::F);
    }
    if (!ng && model_for != models.end() && model_for->second->contains(w)) {
      ng = model_for->second->group_quantities(w).n_g;
    }
    if (!ng) continue;
    r.group_velocity = constants::c / *ng;
    if (info && info->kappa) {
      r.kappa = *info->kappa;
    } else if (model_for != models.end() && model_for->second->contains(w)) {
      r.kappa = model_for->second->wavenumber(w);
    }
    ring.resonances[b] = r;
  }
  return ring;
}

Manifest load_manifest(const fs::path& path) {
  const pt::ptree tree = read_tree(path);
  const fs::path base = path.parent_path();
  Manifest m;
  m.path = path;
  m.name = path.stem().string();
  bool have_gamma = false;

  for (const auto& [name, tree_section] : tree) {
    Section sec(name, tree_section, base);
    if (name == "device") {
      if (auto s = sec.text("name")) m.name = *s;
    } else if (name == "waveguide") {
      m.length = sec.require_quantity("length", Dimension::length);
      if (!(*m.length > 0)) sec.fail("length", "must be positive");
    } else if (name == "ring") {
      m.circumference = sec.require_quantity("circumference", Dimension::length);
      if (!(*m.circumference > 0)) sec.fail("circumference", "must be positive");
      if (auto e = sec.quantity("escape_efficiency", Dimension::dimensionless)) {
        if (!(*e > 0 && *e <= 1)) sec.fail("escape_efficiency", "must lie in (0, 1]");
        m.default_escape_efficiency = *e;
        m.escape_efficiency_defaulted = false;
      }
    } else if (name == "gamma") {
      have_gamma = true;
      auto g = [&](const char* key) {
        auto v = sec.quantity(key, Dimension::dimensionless);
        return v ? cplx(*v, 0.0) : cplx(0.0, 0.0);
      };
      m.gammas.fff = g("fff");
      m.gammas.ggs = g("ggs");
      m.gammas.gg_s = g("gg_s");
      m.gammas.gbar_ss = g("gbar_ss");
      m.gammas.spm = g("spm");
      m.gammas.xpm = g("xpm");
      if (auto v = sec.quantity("chi3_bar", Dimension::dimensionless)) m.gammas.chi3_bar = *v;
      for (const auto& key : sec.keys()) {
        if (key.rfind("xpm_", 0) != 0) continue;
        const std::string b = key.substr(4);
        if (!is_known_band(b)) sec.fail(key, "unknown band '" + b + "'");
        m.gammas.xpm_by_band[b] = cplx(*sec.quantity(key, Dimension::dimensionless), 0.0);
      }
    } else if (auto b = suffix_after(name, "band"); !b.empty()) {
      if (!is_known_band(b)) throw ParseError("[" + name + "]: unknown band '" + b + "'");
      ManifestBand info;
      if (auto l = sec.quantity("lambda", Dimension::length)) {
        if (!(*l > 0)) sec.fail("lambda", "must be positive");
        info.omega = omega_from_wavelength(*l);
      }
      if (auto p = sec.path("index_table")) info.index_table = p->string();
      if (auto p = sec.path("profile")) info.profile = p->string();
      info.quality = sec.quantity("Q", Dimension::dimensionless);
      if (info.quality && !(*info.quality > 0)) sec.fail("Q", "must be positive");
      info.escape_efficiency = sec.quantity("eta", Dimension::dimensionless);
      if (info.escape_efficiency && !(*info.escape_efficiency > 0 && *info.escape_efficiency <= 1)) {
        sec.fail("eta", "must lie in (0, 1]");
      }
      info.group_index = sec.quantity("ng", Dimension::dimensionless);
      if (info.group_index && !(*info.group_index > 0)) sec.fail("ng", "must be positive");
      if (auto neff = sec.quantity("neff", Dimension::dimensionless)) {
        if (!info.omega) sec.fail("neff", "needs lambda in the same section");
        info.kappa = *neff * *info.omega / constants::c;
      }
      sec.finish();
      m.bands[b] = info;
      continue;
    } else {
      throw ParseError(path.string() + ": unknown section [" + name + "]");
    }
    sec.finish();
  }

  if (!have_gamma) throw ParseError(path.string() + ": missing [gamma] section");
  for (const auto& [b, info] : m.bands) {
    if (info.index_table) {
      try {
        m.models[b] = std::make_shared<const DispersionModel>(build_model(read_index_csv(*info.index_table)));
      } catch (const PhysicsError& e) {
        throw ParseError("band " + b + " index table: " + e.what());
      }
    }
  }

  if (m.circumference) {
    auto band_eta = [&](const std::string& b) {
      auto it = m.bands.find(b);
      return it != m.bands.end() && it->second.escape_efficiency;
    };
    if (!(band_eta(band::P) && band_eta(band::F))) {
      std::ostringstream os;
      os << "escape efficiency eta = " << m.default_escape_efficiency
         << (m.escape_efficiency_defaulted ? " (default, critical coupling)" : " (manifest)")
         << " for bands without their own value";
      m.assumptions.push_back(os.str());
    }
    for (const auto& b : {band::G, band::S, band::Gbar}) {
      auto it = m.bands.find(b);
      if (it == m.bands.end() || !it->second.quality) {
        m.assumptions.push_back("Q_" + b + " defaults to Q_F");
      }
    }
  }
  if (m.models.count(band::F)) {
    for (const auto& b : {band::G, band::S, band::Gbar}) {
      if (!m.models.count(b)) m.assumptions.push_back("band " + b + " uses the F dispersion model");
    }
  }
  return m;
}

std::vector<double> SweepConfig::grid() const {
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = from;
    return g;
  }
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    g[i] = log_spacing ? std::exp(std::log(from) + t * (std::log(to) - std::log(from))) : from + t * (to - from);
  }
  g.front() = from;
  g.back() = to;
  return g;
}

namespace {

Dimension sweep_dimension(ScalingParameter p) {
  switch (p) {
    case ScalingParameter::length:
    case ScalingParameter::circumference: return Dimension::length;
    case ScalingParameter::pump_power:
    case ScalingParameter::seed_power: return Dimension::power;
    default: return Dimension::dimensionless;
  }
}

std::optional<FrequencyBounds> window(Section& sec) {
  auto lo = sec.quantity("lambda_min", Dimension::length);
  auto hi = sec.quantity("lambda_max", Dimension::length);
  if (!lo && !hi) return std::nullopt;
  if (!lo || !hi) sec.fail(lo ? "lambda_max" : "lambda_min", "both lambda_min and lambda_max are needed");
  if (!(*lo > 0 && *hi > *lo)) sec.fail("lambda_min", "need 0 < lambda_min < lambda_max");
  return FrequencyBounds{omega_from_wavelength(*hi), omega_from_wavelength(*lo)};
}

Scenario parse_scenario(Section& sec, const std::string& name, const Manifest& m) {
  Scenario s;
  s.name = name;
  try {
    s.process = parse_process(sec.require("process"));
  } catch (const Error& e) {
    sec.fail("process", e.what());
  }
  s.pump_power = sec.require_quantity("pump_power", Dimension::power);
  s.seed_power = sec.quantity("seed_power", Dimension::power).value_or(0.0);
  if (!(s.pump_power >= 0)) sec.fail("pump_power", "must be non-negative");
  if (!(s.seed_power >= 0)) sec.fail("seed_power", "must be non-negative");

  const std::string device = sec.require("device");
  if (device == "waveguide") {
    WaveguideScenario w;
    w.spec = m.waveguide();
    if (auto L = sec.quantity("length", Dimension::length)) w.spec.length = *L;
    if (!(w.spec.length > 0)) sec.fail("length", "waveguide length not set in the manifest or scenario");
    w.omega = m.omegas();
    for (const auto& b : known_bands) {
      if (auto l = sec.quantity("lambda_" + b, Dimension::length)) w.omega[b] = omega_from_wavelength(*l);
    }
    try {
      w.bandwidth.source = parse_bandwidth_source(sec.text("bandwidth").value_or("analytic"));
    } catch (const Error& e) {
      sec.fail("bandwidth", e.what());
    }
    w.bandwidth.tau_inv = sec.quantity("tau_inv", Dimension::frequency);
    w.bandwidth.beta2 = sec.quantity("beta2", Dimension::dimensionless);
    w.bandwidth.bounds = window(sec);
    if (w.bandwidth.source == BandwidthSource::injected && !w.bandwidth.tau_inv &&
        s.process != Process::doubly_stimulated) {
      sec.fail("tau_inv", "required for an injected bandwidth");
    }
    w.mismatch = sec.quantity("mismatch", Dimension::dimensionless);
    s.device = std::move(w);
  } else if (device == "ring") {
    RingScenario r;
    r.spec = m.ring();
    if (auto c = sec.quantity("circumference", Dimension::length)) r.spec.circumference = *c;
    if (!(r.spec.circumference > 0)) sec.fail("circumference", "ring circumference not set in the manifest or scenario");
    const std::string det = sec.text("pump_detuning").value_or("optimal");
    if (det != "optimal") r.pump_detuning = parse_quantity(det, Dimension::frequency);
    r.seed_detuning = sec.quantity("seed_detuning", Dimension::frequency).value_or(0.0);
    s.device = std::move(r);
  } else {
    sec.fail("device", "expected 'waveguide' or 'ring', got '" + device + "'");
  }
  sec.finish();
  return s;
}

}  // namespace

RunConfig load_run_config(const fs::path& path) {
  const pt::ptree tree = read_tree(path);
  const fs::path base = path.parent_path();
  RunConfig cfg;
  cfg.path = path;
  cfg.formats = {"json", "csv", "svg"};

  auto run_it = std::find_if(tree.begin(), tree.end(), [](const auto& kv) { return kv.first == "run"; });
  if (run_it == tree.end()) throw ParseError(path.string() + ": missing [run] section");
  {
    Section sec("run", run_it->second, base);
    auto manifest = sec.path("manifest");
    if (!manifest) sec.fail("manifest", "required");
    cfg.manifest = load_manifest(*manifest);
    fs::path out = sec.text("output").value_or("topdc-out");
    cfg.output_dir = fs::path(out).is_relative() ? (base / out).lexically_normal() : fs::path(out);
    if (auto f = sec.text("formats")) {
      cfg.formats = split_list(*f);
      for (const auto& fmt : cfg.formats) {
        if (fmt != "json" && fmt != "csv" && fmt != "svg") sec.fail("formats", "unknown format '" + fmt + "'");
      }
    }
    if (auto seed = sec.count("seed")) cfg.seed = *seed;
    sec.finish();
  }

  std::set<std::string> names;
  for (const auto& [name, tree_section] : tree) {
    if (name == "run") continue;
    Section sec(name, tree_section, base);
    if (auto n = suffix_after(name, "scenario"); !n.empty()) {
      cfg.scenarios.push_back(parse_scenario(sec, n, cfg.manifest));
    } else if (auto n = suffix_after(name, "sweep"); !n.empty()) {
      SweepConfig sw;
      sw.name = n;
      sw.scenario = sec.require("scenario");
      try {
        sw.target = parse_scaling_target(sec.require("parameter"));
      } catch (const Error& e) {
        sec.fail("parameter", e.what());
      }
      const Dimension dim = sweep_dimension(sw.target.parameter);
      sw.from = sec.require_quantity("from", dim);
      sw.points = sec.count("points").value_or(1);
      sw.to = sw.points > 1 ? sec.require_quantity("to", dim) : sec.quantity("to", dim).value_or(sw.from);
      const std::string spacing = sec.text("spacing").value_or("log");
      if (spacing != "log" && spacing != "linear") sec.fail("spacing", "expected 'log' or 'linear'");
      sw.log_spacing = spacing == "log";
      if (!(sw.from > 0 && sw.to > 0)) sec.fail("from", "sweep range must be positive");
      if (sw.points == 0) sec.fail("points", "must be at least 1");
      sec.finish();
      cfg.sweeps.push_back(sw);
    } else if (auto n = suffix_after(name, "bandwidth"); !n.empty()) {
      BandwidthJob job;
      job.name = n;
      try {
        job.process = parse_process(sec.require("process"));
      } catch (const Error& e) {
        sec.fail("process", e.what());
      }
      if (job.process != Process::sp_degenerate && job.process != Process::stimulated) {
        sec.fail("process", "bandwidth jobs cover sp_degenerate and stimulated");
      }
      job.methods = split_list(sec.text("methods").value_or("numeric,analytic"));
      for (const auto& meth : job.methods) {
        if (meth != "numeric" && meth != "analytic" && meth != "montecarlo") {
          sec.fail("methods", "unknown method '" + meth + "'");
        }
      }
      job.bounds = window(sec);
      job.length = sec.quantity("length", Dimension::length).value_or(cfg.manifest.length.value_or(0.0));
      if (!(job.length > 0)) sec.fail("length", "waveguide length not set");
      job.pump_power = sec.quantity("pump_power", Dimension::power).value_or(0.0);
      job.samples = sec.count("samples").value_or(job.samples);
      sec.finish();
      cfg.bandwidth_jobs.push_back(job);
    } else if (auto n = suffix_after(name, "phasematch"); !n.empty()) {
      PhaseMatchJob job;
      job.name = n;
      auto& rq = job.request;
      try {
        rq.process = parse_process(sec.require("process"));
      } catch (const Error& e) {
        sec.fail("process", e.what());
      }
      rq.lambda_min = sec.require_quantity("lambda_min", Dimension::length);
      rq.lambda_max = sec.require_quantity("lambda_max", Dimension::length);
      if (!(rq.lambda_min > 0 && rq.lambda_max > rq.lambda_min)) {
        sec.fail("lambda_min", "need 0 < lambda_min < lambda_max");
      }
      if (auto l = sec.quantity("lambda_pump", Dimension::length)) rq.omega_pump = omega_from_wavelength(*l);
      if (auto l = sec.quantity("lambda_seed", Dimension::length)) rq.omega_seed = omega_from_wavelength(*l);
      rq.pump_power = sec.quantity("pump_power", Dimension::power).value_or(0.0);
      rq.tolerance = sec.quantity("tolerance", Dimension::dimensionless).value_or(rq.tolerance);
      rq.scan_points = sec.count("scan_points").value_or(rq.scan_points);
      sec.finish();
      cfg.phasematch_jobs.push_back(job);
    } else if (auto n = suffix_after(name, "overlap"); !n.empty()) {
      OverlapJob job;
      job.name = n;
      const auto bands = split_list(sec.require("bands"));
      if (bands.size() != 4) sec.fail("bands", "expected four comma-separated band labels");
      for (std::size_t i = 0; i < 4; ++i) {
        auto it = cfg.manifest.bands.find(bands[i]);
        if (it == cfg.manifest.bands.end() || !it->second.profile) {
          sec.fail("bands", "band '" + bands[i] + "' has no mode profile in the manifest");
        }
        job.bands[i] = bands[i];
      }
      const std::string conj = sec.text("conjugation").value_or("two_dagger");
      if (conj == "two_dagger") {
        job.conjugation = Conjugation::two_dagger;
      } else if (conj == "three_dagger") {
        job.conjugation = Conjugation::three_dagger;
      } else {
        sec.fail("conjugation", "expected 'two_dagger' or 'three_dagger'");
      }
      job.chi3_bar = sec.quantity("chi3_bar", Dimension::dimensionless);
      if (!job.chi3_bar) job.chi3_bar = cfg.manifest.gammas.chi3_bar;
      job.core_index = sec.quantity("core_index", Dimension::dimensionless);
      sec.finish();
      cfg.overlap_jobs.push_back(job);
    } else {
      throw ParseError(path.string() + ": unknown section [" + name + "]");
    }
    if (!names.insert(name).second) throw ParseError(path.string() + ": duplicate section [" + name + "]");
  }

  for (const auto& sw : cfg.sweeps) {
    auto it = std::find_if(cfg.scenarios.begin(), cfg.scenarios.end(),
                           [&](const Scenario& s) { return s.name == sw.scenario; });
    if (it == cfg.scenarios.end()) {
      throw ParseError("[sweep." + sw.name + "]: unknown scenario '" + sw.scenario + "'");
    }
  }
  if (cfg.scenarios.empty() && cfg.sweeps.empty() && cfg.bandwidth_jobs.empty() && cfg.phasematch_jobs.empty() &&
      cfg.overlap_jobs.empty()) {
    throw ParseError(path.string() + ": no scenarios, sweeps or jobs defined");
  }
  return cfg;
}

}  // namespace topdc
