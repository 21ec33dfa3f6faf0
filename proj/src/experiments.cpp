#include "kdvbbm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "kdvbbm/errors.hpp"
#include "kdvbbm/estimates.hpp"
#include "kdvbbm/pathology.hpp"
#include "kdvbbm/random.hpp"

namespace kdvbbm {

std::string_view experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::simulate: return "simulate";
    case ExperimentKind::energy_audit: return "energy-audit";
    case ExperimentKind::estimates: return "estimates";
    case ExperimentKind::illposed_scan: return "illposed-scan";
    case ExperimentKind::inflate: return "inflate";
    case ExperimentKind::split: return "split";
  }
  return "?";
}

std::vector<ExperimentKind> all_experiments() {
  return {ExperimentKind::simulate, ExperimentKind::energy_audit, ExperimentKind::estimates,
          ExperimentKind::illposed_scan, ExperimentKind::inflate, ExperimentKind::split};
}

ExperimentKind experiment_from_name(std::string_view name) {
  for (auto k : all_experiments())
    if (experiment_name(k) == name) return k;
  throw ConfigError({"unknown experiment '" + std::string(name) + "'"});
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  in >> out;
  return !in.fail() && in.eof();
}

// Reads an [experiment] block with defaults, collecting every problem.
class BlockReader {
 public:
  BlockReader(const KeyValueBlock& block, std::vector<std::string>& errors)
      : block_(block), errors_(errors) {}

  double number(const std::string& key, double def) {
    used_.insert(key);
    auto v = block_.get(key);
    if (!v) return def;
    double out = 0.0;
    if (!parse_double(*v, out)) {
      fail(key, "not a number: '" + *v + "'");
      return def;
    }
    return out;
  }

  int integer(const std::string& key, int def) {
    const double v = number(key, def);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      fail(key, "not an integer");
      return def;
    }
    return static_cast<int>(v);
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> def) {
    used_.insert(key);
    auto v = block_.get(key);
    if (!v) return def;
    std::vector<double> out;
    for (const auto& item : split_list(*v)) {
      double x = 0.0;
      if (!parse_double(item, x)) {
        fail(key, "not a number list: '" + *v + "'");
        return def;
      }
      out.push_back(x);
    }
    if (out.empty()) fail(key, "empty list");
    return out;
  }

  std::vector<int> integers(const std::string& key, std::vector<int> def) {
    std::vector<double> d(def.begin(), def.end());
    std::vector<int> out;
    for (double x : numbers(key, d)) {
      if (x != std::floor(x) || std::abs(x) > 1e9) {
        fail(key, "not an integer list");
        return def;
      }
      out.push_back(static_cast<int>(x));
    }
    return out;
  }

  std::string text(const std::string& key, std::string def) {
    used_.insert(key);
    return block_.get(key).value_or(def);
  }

  bool flag(const std::string& key, bool def) {
    const std::string v = text(key, def ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(key, "not a boolean: '" + v + "'");
    return def;
  }

  void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) fail(key, what);
  }

  void finish() { block_.reject_unknown(used_, errors_, "experiment."); }

 private:
  void fail(const std::string& key, const std::string& what) {
    errors_.push_back("experiment." + key + ": " + what);
  }

  const KeyValueBlock& block_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

bool all_positive(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x > 0; });
}

struct SimulateParams {
  std::string initial;
  double t_final = 1.0;
  int save_every = 10;
  std::vector<double> norms;
  Frame frame = Frame::standard;
};

SimulateParams read_simulate(BlockReader& r, bool audit, std::uint64_t seed) {
  SimulateParams p;
  p.initial = r.text("initial", audit ? "sin:1:1, cos:2:0.5" : "sin:1:1");
  p.t_final = r.number("t_final", 1.0);
  r.require(p.t_final > 0.0, "t_final", "must be positive");
  if (!audit) {
    p.save_every = r.integer("save_every", 10);
    r.require(p.save_every >= 1, "save_every", "must be >= 1");
    p.norms = r.numbers("norms", {0.0, 1.0});
    const auto frame = r.text("frame", "standard");
    r.require(frame == "standard" || frame == "shifted", "frame", "standard or shifted");
    p.frame = frame == "shifted" ? Frame::shifted : Frame::standard;
  } else {
    p.save_every = 1;
    p.norms = {1.0};
  }
  try {
    (void)initial_from_spec(p.initial, 1 << 20, seed);
  } catch (const Error& e) {
    r.require(false, "initial", e.what());
  }
  return p;
}

struct EstimatesParams {
  std::vector<EstimateFamily> families;
  std::vector<int> n_list;
  int samples = 1000;
  std::vector<double> s_values;  // empty: per-family defaults
  std::vector<double> counter_s;
  std::vector<int> counter_n;
  SpectrumShape shape = SpectrumShape::decaying;
};

EstimatesParams read_estimates(BlockReader& r) {
  EstimatesParams p;
  const auto fam = r.text("families", "all");
  if (fam == "all") {
    p.families = all_families();
  } else {
    for (const auto& name : split_list(fam)) {
      try {
        p.families.push_back(family_from_name(name));
      } catch (const ConfigError&) {
        r.require(false, "families", "unknown family '" + name + "'");
      }
    }
  }
  p.n_list = r.integers("n_list", {64, 128});
  r.require(p.n_list.size() >= 2 && all_positive(p.n_list), "n_list", "needs >= 2 positive degrees");
  p.samples = r.integer("samples", 1000);
  r.require(p.samples >= 1, "samples", "must be >= 1");
  p.s_values = r.numbers("s_values", {});
  p.counter_s = r.numbers("counter_s", {-0.25, -0.5, 0.0});
  p.counter_n = r.integers("counter_n", {16, 32, 64, 128, 256, 512});
  r.require(p.counter_n.size() >= 3 && std::all_of(p.counter_n.begin(), p.counter_n.end(),
                                                   [](int n) { return n >= 4; }),
            "counter_n", "needs >= 3 values, each >= 4");
  const auto shape = r.text("shape", "decaying");
  r.require(shape == "decaying" || shape == "flat", "shape", "decaying or flat");
  p.shape = shape == "flat" ? SpectrumShape::flat : SpectrumShape::decaying;
  return p;
}

std::vector<double> default_indices(EstimateFamily f) {
  switch (f) {
    case EstimateFamily::bilinear:
    case EstimateFamily::tau: return {0.0, 0.5, 1.0, 2.0};
    case EstimateFamily::cubic: return {0.75, 1.0, 2.0};
    case EstimateFamily::grad_pair: return {1.0, 2.0};
    default: return {1.0};
  }
}

struct IllposedParams {
  std::vector<int> n_list;
  int k0 = 1;
  double s = 0.5;
  double t = 0.05;
  std::vector<int> oracle_n;
  int intervals = 128;
  bool remainder = true;
  std::vector<double> eps_list;
  int remainder_n = 16;
};

IllposedParams read_illposed(BlockReader& r) {
  IllposedParams p;
  p.n_list = r.integers("n_list", {32, 64, 128, 256, 512});
  p.k0 = r.integer("k0", 1);
  r.require(p.k0 >= 1, "k0", "must be >= 1");
  r.require(p.n_list.size() >= 3 && std::all_of(p.n_list.begin(), p.n_list.end(),
                                                [&](int n) { return n > p.k0; }),
            "n_list", "needs >= 3 values above k0");
  p.s = r.number("s", 0.5);
  r.require(p.s < 1.0, "s", "must be < 1");
  p.t = r.number("t", 0.05);
  r.require(p.t > 0.0, "t", "must be positive");
  p.oracle_n = r.integers("oracle_n", {8, 16, 32});
  r.require(std::all_of(p.oracle_n.begin(), p.oracle_n.end(), [&](int n) { return n > p.k0; }),
            "oracle_n", "values must exceed k0");
  p.intervals = r.integer("quad_intervals", 128);
  r.require(p.intervals >= 2 && p.intervals % 2 == 0, "quad_intervals", "must be even and >= 2");
  p.remainder = r.flag("remainder", true);
  p.eps_list = r.numbers("eps_list", {0.1, 0.05, 0.025});
  r.require(std::all_of(p.eps_list.begin(), p.eps_list.end(),
                        [](double e) { return e >= 0.0 && e <= 0.1; }),
            "eps_list", "values must lie in [0, 0.1]");
  p.remainder_n = r.integer("remainder_n", 16);
  r.require(p.remainder_n > p.k0, "remainder_n", "must exceed k0");
  return p;
}

InflationConfig read_inflate(BlockReader& r) {
  InflationConfig c;
  c.k1_list = r.integers("k1_list", c.k1_list);
  r.require(c.k1_list.size() >= 3 && std::all_of(c.k1_list.begin(), c.k1_list.end(),
                                                 [](int k) { return k >= 2; }),
            "k1_list", "needs >= 3 values, each >= 2");
  c.sigma = r.number("sigma", c.sigma);
  c.theta = r.number("theta", c.theta);
  c.s = r.number("s", c.s);
  c.t_fixed = r.number("t_fixed", c.t_fixed);
  c.with_remainder = r.flag("remainder", c.with_remainder);
  r.require(c.sigma > 0.0 && c.sigma < 1.0 - c.s, "sigma", "needs 0 < sigma < 1 - s");
  r.require(c.theta > 3.0, "theta", "must exceed 3");
  r.require(c.t_fixed > 0.0, "t_fixed", "must be positive");
  return c;
}

struct SplitParams {
  double s = 1.5;
  std::vector<int> n_cuts;
};

SplitParams read_split(BlockReader& r, int n) {
  SplitParams p;
  p.s = r.number("s", 1.5);
  r.require(p.s >= 1.0 && p.s < 2.0, "s", "needs 1 <= s < 2");
  p.n_cuts = r.integers("n_cuts", {8, 16, 32, 64});
  r.require(p.n_cuts.size() >= 3, "n_cuts", "needs >= 3 cutoffs");
  r.require(std::all_of(p.n_cuts.begin(), p.n_cuts.end(), [&](int c) { return c >= 1 && c < n; }),
            "n_cuts", "cutoffs must satisfy 1 <= N_cut < n");
  return p;
}

int default_n(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::simulate: return 64;
    case ExperimentKind::energy_audit: return 128;
    case ExperimentKind::split: return 512;
    default: return 0;
  }
}

double default_dt(ExperimentKind k) { return k == ExperimentKind::inflate ? 1e-4 : 1e-3; }

// Parses the experiment block for validation; the run re-reads it.
void validate_block(const RunConfig& cfg, std::vector<std::string>& errors) {
  BlockReader r(cfg.block, errors);
  switch (cfg.experiment) {
    case ExperimentKind::simulate: read_simulate(r, false, cfg.seed); break;
    case ExperimentKind::energy_audit: read_simulate(r, true, cfg.seed); break;
    case ExperimentKind::estimates: read_estimates(r); break;
    case ExperimentKind::illposed_scan: read_illposed(r); break;
    case ExperimentKind::inflate: read_inflate(r); break;
    case ExperimentKind::split: read_split(r, cfg.n); break;
  }
  r.finish();
}

Json params_json(const ModelParams& p) {
  Json j;
  j["gamma1"] = p.gamma1;
  j["gamma2"] = p.gamma2;
  j["delta1"] = p.delta1;
  j["delta2"] = p.delta2;
  j["gamma"] = p.gamma;
  j["delta3"] = p.delta3;
  j["gamma3"] = p.gamma3;
  return j;
}

}  // namespace

Json RunConfig::to_json() const {
  Json j;
  j["experiment"] = experiment_name(experiment);
  j["preset"] = preset;
  j["params"] = params_json(params);
  j["n"] = n;
  j["dt"] = dt;
  j["seed"] = seed;
  j["scheme"] = scheme_name(scheme);
  Json b = Json::object();
  for (const auto& [k, v] : block.values) b[k] = v;
  j["block"] = b;
  return j;
}

RunConfig resolve_run_config(const KeyValueDocument& doc, std::optional<ExperimentKind> kind,
                             const RunOverrides& overrides) {
  std::vector<std::string> errors;
  RunConfig cfg;
  const auto& top = doc.top;
  top.reject_unknown({"experiment", "preset", "n", "dt", "out", "seed", "scheme"}, errors, "");
  for (const auto& [name, block] : doc.sections)
    if (name != "params" && name != "experiment")
      errors.push_back("[" + name + "]: unknown section");

  if (auto e = top.get("experiment")) {
    try {
      const auto named = experiment_from_name(*e);
      if (kind && *kind != named)
        errors.push_back("experiment: config names '" + *e + "' but the command is '" +
                         std::string(experiment_name(*kind)) + "'");
      kind = named;
    } catch (const ConfigError& err) {
      errors.insert(errors.end(), err.violations().begin(), err.violations().end());
    }
  }
  if (!kind) {
    errors.push_back("experiment: missing");
    throw ConfigError(errors);
  }
  cfg.experiment = *kind;

  const bool has_params = doc.sections.count("params") != 0;
  std::optional<std::string> preset = top.get("preset");
  if (overrides.preset) preset = overrides.preset;
  if (has_params && preset) {
    errors.push_back("preset: give either a preset or a [params] section, not both");
  } else if (has_params) {
    try {
      auto loaded = params_from_block(doc.sections.at("params"));
      cfg.params = loaded.params;
      cfg.provenance = loaded.provenance;
    } catch (const ConfigError& err) {
      errors.insert(errors.end(), err.violations().begin(), err.violations().end());
    } catch (const Error& err) {
      errors.push_back(std::string("params: ") + err.what());
    }
  } else {
    cfg.preset = preset.value_or(cfg.experiment == ExperimentKind::inflate ? "inflation"
                                                                           : "hamiltonian");
    try {
      cfg.params = kdvbbm::preset(cfg.preset);
      cfg.provenance = {{"preset", cfg.preset}};
    } catch (const Error&) {
      errors.push_back("preset: unknown preset '" + cfg.preset + "'");
    }
  }

  cfg.n = default_n(cfg.experiment);
  if (auto v = top.number("n", errors, "")) {
    if (*v != std::floor(*v) || !(*v >= 1.0) || *v > 1e6)
      errors.push_back("n: must be a positive integer");
    else
      cfg.n = static_cast<int>(*v);
  }
  cfg.dt = default_dt(cfg.experiment);
  if (auto v = top.number("dt", errors, "")) {
    if (!(*v > 0.0) || !std::isfinite(*v))
      errors.push_back("dt: must be positive");
    else
      cfg.dt = *v;
  }
  if (auto s = top.get("seed")) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(*s, &used);
      if (used != s->size()) throw std::invalid_argument(*s);
    } catch (const std::exception&) {
      errors.push_back("seed: not an unsigned 64-bit integer: '" + *s + "'");
    }
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (auto s = top.get("scheme")) {
    try {
      cfg.scheme = scheme_from_name(*s);
    } catch (const ConfigError&) {
      errors.push_back("scheme: unknown scheme '" + *s + "'");
    }
  }
  if (auto o = top.get("out")) cfg.out = *o;
  if (overrides.out) cfg.out = *overrides.out;
  if (cfg.out.empty()) errors.push_back("out: empty path");

  if (auto it = doc.sections.find("experiment"); it != doc.sections.end()) cfg.block = it->second;
  validate_block(cfg, errors);
  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

SpectralField initial_from_spec(const std::string& spec, int max_mode, std::uint64_t seed) {
  SpectralField f(max_mode);
  for (const auto& term : split_list(spec)) {
    if (term == "zero") continue;
    std::vector<std::string> parts;
    std::istringstream in(term);
    std::string part;
    while (std::getline(in, part, ':')) parts.push_back(part);
    double k = 0.0, amp = 0.0;
    if (parts.size() != 3 || !parse_double(parts[1], k) || !parse_double(parts[2], amp) ||
        k != std::floor(k) || k < 0)
      throw DomainError("bad initial term '" + term + "'");
    const int mode = static_cast<int>(k);
    if (mode > max_mode) throw RangeError("initial term '" + term + "' above max_mode");
    if (parts[0] == "sin") {
      f.add(mode, Complex(0.0, -amp / 2));
    } else if (parts[0] == "cos") {
      f.add(mode, mode == 0 ? Complex(amp, 0.0) : Complex(amp / 2, 0.0));
    } else if (parts[0] == "random") {
      f += amp * random_trig_polynomial(seed, 0, mode, max_mode, SpectrumShape::flat);
    } else {
      throw DomainError("bad initial term '" + term + "'");
    }
  }
  return f;
}

namespace {

// Fixed-step integration to T, saving every `save_every` steps and at T.
template <class OnSave>
Trajectory integrate(const SpectralField& eta0, double T, int save_every, const SolveConfig& cfg,
                     const SymbolTable& table, OnSave&& on_save) {
  Trajectory traj(cfg.norm_indices);
  const auto& p = table.params();
  traj.record(0.0, eta0, p, cfg.keep_states);
  on_save(0.0, eta0);
  const auto full = static_cast<long>(std::floor(T / cfg.dt * (1.0 + 1e-12)));
  const double rest = T - cfg.dt * static_cast<double>(full);
  SpectralField eta = eta0;
  double t = 0.0;
  for (long i = 1; i <= full + 1; ++i) {
    const double h = i <= full ? cfg.dt : rest;
    if (h <= 1e-14 * T) break;
    try {
      eta = step(eta, t, h, cfg, table);
    } catch (const BlowUp& b) {
      throw BlowUp(b.what(), b.last_good(), b.time(), traj);
    }
    t = i <= full ? cfg.dt * static_cast<double>(i) : T;
    if (i % save_every == 0 || i >= full) {
      traj.record(t, eta, p, cfg.keep_states);
      on_save(t, eta);
    }
  }
  return traj;
}

ExperimentOutput simulate(const RunConfig& rc, bool audit) {
  std::vector<std::string> errs;
  BlockReader r(rc.block, errs);
  const auto sp = read_simulate(r, audit, rc.seed);
  ExperimentOutput out{ExperimentReport(std::string(experiment_name(rc.experiment))), {}};
  auto& rep = out.report;
  rep.inputs()["initial"] = sp.initial;
  rep.inputs()["t_final"] = sp.t_final;
  rep.inputs()["save_every"] = sp.save_every;

  const SymbolTable table(rc.params, rc.n);
  SolveConfig cfg;
  cfg.dt = rc.dt;
  cfg.scheme = rc.scheme;
  cfg.frame = sp.frame;
  cfg.norm_indices = sp.norms;
  cfg.keep_states = false;
  const auto eta0 = initial_from_spec(sp.initial, rc.n, rc.seed);
  const double mean0 = eta0[0].real();

  std::vector<double> times, rates;
  auto on_save = [&](double t, const SpectralField& eta) {
    times.push_back(t);
    rates.push_back(energy_drift_rate(eta, rc.params));
  };
  try {
    out.trajectory = integrate(eta0, sp.t_final, sp.save_every, cfg, table, on_save);
  } catch (const BlowUp& b) {
    rep.error(std::string("blow-up: ") + b.what());
    out.trajectory = b.partial();
  }
  const auto& tr = *out.trajectory;

  double mean_drift = 0.0;
  for (double m : tr.mean()) mean_drift = std::max(mean_drift, std::abs(m - mean0));
  rep.check(CheckRecord::at_most("mean_invariance", mean_drift, 1e-13));

  const double e0 = tr.energy().front();
  auto& rel = rep.series("energy_rel_drift");
  double max_rel = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double d = e0 != 0.0 ? std::abs(tr.energy()[i] - e0) / std::abs(e0)
                               : std::abs(tr.energy()[i]);
    rel.points.push_back({tr.times()[i], d});
    max_rel = std::max(max_rel, d);
  }
  rep.note("max_relative_energy_drift", max_rel);
  rep.note("conserves_energy", rc.params.conserves_energy());
  if (!audit) return out;

  if (rc.params.conserves_energy()) {
    rep.check(CheckRecord::at_most("energy_conservation", max_rel, 1e-8));
    return out;
  }
  // dE/dt against the drift identity, fourth-order centred differences
  auto& fd = rep.series("fd_rate");
  auto& id = rep.series("identity_rate");
  const auto& E = tr.energy();
  double worst = 0.0;
  int compared = 0;
  for (std::size_t i = 2; i + 2 < E.size(); ++i) {
    const double h = times[i + 1] - times[i];
    const double d = (-E[i + 2] + 8.0 * E[i + 1] - 8.0 * E[i - 1] + E[i - 2]) / (12.0 * h);
    fd.points.push_back({times[i], d});
    id.points.push_back({times[i], rates[i]});
    if (std::abs(d) > 1e-10) {
      worst = std::max(worst, std::abs(d - rates[i]) / std::abs(rates[i]));
      ++compared;
    }
  }
  rep.note("drift_points_compared", compared);
  rep.check(CheckRecord::at_most("drift_identity_rel_error", worst, 1e-4));
  return out;
}

ExperimentOutput estimates(const RunConfig& rc) {
  std::vector<std::string> errs;
  BlockReader r(rc.block, errs);
  const auto ep = read_estimates(r);
  ExperimentOutput out{ExperimentReport("estimates"), {}};
  auto& rep = out.report;
  rep.inputs()["n_list"] = ep.n_list;
  rep.inputs()["samples"] = ep.samples;
  rep.inputs()["shape"] = ep.shape == SpectrumShape::flat ? "flat" : "decaying";

  CorpusSpec corpus;
  corpus.seed = rc.seed;
  corpus.samples = ep.samples;
  corpus.shape = ep.shape;
  Json skipped = Json::array();
  for (auto f : ep.families) {
    const auto indices = ep.s_values.empty() ? default_indices(f) : ep.s_values;
    for (double s : indices) {
      const std::string tag = std::string(family_name(f)) + "_s" + format_label(s);
      if (!family_admits(f, s)) {
        skipped.push_back(tag);
        continue;
      }
      auto& ser = rep.series("max_" + tag);
      auto& mean = rep.series("mean_" + tag);
      for (int n : ep.n_list) {
        const auto st = corpus_sweep(f, s, n, corpus, rc.params);
        ser.points.push_back({double(n), st.max_ratio});
        mean.points.push_back({double(n), st.mean_ratio});
        Json arg;
        arg["n"] = n;
        arg["sample"] = st.argmax.sample;
        arg["ratio"] = st.max_ratio;
        rep.note("argmax_" + tag + "_n" + std::to_string(n), arg);
      }
      for (std::size_t i = 1; i < ser.points.size(); ++i) {
        const double a = ser.points[i - 1].second, b = ser.points[i].second;
        rep.check(CheckRecord::at_most(
            "max_change_" + tag + "_n" + std::to_string(ep.n_list[i]), std::abs(b - a) / a, 0.05));
      }
    }
  }
  if (!skipped.empty()) rep.note("skipped_inadmissible", skipped);

  for (double s : ep.counter_s) {
    const std::string name = "counterexample_s" + format_label(s);
    auto& ser = rep.series(name);
    for (int n : ep.counter_n) ser.points.push_back({double(n), prop21_counterexample(n, s)});
    if (s == 0.0)
      rep.fit(name + "_slope", name, 0.0, 0.0, 0.05);
    else
      rep.fit(name + "_slope", name, -2.0 * s, 0.10);
  }
  return out;
}

ExperimentOutput illposed(const RunConfig& rc) {
  std::vector<std::string> errs;
  BlockReader r(rc.block, errs);
  const auto ip = read_illposed(r);
  ExperimentOutput out{ExperimentReport("illposed-scan"), {}};
  auto& rep = out.report;

  const int top = *std::max_element(ip.n_list.begin(), ip.n_list.end());
  const SymbolTable table(rc.params, 2 * (top + ip.k0));
  auto scan = illposed_scan(ip.n_list, ip.k0, ip.s, ip.t, table);
  rep.inputs() = scan.inputs();
  rep.inputs()["oracle_n"] = ip.oracle_n;
  rep.inputs()["quad_intervals"] = ip.intervals;
  rep.absorb(scan, "");

  auto& gap = rep.series("oracle_gap_H1");
  for (int n : ip.oracle_n) {
    const SymbolTable tn(rc.params, 2 * (n + ip.k0));
    const auto d = illposed_data(n, ip.k0);
    const auto a = second_iterate_formula(d.field, ip.t, tn);
    const auto b = second_iterate_quadrature(d.field, ip.t, tn, Frame::standard, ip.intervals);
    const double g = sobolev_norm(a - b, 1.0);
    gap.points.push_back({double(n), g});
    rep.check(CheckRecord::at_most("oracle_gap_N" + std::to_string(n), g, 1e-8));
  }

  if (ip.remainder) {
    rep.inputs()["eps_list"] = ip.eps_list;
    rep.inputs()["remainder_n"] = ip.remainder_n;
    const SymbolTable tr(rc.params, 4 * (ip.remainder_n + ip.k0));
    SolveConfig cfg;
    cfg.dt = rc.dt;
    cfg.scheme = rc.scheme;
    try {
      rep.absorb(series_remainder_check(ip.eps_list, ip.remainder_n, ip.k0, ip.t, ip.s, cfg, tr),
                 "expansion.");
    } catch (const Error& e) {
      rep.error(std::string("series remainder: ") + e.what());
    }
  }
  return out;
}

ExperimentOutput inflate(const RunConfig& rc) {
  std::vector<std::string> errs;
  BlockReader r(rc.block, errs);
  const auto ic = read_inflate(r);
  ExperimentOutput out{ExperimentReport("inflate"), {}};
  const int top = *std::max_element(ic.k1_list.begin(), ic.k1_list.end());
  const SymbolTable table(rc.params, 4 * (top + 1));
  SolveConfig cfg;
  cfg.dt = rc.dt;
  cfg.scheme = rc.scheme;
  try {
    out.report = inflation_experiment(ic, cfg, table);
  } catch (const BlowUp& e) {
    out.report.error(std::string("blow-up: ") + e.what());
  }
  return out;
}

ExperimentOutput split(const RunConfig& rc) {
  std::vector<std::string> errs;
  BlockReader r(rc.block, errs);
  const auto sp = read_split(r, rc.n);
  ExperimentOutput out{ExperimentReport("split"), {}};
  const SymbolTable table(rc.params, rc.n);
  SolveConfig cfg;
  cfg.dt = rc.dt;
  cfg.scheme = rc.scheme;
  const auto eta0 = rough_field(rc.seed, 0, sp.s, rc.n);
  try {
    out.report = splitting_experiment(eta0, sp.s, sp.n_cuts, cfg, table);
  } catch (const BlowUp& e) {
    out.report.error(std::string("blow-up: ") + e.what());
  }
  out.report.inputs()["data"] = "rough_field: |f(k)| = <k>^{-(s+1/2)}/(1+log<k>), uniform phases";
  return out;
}

}  // namespace

ExperimentOutput run_experiment(const RunConfig& cfg) {
  ExperimentOutput out;
  try {
    switch (cfg.experiment) {
      case ExperimentKind::simulate: out = simulate(cfg, false); break;
      case ExperimentKind::energy_audit: out = simulate(cfg, true); break;
      case ExperimentKind::estimates: out = estimates(cfg); break;
      case ExperimentKind::illposed_scan: out = illposed(cfg); break;
      case ExperimentKind::inflate: out = inflate(cfg); break;
      case ExperimentKind::split: out = split(cfg); break;
    }
  } catch (const Error& e) {
    out.report = ExperimentReport(std::string(experiment_name(cfg.experiment)));
    out.report.error(e.what());
  }
  Json inputs = cfg.to_json();
  for (const auto& [k, v] : out.report.inputs().items()) inputs[k] = v;
  out.report.inputs() = inputs;
  return out;
}

std::string run_id(const RunConfig& cfg) {
  const std::string text = cfg.to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write '" + tmp.string() + "'");
    os << content;
    os.flush();
    if (!os) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

RunResult run(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec || !std::filesystem::is_directory(cfg.out))
    throw ConfigError({"out: cannot create directory '" + cfg.out.string() + "'"});

  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  auto output = run_experiment(cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  output.report.set_wall_seconds(wall);

  RunResult res{output.report, run_id(cfg), {}};
  auto put = [&](const std::string& name, const std::string& content) {
    const auto path = cfg.out / name;
    write_file_atomic(path, content);
    res.files.push_back(path);
  };
  std::ostringstream csv;
  output.report.write_series_csv(csv);
  put("series.csv", csv.str());
  if (output.trajectory) {
    std::ostringstream tcsv;
    output.trajectory->write_csv(tcsv);
    put("trajectory.csv", tcsv.str());
  }
  put("report.json", output.report.to_json().dump(2) + "\n");

  const std::time_t st = std::chrono::system_clock::to_time_t(started);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&st));
  Json m;
  m["run_id"] = res.run_id;
  m["experiment"] = experiment_name(cfg.experiment);
  m["preset"] = cfg.preset;
  m["params"] = params_json(cfg.params);
  Json prov = Json::array();
  for (const auto& [field, rule] : cfg.provenance) prov.push_back({field, rule});
  m["provenance"] = prov;
  m["config"] = cfg.to_json();
  Json files = Json::array();
  for (const auto& f : res.files) files.push_back(f.filename().string());
  files.push_back("manifest.json");
  m["files"] = files;
  m["passed"] = output.report.passed();
  m["started_utc"] = stamp;
  m["wall_seconds"] = wall;
  put("manifest.json", m.dump(2) + "\n");
  return res;
}

}  // namespace kdvbbm
