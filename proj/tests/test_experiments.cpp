#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kdvbbm/errors.hpp"
#include "kdvbbm/experiments.hpp"
#include "kdvbbm/random.hpp"

using namespace kdvbbm;
namespace fs = std::filesystem;

namespace {

KeyValueDocument doc_from(const std::string& text) {
  std::istringstream in(text);
  return parse_key_value(in);
}

std::vector<std::string> violations_of(const std::string& text,
                                       std::optional<ExperimentKind> kind = std::nullopt,
                                       const RunOverrides& ov = {}) {
  try {
    resolve_run_config(doc_from(text), kind, ov);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("kdvbbm_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("experiment names round trip") {
  for (auto k : all_experiments()) CHECK(experiment_from_name(experiment_name(k)) == k);
  CHECK_THROWS_AS(experiment_from_name("simulation"), ConfigError);
}

TEST_CASE("defaults resolve per experiment") {
  const auto sim = resolve_run_config({}, ExperimentKind::simulate);
  CHECK(sim.preset == "hamiltonian");
  CHECK(sim.n == 64);
  CHECK(sim.dt == 1e-3);
  CHECK(sim.seed == 20240601ULL);
  const auto inf = resolve_run_config({}, ExperimentKind::inflate);
  CHECK(inf.preset == "inflation");
  CHECK(inf.dt == 1e-4);
  CHECK(inf.params.delta3 > 0.0);
  const auto sp = resolve_run_config({}, ExperimentKind::split);
  CHECK(sp.n == 512);
}

TEST_CASE("config file values and overrides") {
  const auto cfg = resolve_run_config(doc_from("experiment = energy-audit\n"
                                               "preset = inflation\n"
                                               "n = 96\ndt = 0.002\nseed = 7\n"
                                               "[experiment]\nt_final = 0.5\n"),
                                      std::nullopt, {std::nullopt, std::string("elsewhere"), 11});
  CHECK(cfg.experiment == ExperimentKind::energy_audit);
  CHECK(cfg.preset == "inflation");
  CHECK(cfg.n == 96);
  CHECK(cfg.dt == 0.002);
  CHECK(cfg.seed == 11);
  CHECK(cfg.out == fs::path("elsewhere"));
  CHECK(cfg.block.get("t_final") == std::optional<std::string>("0.5"));

  const auto explicit_params = resolve_run_config(
      doc_from("[params]\ngamma1 = 0.35\ndelta1 = 0.01\n"), ExperimentKind::simulate);
  CHECK(explicit_params.preset.empty());
  CHECK(explicit_params.params.gamma1 == 0.35);
  CHECK_FALSE(explicit_params.provenance.empty());
}

TEST_CASE("config validation is fail-closed and enumerates every violation") {
  const auto v = violations_of(
      "experiment = inflate\nbogus = 1\nn = -3\ndt = 0\nseed = x\nscheme = euler\n"
      "[params]\ngamma1 = 0.35\ndelta1 = 0.01\n"
      "[experiment]\nsigma = 0.9\nfoo = 2\n[extra]\nk = 1\n",
      ExperimentKind::simulate, {std::string("inflation"), std::nullopt, std::nullopt});
  CHECK(mentions(v, "bogus"));
  CHECK(mentions(v, "[extra]"));
  CHECK(mentions(v, "n:"));
  CHECK(mentions(v, "dt:"));
  CHECK(mentions(v, "seed:"));
  CHECK(mentions(v, "scheme:"));
  CHECK(mentions(v, "command is 'simulate'"));
  CHECK(mentions(v, "preset:"));
  CHECK(mentions(v, "experiment.sigma"));
  CHECK(mentions(v, "experiment.foo"));
  CHECK(v.size() >= 10);

  CHECK(mentions(violations_of("preset = nonesuch\n", ExperimentKind::simulate), "preset"));
  CHECK(mentions(violations_of("", std::nullopt), "experiment: missing"));
  CHECK(mentions(violations_of("[experiment]\nn_list = 8,x\n", ExperimentKind::illposed_scan),
                 "experiment.n_list"));
  CHECK(mentions(violations_of("[experiment]\ninitial = tan:1:1\n", ExperimentKind::simulate),
                 "experiment.initial"));
  CHECK(mentions(violations_of("[experiment]\ns = 1.5\n", ExperimentKind::illposed_scan),
                 "experiment.s"));
  CHECK(mentions(violations_of("n = 32\n[experiment]\nn_cuts = 8,16,64\n", ExperimentKind::split),
                 "experiment.n_cuts"));
  CHECK(mentions(violations_of("[experiment]\nfamilies = bilinear,nope\n", ExperimentKind::estimates),
                 "nope"));
  // keys of one experiment are unknown to another
  CHECK(mentions(violations_of("[experiment]\nk1_list = 16,32,64\n", ExperimentKind::simulate),
                 "experiment.k1_list"));
}

TEST_CASE("initial data specs") {
  const auto f = initial_from_spec("sin:1:1, cos:2:0.5", 8, 1);
  CHECK(f.max_mode() == 8);
  CHECK(std::abs(f[1] - Complex(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(f[2] - Complex(0.25, 0.0)) < 1e-15);
  CHECK(std::abs(f[3]) == 0.0);
  const auto x = to_physical(f, 64);
  const double pi = std::acos(-1.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double xj = 2 * pi * double(j) / double(x.size());
    CHECK(x[j] == doctest::Approx(std::sin(xj) + 0.5 * std::cos(2 * xj)).epsilon(1e-13));
  }
  CHECK(sobolev_norm(initial_from_spec("zero", 8, 1), 0.0) == 0.0);
  const auto r1 = initial_from_spec("random:4:1", 8, 5);
  const auto r2 = initial_from_spec("random:4:1", 8, 5);
  CHECK(sobolev_norm(r1 - r2, 0.0) == 0.0);
  CHECK(std::abs(r1[5]) == 0.0);
  CHECK_THROWS_AS(initial_from_spec("sin:9:1", 8, 1), RangeError);
  CHECK_THROWS_AS(initial_from_spec("sin:1", 8, 1), DomainError);
  CHECK_THROWS_AS(initial_from_spec("sin:1.5:1", 8, 1), DomainError);
}

TEST_CASE("fit_exponent examples") {
  std::vector<Point> square, flat, noisy;
  const CounterRng rng(3, 0);
  for (int k = 1; k <= 64; k *= 2) {
    square.push_back({double(k), double(k) * k});
    flat.push_back({double(k), 4.0});
    noisy.push_back({double(k), std::pow(k, 1.5) * (1.0 + 0.01 * (2.0 * rng.uniform(k) - 1.0))});
  }
  const auto a = fit_exponent(square);
  CHECK(a.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(a.stderr_slope < 1e-12);
  CHECK(std::abs(fit_exponent(flat).slope) < 1e-14);
  const auto c = fit_exponent(noisy);
  CHECK(c.slope >= 1.45);
  CHECK(c.slope <= 1.55);
  CHECK_THROWS_AS(fit_exponent(std::vector<Point>{{1, 1}, {2, 2}}), DomainError);
  CHECK_THROWS_AS(fit_exponent(std::vector<Point>{{1, 1}, {2, 0}, {3, 1}}), DomainError);
}

TEST_CASE("atomic writes leave no temporary behind") {
  const auto dir = scratch("atomic");
  fs::create_directories(dir);
  const auto path = dir / "a.txt";
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  CHECK(slurp(path) == "second\n");
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
  CHECK_THROWS(write_file_atomic(dir / "missing" / "b.txt", "x"));
  CHECK_FALSE(fs::exists(dir / "missing"));
  fs::remove_all(dir);
}

TEST_CASE("zero data simulate passes trivially") {
  auto cfg = resolve_run_config(doc_from("[experiment]\ninitial = zero\nt_final = 0.1\n"),
                                ExperimentKind::simulate);
  const auto out = run_experiment(cfg);
  REQUIRE(out.trajectory);
  CHECK(out.report.passed());
  for (double e : out.trajectory->energy()) CHECK(e == 0.0);
  for (const auto& row : out.trajectory->norms())
    for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("energy audit on the Hamiltonian preset") {
  const auto cfg = resolve_run_config({}, ExperimentKind::energy_audit);
  const auto out = run_experiment(cfg);
  CHECK(out.report.passed());
  const auto& notes = out.report.notes();
  CHECK(notes.at("max_relative_energy_drift").get<double>() <= 1e-8);
  // reports are self-describing
  const auto& in = out.report.inputs();
  CHECK(in.at("params").contains("delta3"));
  CHECK(in.at("params").contains("gamma3"));
}

TEST_CASE("runs are reproducible byte for byte") {
  const auto dir_a = scratch("run_a"), dir_b = scratch("run_b");
  const std::string text = "n = 32\n[experiment]\ninitial = random:6:0.5\nt_final = 0.2\n";
  auto cfg_a = resolve_run_config(doc_from(text), ExperimentKind::simulate,
                                  {std::nullopt, dir_a.string(), 99});
  auto cfg_b = resolve_run_config(doc_from(text), ExperimentKind::simulate,
                                  {std::nullopt, dir_b.string(), 99});
  const auto a = run(cfg_a);
  const auto b = run(cfg_b);
  CHECK(a.run_id == b.run_id);
  for (const char* name : {"series.csv", "trajectory.csv"}) {
    REQUIRE(fs::exists(dir_a / name));
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
  const auto manifest = Json::parse(slurp(dir_a / "manifest.json"));
  CHECK(manifest.at("run_id") == a.run_id);
  CHECK(manifest.at("passed") == a.report.passed());
  CHECK(manifest.at("params").contains("delta2"));
  const auto report = Json::parse(slurp(dir_a / "report.json"));
  CHECK(report.at("experiment") == "simulate");

  cfg_b.seed = 100;
  CHECK(run_id(cfg_b) != a.run_id);
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("report pass/fail is recomputable from stored numbers") {
  const auto cfg = resolve_run_config({}, ExperimentKind::inflate);
  const auto out = run_experiment(cfg);
  const auto j = out.report.to_json();
  for (const auto& f : j.at("fits")) {
    const auto* s = out.report.find_series(f.at("series").get<std::string>());
    REQUIRE(s);
    const double slope = fit_exponent(s->points).slope;
    CHECK(slope == f.at("slope").get<double>());
    const double expected = f.at("expected").get<double>();
    const bool pass = std::abs(slope - expected) <= f.at("rel_tolerance").get<double>() * std::abs(expected);
    CHECK(pass == f.at("passed").get<bool>());
  }
  for (const auto& c : j.at("checks")) {
    const double v = c.at("value").get<double>(), bnd = c.at("bound").get<double>();
    const auto rel = c.at("relation").get<std::string>();
    const bool pass = rel == "<=" ? v <= bnd : rel == ">=" ? v >= bnd : v >= bnd && v <= c.at("upper").get<double>();
    CHECK(pass == c.at("passed").get<bool>());
  }
}

TEST_CASE("experiment failures are recorded with partial output") {
  // an unstable explicit-step run: dt far too large for the Picard scheme
  auto cfg = resolve_run_config(
      doc_from("dt = 5\nscheme = picard\n[experiment]\ninitial = sin:1:3\nt_final = 200\n"),
      ExperimentKind::simulate);
  const auto out = run_experiment(cfg);
  CHECK_FALSE(out.report.passed());
  CHECK_FALSE(out.report.errors().empty());
  REQUIRE(out.trajectory);
  CHECK(out.trajectory->size() >= 1);
}
