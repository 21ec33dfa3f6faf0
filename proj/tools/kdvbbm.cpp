#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kdvbbm/errors.hpp"
#include "kdvbbm/experiments.hpp"
#include "kdvbbm/keyvalue.hpp"
#include "kdvbbm/model.hpp"

using namespace kdvbbm;

namespace {

void print_summary(const RunResult& res) {
  const auto& rep = res.report;
  for (const auto& f : rep.fits())
    std::cout << (f.passed() ? "PASS " : "FAIL ") << f.name << ": slope " << f.fit.slope
              << " (expected " << f.expected << ")\n";
  for (const auto& c : rep.checks())
    std::cout << (c.passed() ? "PASS " : "FAIL ") << c.name << ": " << c.value << "\n";
  for (const auto& e : rep.errors()) std::cout << "ERROR " << e << "\n";
  std::cout << "run " << res.run_id << " (" << rep.wall_seconds() << " s)\n";
  for (const auto& f : res.files) std::cout << "  " << f.string() << "\n";
  std::cout << (rep.passed() ? "passed" : "failed") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver and experiments for the regularized KdV-BBM model"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out, preset;
  std::optional<std::uint64_t> seed;
  const auto names = preset_names();
  std::string chosen;

  for (auto kind : all_experiments()) {
    const std::string name(experiment_name(kind));
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--preset", preset, "parameter preset")
        ->check(CLI::IsMember(std::vector<std::string>(names.begin(), names.end())));
    sub->callback([&chosen, name] { chosen = name; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    KeyValueDocument doc;
    if (!config.empty()) doc = parse_key_value_file(config);
    const auto cfg = resolve_run_config(doc, experiment_from_name(chosen), {preset, out, seed});
    const auto res = run(cfg);
    print_summary(res);
    return res.report.passed() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
