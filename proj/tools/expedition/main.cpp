// expedition: runs one experiment from a config file and writes its report.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "expedition/config.hpp"
#include "expedition/experiment.hpp"
#include "expedition/report.hpp"
#include "procgeo/error.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relational-matrix iterator, tree-likelihood maximizer and dimension fitter"};
  app.set_version_flag("--version", std::string(PROCGEO_VERSION));

  std::string mode_name;
  std::string config_path;
  std::string out_dir = ".";
  std::string format_name = "json";
  std::optional<std::uint64_t> seed;
  bool serial = false;

  app.add_option("mode", mode_name, "iterate | maximize | fit | sweep | emerge")
      ->required()
      ->check(CLI::IsMember({"iterate", "maximize", "fit", "sweep", "emerge"}));
  app.add_option("--config", config_path, "key = value experiment file")->required();
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "override the config seed");
  app.add_flag("--serial", serial, "single-threaded reference mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    auto config = expedition::load_config(config_path, expedition::parse_mode(mode_name));
    if (seed) config.seed = *seed;
    const auto format = expedition::parse_format(format_name);

    const auto report = expedition::run_experiment(config, {.parallel = !serial});
    const auto files = expedition::emit_report(report, format, out_dir);

    std::cout << "mode " << mode_name << " finished in " << report.wall_seconds << " s\n";
    if (report.maximize) {
      const auto& m = *report.maximize;
      std::cout << "L = " << m.optimizer.profile.depth() << ", log_prob = " << m.optimizer.log_prob;
      if (m.fit) std::cout << ", d = " << m.fit->d;
      std::cout << '\n';
      if (m.oracle_gap) std::cout << "oracle gap = " << *m.oracle_gap << '\n';
    }
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
    return kOk;
  } catch (const procgeo::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
