// Experiment front end: riesz <command> <action> --spec FILE --seed N ...
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "riesz/experiment.h"
#include "riesz/spec_file.h"

namespace {

struct Options {
  std::string action;
  std::string spec;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::optional<double> tol;
  std::optional<int> budget;
};

void AddCommand(CLI::App& app, const std::string& name,
                const std::vector<std::string>& actions, Options& opt) {
  CLI::App* sub = app.add_subcommand(name);
  sub->add_option("action", opt.action, "action")
      ->required()
      ->check(CLI::IsMember(actions));
  sub->add_option("--spec", opt.spec, "key = value spec file");
  sub->add_option("--seed", opt.seed, "64-bit seed");
  sub->add_option("--out", opt.out, "output directory");
  sub->add_option("--tol", opt.tol, "tolerance override");
  sub->add_option("--budget", opt.budget, "sample budget override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riesz characteristics, Garding operators and tangent flows"};
  app.require_subcommand(1);
  Options opt;
  AddCommand(app, "subeq", {"member", "riesz", "dual", "expand"}, opt);
  AddCommand(app, "garding", {"eig", "branch", "certify", "sigma"}, opt);
  AddCommand(app, "grass", {"invariant", "transitivity"}, opt);
  AddCommand(app, "flow", {"density", "tangent", "convex", "restrict"}, opt);
  AddCommand(app, "sphere", {"phi", "fdcheck", "member", "complex", "quaternion"},
             opt);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : riesz::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  try {
    std::string text;
    if (!opt.spec.empty()) {
      std::ifstream in(opt.spec);
      if (!in) throw riesz::ConfigError("cannot read spec file '" + opt.spec + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    riesz::ExperimentConfig config = riesz::ParseConfig(
        command, opt.action, text, opt.seed, opt.tol, opt.budget);
    config.spec_path = opt.spec;
    config.out_dir = opt.out;
    const riesz::RunReport report = riesz::Run(config);
    if (report.exit_code == riesz::kExitConfig) {
      std::cerr << "error: " << report.error << "\n";
      return riesz::kExitConfig;
    }
    for (const std::string& path : riesz::EmitTables(report, config)) {
      std::cout << path << "\n";
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::cerr << "wall time: " << secs << " s\n";
    return report.exit_code;
  } catch (const riesz::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return riesz::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return riesz::kExitConfig;
  }
}
