#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "homspec/runner.hpp"
#include "homspec/scenario.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_validation = 2;

void print_scenario_error(const homspec::ScenarioError& err) {
  std::fprintf(stderr, "scenario validation failed:\n");
  for (const auto& issue : err.issues()) {
    std::fprintf(stderr, "  - %s\n", issue.c_str());
  }
}

const char* task_summary(const std::string& task) {
  if (task == "chi3-scan") return "third-order response vs photon frequency and time";
  if (task == "transmission") return "thin-sample transmission spectrum";
  if (task == "hom-dip") return "integrated coincidence vs splitter delay";
  if (task == "scan-2d") return "coincidence map over delay and pump frequency";
  if (task == "schmidt") return "mode decomposition of the pair amplitude";
  if (task == "broadband-hom") return "time-resolved coincidence from the mode expansion";
  if (task == "mzi") return "single-photon interferometer scan through the sample";
  if (task == "pulse-extent") return "spatial extent of the pump pulse";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entangled-photon interferometric spectroscopy simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  homspec::RunOptions options;

  CLI::App* run = app.add_subcommand("run", "execute a scenario file");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", options.out_dir, "output directory (default: .)");
  run->add_option("--threads", options.threads, "worker threads for column scans")
      ->check(CLI::PositiveNumber);
  run->add_option("--grid-points", options.grid_points_override,
                  "override grid.points from the scenario")
      ->check(CLI::PositiveNumber);

  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("scenario", scenario_path, "scenario file")->required();

  CLI::App* list_tasks = app.add_subcommand("list-tasks", "show the available tasks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_validation;
  }

  if (list_tasks->parsed()) {
    for (const auto& task : homspec::task_names()) {
      std::printf("%-14s %s\n", task.c_str(), task_summary(task));
    }
    return exit_ok;
  }

  if (validate->parsed()) {
    try {
      const homspec::Scenario sc = homspec::load_scenario(scenario_path);
      std::printf("scenario '%s' is valid (task %s)\n", sc.name.c_str(), sc.task.c_str());
      return exit_ok;
    } catch (const homspec::ScenarioError& e) {
      print_scenario_error(e);
      return exit_validation;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return exit_runtime;
    }
  }

  if (run->parsed()) {
    try {
      const homspec::Scenario sc = homspec::load_scenario(scenario_path);
      const homspec::RunReport report = homspec::run_scenario(sc, options);
      std::fputs(homspec::render_report(report).c_str(), stdout);
      return exit_ok;
    } catch (const homspec::ScenarioError& e) {
      print_scenario_error(e);
      return exit_validation;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return exit_runtime;
    }
  }

  return exit_validation;
}
