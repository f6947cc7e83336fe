#pragma once

#include <map>
#include <string>
#include <vector>

#include "homspec/scenario.hpp"

namespace homspec {

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
  int grid_points_override = 0;  // 0 keeps the scenario's grid.points
};

struct RunReport {
  std::string scenario_name;
  std::string task;
  std::vector<std::string> echo;          // scenario parameters actually used
  std::vector<std::string> output_files;  // absolute paths, all exist and are non-empty
  std::map<std::string, double> diagnostics;
  std::vector<std::string> notes;         // axis snapping, truncation warnings
  double wall_seconds = 0.0;
};

// Deltas achievable by the pairing quadrature: multiples of half the time-grid step.
// The requested axis is snapped deterministically; *note receives a description when
// the step changed.
std::vector<double> snapped_delay_axis(const TimeGrid& tg, const DelayAxisSpec& spec,
                                       std::string* note);

// Dispatches the scenario to its pipeline, writes CSVs, a plot script and report.txt
// into opt.out_dir, and verifies every listed output exists and is non-empty.
RunReport run_scenario(const Scenario& sc, const RunOptions& opt);

std::string render_report(const RunReport& report);

}
