#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "homspec/beam_splitter.hpp"
#include "homspec/biphoton.hpp"
#include "homspec/hom_signal.hpp"

namespace homspec {

// All field-level problems found in a scenario file, one message per issue.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct DelayAxisSpec {
  double min = -60.0;   // eV^-1
  double max = 60.0;    // eV^-1
  double step = 0.25;   // eV^-1; snapped to the time grid at run time
};

// A fully validated run description. Every physics invariant enforced by the library
// types is already checked here, so the pipelines never see invalid data.
struct Scenario {
  std::string name;
  std::string task;

  BiphotonAmplitude biphoton;

  bool matter_enabled = false;
  SampleArm arm;  // meaningful only when matter_enabled

  BeamSplitter splitter;
  SignalScale scale;

  int grid_points = 8192;
  double grid_half_width = 8.0;  // eV, detuning axis

  DelayAxisSpec delay;

  double pump_min = 10.0;  // eV
  double pump_max = 14.0;  // eV
  int pump_count = 128;

  int schmidt_points = 256;
  double schmidt_half_width = 0.0;  // eV; 0 = automatic from the pair bandwidths
  double schmidt_truncation = 1e-8;

  double probe_min = 4.0;  // eV
  double probe_max = 8.0;  // eV
  int probe_count = 2001;

  double mzi_center = 6.0;  // eV
  double mzi_sigma = 0.1;   // eV
  double mzi_phase = 0.0;   // rad, flat reference-arm phase

  double broadband_time = 0.0;   // eV^-1, detection time t
  double broadband_delay = 0.0;  // eV^-1, splitter delay

  double pulse_wavelength_nm = 1064.0;
  double pulse_duration_ps = 2.0;
};

// The documented task list, in display order.
const std::vector<std::string>& task_names();

// Parses and validates the documented flat key = value format. Throws ScenarioError
// carrying every problem found: unknown keys, duplicates, malformed numbers, missing
// task, and violated invariants.
Scenario parse_scenario(const std::string& text, const std::string& fallback_name);

// Reads the file and parses it; the scenario name defaults to the file stem.
Scenario load_scenario(const std::string& path);

}
