#include "homspec/scenario.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace homspec {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream out;
  out << "scenario has " << issues.size() << (issues.size() == 1 ? " error" : " errors");
  for (const auto& issue : issues) {
    out << "\n  - " << issue;
  }
  return out.str();
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

struct RawEntry {
  std::string value;
  int line = 0;
};

// Typed access to the parsed key/value map; every read marks the key consumed so
// leftovers can be reported as unknown keys.
class KeyReader {
 public:
  KeyReader(std::map<std::string, RawEntry> entries, std::vector<std::string>& issues)
      : entries_(std::move(entries)), issues_(issues) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) {
    const RawEntry* e = take(key);
    return e ? e->value : fallback;
  }

  double get_double(const std::string& key, double fallback) {
    const RawEntry* e = take(key);
    if (!e) return fallback;
    errno = 0;
    char* end = nullptr;
    const double parsed = std::strtod(e->value.c_str(), &end);
    if (end == e->value.c_str() || *end != '\0' || errno == ERANGE ||
        !std::isfinite(parsed)) {
      issues_.push_back("key '" + key + "' (line " + std::to_string(e->line) +
                        "): '" + e->value + "' is not a finite number");
      return fallback;
    }
    return parsed;
  }

  int get_int(const std::string& key, int fallback) {
    const RawEntry* e = take(key);
    if (!e) return fallback;
    errno = 0;
    char* end = nullptr;
    const long parsed = std::strtol(e->value.c_str(), &end, 10);
    if (end == e->value.c_str() || *end != '\0' || errno == ERANGE ||
        parsed < -2147483647L || parsed > 2147483647L) {
      issues_.push_back("key '" + key + "' (line " + std::to_string(e->line) +
                        "): '" + e->value + "' is not an integer");
      return fallback;
    }
    return static_cast<int>(parsed);
  }

  bool get_bool(const std::string& key, bool fallback) {
    const RawEntry* e = take(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    issues_.push_back("key '" + key + "' (line " + std::to_string(e->line) +
                      "): expected true or false, got '" + e->value + "'");
    return fallback;
  }

  void reject_if_present(const std::string& key, const std::string& reason) {
    if (const RawEntry* e = take(key)) {
      issues_.push_back("key '" + key + "' (line " + std::to_string(e->line) + "): " +
                        reason);
    }
  }

  void report_unknown() {
    for (const auto& [key, entry] : entries_) {
      if (consumed_.count(key) == 0) {
        issues_.push_back("unknown key '" + key + "' (line " +
                          std::to_string(entry.line) + ")");
      }
    }
  }

 private:
  const RawEntry* take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    consumed_.insert(key);
    return &it->second;
  }

  std::map<std::string, RawEntry> entries_;
  std::set<std::string> consumed_;
  std::vector<std::string>& issues_;
};

void check(std::vector<std::string>& issues, bool ok, const std::string& message) {
  if (!ok) issues.push_back(message);
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names = {
      "chi3-scan",  "transmission", "hom-dip", "scan-2d",
      "schmidt",    "broadband-hom", "mzi",    "pulse-extent"};
  return names;
}

Scenario parse_scenario(const std::string& text, const std::string& fallback_name) {
  std::vector<std::string> issues;

  std::map<std::string, RawEntry> entries;
  {
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        issues.push_back("line " + std::to_string(line_no) + ": expected key = value");
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        issues.push_back("line " + std::to_string(line_no) + ": empty key");
        continue;
      }
      if (entries.count(key) != 0) {
        issues.push_back("duplicate key '" + key + "' (line " + std::to_string(line_no) +
                         ")");
        continue;
      }
      entries[key] = RawEntry{value, line_no};
    }
  }

  KeyReader reader(std::move(entries), issues);
  Scenario sc;

  sc.name = reader.get_string("name", fallback_name);

  sc.task = reader.get_string("task", "");
  if (sc.task.empty()) {
    issues.push_back("missing task");
  } else {
    const auto& names = task_names();
    if (std::find(names.begin(), names.end(), sc.task) == names.end()) {
      std::string known;
      for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
      issues.push_back("unknown task '" + sc.task + "'; known tasks: " + known);
    }
  }

  // Pair state. Keys of the other families are rejected so a typo cannot silently
  // fall back to a default.
  const std::string family = reader.get_string("biphoton.family", "gaussian");
  const double pump_frequency = reader.get_double("biphoton.pump_frequency_eV", 12.0);
  if (family == "gaussian") {
    GaussianBiphotonParams p;
    p.omega_p = pump_frequency;
    p.sigma_plus = reader.get_double("biphoton.sigma_plus_eV", 0.1);
    p.sigma_minus = reader.get_double("biphoton.sigma_minus_eV", 0.8);
    sc.biphoton.params = p;
    for (const char* key :
         {"biphoton.pump_bandwidth_eV", "biphoton.crystal_length",
          "biphoton.kprime_signal_eV_inv", "biphoton.kprime_idler_eV_inv",
          "biphoton.kprime_pump_eV_inv", "biphoton.entanglement_time_eV_inv"}) {
      reader.reject_if_present(key, "does not apply to family gaussian");
    }
  } else if (family == "sinc-pdc") {
    SincPdcParams p;
    p.omega_p = pump_frequency;
    p.sigma_p = reader.get_double("biphoton.pump_bandwidth_eV", 0.1);
    p.crystal_length = reader.get_double("biphoton.crystal_length", 1.0);
    p.kprime_a = reader.get_double("biphoton.kprime_signal_eV_inv", 5.0);
    p.kprime_b = reader.get_double("biphoton.kprime_idler_eV_inv", -5.0);
    p.kprime_p = reader.get_double("biphoton.kprime_pump_eV_inv", 0.0);
    sc.biphoton.params = p;
    for (const char* key : {"biphoton.sigma_plus_eV", "biphoton.sigma_minus_eV",
                            "biphoton.entanglement_time_eV_inv"}) {
      reader.reject_if_present(key, "does not apply to family sinc-pdc");
    }
  } else if (family == "narrowband-sinc") {
    NarrowbandSincParams p;
    p.omega_p = pump_frequency;
    p.t_ent = reader.get_double("biphoton.entanglement_time_eV_inv", 10.0);
    sc.biphoton.params = p;
    for (const char* key :
         {"biphoton.sigma_plus_eV", "biphoton.sigma_minus_eV",
          "biphoton.pump_bandwidth_eV", "biphoton.crystal_length",
          "biphoton.kprime_signal_eV_inv", "biphoton.kprime_idler_eV_inv",
          "biphoton.kprime_pump_eV_inv"}) {
      reader.reject_if_present(key, "does not apply to family narrowband-sinc");
    }
  } else {
    issues.push_back("biphoton.family must be gaussian, sinc-pdc or narrowband-sinc, got '" +
                     family + "'");
  }
  try {
    sc.biphoton.validate();
  } catch (const std::exception& e) {
    issues.push_back(std::string("biphoton: ") + e.what());
  }

  // Sample and drive.
  sc.matter_enabled = reader.get_bool("system.enabled", false);
  sc.arm.system.omega_e1g = reader.get_double("system.omega_e1g_eV", 3.0);
  sc.arm.system.omega_e2e1 = reader.get_double("system.omega_e2e1_eV", 2.0);
  sc.arm.system.omega_fe2 = reader.get_double("system.omega_fe2_eV", 1.0);
  sc.arm.system.gamma_e1g = reader.get_double("system.gamma_e1g_eV", 0.05);
  sc.arm.system.gamma_e2g = reader.get_double("system.gamma_e2g_eV", 0.05);
  sc.arm.system.gamma_fg = reader.get_double("system.gamma_fg_eV", 0.05);
  sc.arm.system.mu_e1g = reader.get_double("system.mu_e1g", 1.0);
  sc.arm.system.mu_e2e1 = reader.get_double("system.mu_e2e1", 1.0);
  sc.arm.system.mu_fe2 = reader.get_double("system.mu_fe2", 1.0);
  sc.arm.coupling_a0 = reader.get_double("system.coupling_a0", 2.5e-5);
  sc.arm.drive.omega1 = reader.get_double("drive.omega1_eV", sc.arm.system.omega_e1g);
  sc.arm.drive.omega2 = reader.get_double("drive.omega2_eV", sc.arm.system.omega_e2e1);
  try {
    sc.arm.validate();
  } catch (const std::exception& e) {
    issues.push_back(std::string("system: ") + e.what());
  }

  // Splitter; reflectance defaults to the complement so a lone transmittance stays
  // physical, while an explicit pair must satisfy T + R = 1.
  sc.splitter.transmittance = reader.get_double("bs.transmittance", 0.5);
  sc.splitter.reflectance =
      reader.get_double("bs.reflectance", 1.0 - sc.splitter.transmittance);
  try {
    sc.splitter.validate();
  } catch (const std::exception& e) {
    issues.push_back(std::string("bs: ") + e.what());
  }

  sc.scale.p0 = reader.get_double("scale.p0", 1.0);
  try {
    sc.scale.validate();
  } catch (const std::exception& e) {
    issues.push_back(std::string("scale: ") + e.what());
  }

  sc.grid_points = reader.get_int("grid.points", 8192);
  sc.grid_half_width = reader.get_double("grid.half_width_eV", 8.0);
  check(issues, sc.grid_points >= 16 && sc.grid_points <= (1 << 22),
        "grid.points must lie in [16, 4194304]");
  check(issues, sc.grid_half_width > 0.0, "grid.half_width_eV must be positive");

  sc.delay.min = reader.get_double("delay.min_eV_inv", -60.0);
  sc.delay.max = reader.get_double("delay.max_eV_inv", 60.0);
  sc.delay.step = reader.get_double("delay.step_eV_inv", 0.25);
  check(issues, sc.delay.min < sc.delay.max,
        "delay.min_eV_inv must be smaller than delay.max_eV_inv");
  check(issues, sc.delay.step > 0.0, "delay.step_eV_inv must be positive");

  sc.pump_min = reader.get_double("pump.min_eV", 10.0);
  sc.pump_max = reader.get_double("pump.max_eV", 14.0);
  sc.pump_count = reader.get_int("pump.count", 128);
  check(issues, sc.pump_min < sc.pump_max, "pump.min_eV must be smaller than pump.max_eV");
  check(issues, sc.pump_count >= 2, "pump.count must be at least 2");

  sc.schmidt_points = reader.get_int("schmidt.points", 256);
  sc.schmidt_half_width = reader.get_double("schmidt.half_width_eV", 0.0);
  sc.schmidt_truncation = reader.get_double("schmidt.truncation", 1e-8);
  check(issues, sc.schmidt_points >= 4 && sc.schmidt_points <= 4096,
        "schmidt.points must lie in [4, 4096]");
  check(issues, sc.schmidt_half_width >= 0.0,
        "schmidt.half_width_eV must be non-negative (0 = automatic)");
  check(issues, sc.schmidt_truncation >= 0.0 && sc.schmidt_truncation < 1.0,
        "schmidt.truncation must lie in [0, 1)");

  sc.probe_min = reader.get_double("probe.min_eV", 4.0);
  sc.probe_max = reader.get_double("probe.max_eV", 8.0);
  sc.probe_count = reader.get_int("probe.count", 2001);
  check(issues, sc.probe_min < sc.probe_max,
        "probe.min_eV must be smaller than probe.max_eV");
  check(issues, sc.probe_count >= 2, "probe.count must be at least 2");

  sc.mzi_center = reader.get_double("mzi.center_eV", 6.0);
  sc.mzi_sigma = reader.get_double("mzi.sigma_eV", 0.1);
  sc.mzi_phase = reader.get_double("mzi.phase_rad", 0.0);
  check(issues, sc.mzi_center > 0.0, "mzi.center_eV must be positive");
  check(issues, sc.mzi_sigma > 0.0, "mzi.sigma_eV must be positive");

  sc.broadband_time = reader.get_double("broadband.time_eV_inv", 0.0);
  sc.broadband_delay = reader.get_double("broadband.delay_eV_inv", 0.0);

  sc.pulse_wavelength_nm = reader.get_double("pulse.wavelength_nm", 1064.0);
  sc.pulse_duration_ps = reader.get_double("pulse.duration_ps", 2.0);
  check(issues, sc.pulse_wavelength_nm > 0.0, "pulse.wavelength_nm must be positive");
  check(issues, sc.pulse_duration_ps > 0.0, "pulse.duration_ps must be positive");

  // Cross-field requirements between the task and the rest of the configuration.
  if (sc.task == "schmidt" || sc.task == "broadband-hom") {
    if (std::holds_alternative<NarrowbandSincParams>(sc.biphoton.params)) {
      issues.push_back("task '" + sc.task +
                       "' needs a square-integrable pair amplitude; family "
                       "narrowband-sinc is a slice-only idealization");
    } else if (!std::holds_alternative<GaussianBiphotonParams>(sc.biphoton.params) &&
               sc.schmidt_half_width == 0.0) {
      issues.push_back(
          "schmidt.half_width_eV must be set explicitly for family sinc-pdc");
    }
  }
  if (sc.task == "mzi" && !sc.splitter.balanced(1e-12)) {
    issues.push_back("task 'mzi' needs balanced splitters (transmittance = reflectance)");
  }

  reader.report_unknown();

  if (!issues.empty()) {
    throw ScenarioError(std::move(issues));
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw ScenarioError({"cannot open scenario file: " + path});
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  const std::string stem = std::filesystem::path(path).stem().string();
  return parse_scenario(buffer.str(), stem.empty() ? "scenario" : stem);
}

}
