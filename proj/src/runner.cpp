#include "homspec/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <variant>

#include "homspec/csv.hpp"
#include "homspec/fourier.hpp"
#include "homspec/mach_zehnder.hpp"
#include "homspec/schmidt.hpp"
#include "homspec/units.hpp"

namespace homspec {

namespace {

std::string fmt(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.10g", v);
  return buffer;
}

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) /
                                                static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> plain_delay_axis(const DelayAxisSpec& spec) {
  const int n = static_cast<int>(std::floor((spec.max - spec.min) / spec.step + 1e-9)) + 1;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = spec.min + spec.step * static_cast<double>(i);
  }
  return out;
}

// Registers a file in the report and returns its absolute path.
std::string claim_output(const std::filesystem::path& dir, const std::string& name,
                         RunReport& rep) {
  const std::string path = (dir / name).string();
  rep.output_files.push_back(path);
  return path;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

void write_plot_script(const std::string& path, const Scenario& sc, const std::string& body) {
  std::ostringstream py;
  py << "#!/usr/bin/env python3\n"
     << "\"\"\"Plots for scenario '" << sc.name << "' (task " << sc.task << ").\"\"\"\n"
     << "from pathlib import Path\n\n"
     << "import matplotlib\n"
     << "matplotlib.use(\"Agg\")\n"
     << "import matplotlib.pyplot as plt\n"
     << "import numpy as np\n\n"
     << "HERE = Path(__file__).resolve().parent\n\n"
     << body << "\n"
     << "plt.savefig(OUT, dpi=150)\n"
     << "print(\"wrote\", OUT)\n";
  write_text_file(path, py.str());
}

std::vector<std::string> scenario_echo(const Scenario& sc) {
  std::vector<std::string> echo;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GaussianBiphotonParams>) {
          echo.push_back("biphoton: gaussian, pump " + fmt(p.omega_p) + " eV, sigma_plus " +
                         fmt(p.sigma_plus) + " eV, sigma_minus " + fmt(p.sigma_minus) +
                         " eV");
        } else if constexpr (std::is_same_v<T, SincPdcParams>) {
          echo.push_back("biphoton: sinc-pdc, pump " + fmt(p.omega_p) +
                         " eV, pump bandwidth " + fmt(p.sigma_p) +
                         " eV, entanglement time " + fmt(p.entanglement_time()) +
                         " eV^-1");
        } else {
          echo.push_back("biphoton: narrowband-sinc, pump " + fmt(p.omega_p) +
                         " eV, entanglement time " + fmt(p.t_ent) + " eV^-1");
        }
      },
      sc.biphoton.params);
  if (sc.matter_enabled) {
    echo.push_back("sample: enabled, coupling a0 " + fmt(sc.arm.coupling_a0) +
                   ", ladder " + fmt(sc.arm.system.omega_e1g) + "/" +
                   fmt(sc.arm.system.omega_e2e1) + "/" + fmt(sc.arm.system.omega_fe2) +
                   " eV, gamma_fg " + fmt(sc.arm.system.gamma_fg) + " eV, drive " +
                   fmt(sc.arm.drive.omega1) + "/" + fmt(sc.arm.drive.omega2) + " eV");
  } else {
    echo.push_back("sample: disabled");
  }
  echo.push_back("splitter: transmittance " + fmt(sc.splitter.transmittance) +
                 ", reflectance " + fmt(sc.splitter.reflectance));
  echo.push_back("scale: p0 " + fmt(sc.scale.p0));
  echo.push_back("grid: " + std::to_string(sc.grid_points) + " points, half width " +
                 fmt(sc.grid_half_width) + " eV");
  return echo;
}

void note_warnings(RunReport& rep, bool edge, bool aliasing) {
  if (edge) {
    rep.notes.push_back(
        "time window truncates the pair wavepacket; widen grid.half_width_eV or "
        "increase grid.points");
  }
  if (aliasing) {
    rep.notes.push_back(
        "spectral content near the grid edge; widen grid.half_width_eV");
  }
}

std::optional<SampleArm> active_arm(const Scenario& sc) {
  if (sc.matter_enabled) return sc.arm;
  return std::nullopt;
}

FrequencyGrid schmidt_axis(const Scenario& sc) {
  double hw = sc.schmidt_half_width;
  if (hw == 0.0) {
    const auto* g = std::get_if<GaussianBiphotonParams>(&sc.biphoton.params);
    if (g == nullptr) {
      throw std::invalid_argument(
          "schmidt.half_width_eV must be set explicitly for this pair family");
    }
    hw = 5.0 * std::max(2.0 * g->sigma_plus, g->sigma_minus);
  }
  return FrequencyGrid{0.5 * sc.biphoton.omega_p(), hw, sc.schmidt_points};
}

// Least-squares exponential decay rate of |signal| over positive times, using samples
// above 1e-10 of the peak.
double fitted_decay_rate(const TimeSignal& signal) {
  const double peak = signal.values.cwiseAbs().maxCoeff();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long count = 0;
  for (int j = 0; j < signal.grid.n_points; ++j) {
    const double tau = signal.grid.point(j);
    const double mag = std::abs(signal.values[j]);
    if (tau <= 0.0 || mag < 1e-10 * peak) continue;
    const double y = std::log(mag);
    sx += tau;
    sy += y;
    sxx += tau * tau;
    sxy += tau * y;
    ++count;
  }
  if (count < 2) {
    throw std::runtime_error("too few samples to fit a decay rate");
  }
  const double denom = static_cast<double>(count) * sxx - sx * sx;
  return -(static_cast<double>(count) * sxy - sx * sy) / denom;
}

void run_pulse_extent(const Scenario& sc, const std::filesystem::path& dir, RunReport& rep) {
  const double extent = units::pulse_extent_um(sc.pulse_wavelength_nm, sc.pulse_duration_ps);
  rep.diagnostics["pulse_extent_um"] = extent;
  Eigen::VectorXd wl(1), dur(1), ext(1);
  wl << sc.pulse_wavelength_nm;
  dur << sc.pulse_duration_ps;
  ext << extent;
  export_csv(claim_output(dir, "pulse_extent.csv", rep),
             {"scenario: " + sc.name, "pump pulse spatial extent c * duration"},
             {"wavelength_nm", "duration_ps", "extent_um"}, {wl, dur, ext});
  write_plot_script(claim_output(dir, "plot.py", rep), sc,
                    "data = np.loadtxt(HERE / \"pulse_extent.csv\", delimiter=\",\", ndmin=2)\n"
                    "fig, ax = plt.subplots(figsize=(4, 4))\n"
                    "ax.bar([\"extent\"], [data[0, 2]])\n"
                    "ax.set_ylabel(\"pulse extent (um)\")\n"
                    "ax.set_title(\"pump pulse spatial extent\")\n"
                    "OUT = HERE / \"pulse_extent.png\"\n");
}

void run_chi3_scan(const Scenario& sc, const std::filesystem::path& dir, RunReport& rep) {
  const FourLevelSystem& sys = sc.arm.system;
  const ClassicalDrive& drive = sc.arm.drive;

  const FrequencyGrid probe{0.5 * (sc.probe_min + sc.probe_max),
                            0.5 * (sc.probe_max - sc.probe_min), sc.probe_count};
  Eigen::VectorXd omega(probe.n_points), re(probe.n_points), im(probe.n_points),
      mag(probe.n_points);
  double peak = 0.0;
  double peak_omega = probe.point(0);
  for (int k = 0; k < probe.n_points; ++k) {
    const double w = probe.point(k);
    const std::complex<double> chi = chi3_photon(sys, drive, w);
    omega[k] = w;
    re[k] = chi.real();
    im[k] = chi.imag();
    mag[k] = std::abs(chi);
    if (mag[k] > peak) {
      peak = mag[k];
      peak_omega = w;
    }
  }
  export_csv(claim_output(dir, "chi3_frequency.csv", rep),
             {"scenario: " + sc.name,
              "third-order response to the photon frequency, classical drives folded in"},
             {"omega_eV", "chi3_re", "chi3_im", "chi3_abs"}, {omega, re, im, mag});
  rep.diagnostics["chi3_peak_abs"] = peak;
  rep.diagnostics["chi3_peak_omega_eV"] = peak_omega;

  const TimeGrid tg{20.0 / sys.gamma_fg, sc.grid_points};
  const TimeSignal chi_t = chi3_time(sys, drive, tg, 0.0);
  Eigen::VectorXd tau(tg.n_points), tre(tg.n_points), tim(tg.n_points), tmag(tg.n_points);
  double tpeak = 0.0;
  double neg_peak = 0.0;
  for (int j = 0; j < tg.n_points; ++j) {
    tau[j] = tg.point(j);
    tre[j] = chi_t.values[j].real();
    tim[j] = chi_t.values[j].imag();
    tmag[j] = std::abs(chi_t.values[j]);
    tpeak = std::max(tpeak, tmag[j]);
    if (tau[j] < 0.0) neg_peak = std::max(neg_peak, tmag[j]);
  }
  export_csv(claim_output(dir, "chi3_time.csv", rep),
             {"scenario: " + sc.name, "time-domain third-order response"},
             {"tau_eV_inv", "chi3_re", "chi3_im", "chi3_abs"}, {tau, tre, tim, tmag});
  rep.diagnostics["chi3_causality_leak"] = tpeak > 0.0 ? neg_peak / tpeak : 0.0;
  rep.diagnostics["chi3_fitted_decay_eV"] = fitted_decay_rate(chi_t);
  if (chi_t.aliasing_warning) {
    rep.notes.push_back("time grid under-resolves the response; increase grid.points");
  }

  write_plot_script(claim_output(dir, "plot.py", rep), sc,
                    "freq = np.loadtxt(HERE / \"chi3_frequency.csv\", delimiter=\",\")\n"
                    "time = np.loadtxt(HERE / \"chi3_time.csv\", delimiter=\",\")\n"
                    "fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))\n"
                    "ax1.plot(freq[:, 0], freq[:, 3])\n"
                    "ax1.set_xlabel(\"omega (eV)\")\n"
                    "ax1.set_ylabel(\"|chi3|\")\n"
                    "ax2.plot(time[:, 0], time[:, 3])\n"
                    "ax2.set_xlabel(\"tau (1/eV)\")\n"
                    "ax2.set_ylabel(\"|chi3(tau)|\")\n"
                    "fig.tight_layout()\n"
                    "OUT = HERE / \"chi3_scan.png\"\n");
}

void run_transmission(const Scenario& sc, const std::filesystem::path& dir, RunReport& rep) {
  const FrequencyGrid probe{0.5 * (sc.probe_min + sc.probe_max),
                            0.5 * (sc.probe_max - sc.probe_min), sc.probe_count};
  Eigen::VectorXd omega(probe.n_points), re(probe.n_points), im(probe.n_points),
      power(probe.n_points);
  double min_power = 1.0;
  double min_omega = probe.point(0);
  for (int k = 0; k < probe.n_points; ++k) {
    const double w = probe.point(k);
    const std::complex<double> t =
        transmission(sc.arm.system, sc.arm.drive, w, sc.arm.coupling_a0);
    omega[k] = w;
    re[k] = t.real();
    im[k] = t.imag();
    power[k] = std::norm(t);
    if (power[k] < min_power) {
      min_power = power[k];
      min_omega = w;
    }
  }
  export_csv(claim_output(dir, "transmission.csv", rep),
             {"scenario: " + sc.name, "thin-sample transmission 1 - i a0 chi3(omega)"},
             {"omega_eV", "t_re", "t_im", "t_abs2"}, {omega, re, im, power});
  rep.diagnostics["transmission_min_abs2"] = min_power;
  rep.diagnostics["transmission_min_omega_eV"] = min_omega;

  write_plot_script(claim_output(dir, "plot.py", rep), sc,
                    "data = np.loadtxt(HERE / \"transmission.csv\", delimiter=\",\")\n"
                    "fig, ax = plt.subplots(figsize=(6, 4))\n"
                    "ax.plot(data[:, 0], data[:, 3])\n"
                    "ax.set_xlabel(\"omega (eV)\")\n"
                    "ax.set_ylabel(\"|T(omega)|^2\")\n"
                    "OUT = HERE / \"transmission.png\"\n");
}

void run_hom_dip(const Scenario& sc, const std::filesystem::path& dir, RunReport& rep) {
  const FrequencyGrid fg{0.0, sc.grid_half_width, sc.grid_points};
  const TimeGrid tg = conjugate_time_grid(fg);
  std::string note;
  const std::vector<double> deltas = snapped_delay_axis(tg, sc.delay, &note);
  if (!note.empty()) rep.notes.push_back(note);

  const HomScan scan =
      scan_delta(active_arm(sc), sc.biphoton, tg, sc.splitter, deltas, sc.scale);
  const Eigen::VectorXd normalized = scan.values / scan.n0;
  export_csv(claim_output(dir, "hom_dip.csv", rep),
             {"scenario: " + sc.name, "integrated coincidence vs splitter delay",
              "n0 = " + format_value(scan.n0)},
             {"delta_eV_inv", "coincidence", "coincidence_over_n0"},
             {to_vec(deltas), scan.values, normalized});

  rep.diagnostics["n0"] = scan.n0;
  rep.diagnostics["dip_visibility"] = dip_visibility(scan);
  rep.diagnostics["asymmetry"] = asymmetry_metric(scan);
  rep.diagnostics["min_coincidence"] = scan.values.minCoeff();
  note_warnings(rep, scan.edge_warning, scan.aliasing_warning);

  write_plot_script(claim_output(dir, "plot.py", rep), sc,
                    "data = np.loadtxt(HERE / \"hom_dip.csv\", delimiter=\",\")\n"
                    "fig, ax = plt.subplots(figsize=(6, 4))\n"
                    "ax.plot(data[:, 0], data[:, 2])\n"
                    "ax.set_xlabel(\"delay (1/eV)\")\n"
                    "ax.set_ylabel(\"P / n0\")\n"
                    "ax.set_title(\"coincidence dip\")\n"
                    "OUT = HERE / \"hom_dip.png\"\n");
}

void run_scan_2d(const Scenario& sc, const RunOptions& opt,
                 const std::filesystem::path& dir, RunReport& rep) {
  const FrequencyGrid fg{0.0, sc.grid_half_width, sc.grid_points};
  const TimeGrid tg = conjugate_time_grid(fg);
  std::string note;
  const std::vector<double> deltas = snapped_delay_axis(tg, sc.delay, &note);
  if (!note.empty()) rep.notes.push_back(note);
  const std::vector<double> pumps = linspace(sc.pump_min, sc.pump_max, sc.pump_count);

  const CoincidenceMap map = scan_2d(active_arm(sc), sc.biphoton, tg, sc.splitter, deltas,
                                     pumps, sc.scale, opt.threads);
  // The pump-slice of every shipped pair family is carrier-independent, so one bare
  // scan serves as the reference for all columns.
  const HomScan bare = scan_delta(std::nullopt, sc.biphoton, tg, sc.splitter, deltas, sc.scale);

  const auto n_rows = static_cast<Eigen::Index>(deltas.size());
  const auto n_cols = static_cast<Eigen::Index>(pumps.size());
  Eigen::VectorXd flat_delta(n_rows * n_cols), flat_pump(n_rows * n_cols),
      flat_value(n_rows * n_cols), flat_norm(n_rows * n_cols);
  for (Eigen::Index col = 0; col < n_cols; ++col) {
    for (Eigen::Index row = 0; row < n_rows; ++row) {
      const Eigen::Index k = col * n_rows + row;
      flat_delta[k] = deltas[static_cast<std::size_t>(row)];
      flat_pump[k] = pumps[static_cast<std::size_t>(col)];
      flat_value[k] = map.values(row, col);
      flat_norm[k] = map.values(row, col) / map.n0[col];
    }
  }
  export_csv(claim_output(dir, "coincidence_map.csv", rep),
             {"scenario: " + sc.name,
              "integrated coincidence vs splitter delay and pump frequency (long format)",
              "rows ordered pump-major: " + std::to_string(pumps.size()) + " blocks of " +
                  std::to_string(deltas.size()) + " delays"},
             {"delta_eV_inv", "omega_p_eV", "coincidence", "coincidence_over_n0"},
             {flat_delta, flat_pump, flat_value, flat_norm});
  export_csv(claim_output(dir, "bare_dip.csv", rep),
             {"scenario: " + sc.name, "reference delay scan without the sample",
              "n0 = " + format_value(bare.n0)},
             {"delta_eV_inv", "coincidence", "coincidence_over_n0"},
             {to_vec(deltas), bare.values, bare.values / bare.n0});

  rep.diagnostics["n0_center_column"] = map.n0[n_cols / 2];
  if (sc.matter_enabled) {
    const FeatureDiagnostics feature = analyze_feature(map, bare);
    rep.diagnostics["feature_center_omega_p_eV"] = feature.center;
    rep.diagnostics["feature_fwhm_delta_eV_inv"] = feature.fwhm_delta;
    rep.diagnostics["feature_strength"] = feature.strength;
  }
  note_warnings(rep, map.edge_warning, map.aliasing_warning);

  std::ostringstream body;
  body << "data = np.loadtxt(HERE / \"coincidence_map.csv\", delimiter=\",\")\n"
       << "bare = np.loadtxt(HERE / \"bare_dip.csv\", delimiter=\",\")\n"
       << "n_pump, n_delta = " << pumps.size() << ", " << deltas.size() << "\n"
       << "delta = data[:n_delta, 0]\n"
       << "pump = data[::n_delta, 1]\n"
       << "norm = data[:, 3].reshape(n_pump, n_delta)\n"
       << "signal = np.abs(norm - bare[:, 2][None, :])\n"
       << "fig, ax = plt.subplots(figsize=(7, 5))\n"
       << "mesh = ax.pcolormesh(delta, pump, signal, shading=\"auto\")\n"
       << "fig.colorbar(mesh, ax=ax, label=\"|P/n0 - bare|\")\n"
       << "ax.set_xlabel(\"delay (1/eV)\")\n"
       << "ax.set_ylabel(\"pump frequency (eV)\")\n"
       << "ax.set_title(\"sample-induced modulation\")\n"
       << "OUT = HERE / \"coincidence_map.png\"\n";
  write_plot_script(claim_output(dir, "plot.py", rep), sc, body.str());
}

void run_schmidt(const Scenario& sc, const std::filesystem::path& dir, RunReport& rep) {
  const FrequencyGrid axis = schmidt_axis(sc);
  const SampledAmplitude phi = sample_biphoton(sc.biphoton, axis);
  const SchmidtDecomposition d = schmidt_decompose(phi, sc.schmidt_truncation);

  rep.diagnostics["schmidt_number_K"] = schmidt_number(d);
  rep.diagnostics["mode_count"] = static_cast<double>(d.rank());
  rep.diagnostics["weight_sum"] = d.weights.sum();
  rep.diagnostics["reconstruction_residual_weight"] = d.reconstruction_error;
  rep.echo.push_back("schmidt axis: " + std::to_string(axis.n_points) +
                     " points, center " + fmt(axis.center) + " eV, half width " +
                     fmt(axis.half_width) + " eV");

  Eigen::VectorXd index(d.rank()), weight(d.rank());
  for (int n = 0; n < d.rank(); ++n) {
    index[n] = static_cast<double>(n);
    weight[n] = d.weights[n];
  }
  export_csv(claim_output(dir, "schmidt_weights.csv", rep),
             {"scenario: " + sc.name, "mode weights, descending; sum = 1"},
             {"mode_index", "weight"}, {index, weight});

  const int n_show = std::min(d.rank(), 8);
  const Eigen::Index rows = static_cast<Eigen::Index>(n_show) * axis.n_points;
  Eigen::VectorXd mode_col(rows), omega_col(rows), are(rows), aim(rows), bre(rows),
      bim(rows);
  for (int n = 0; n < n_show; ++n) {
    for (int k = 0; k < axis.n_points; ++k) {
      const Eigen::Index r = static_cast<Eigen::Index>(n) * axis.n_points + k;
      mode_col[r] = static_cast<double>(n);
      omega_col[r] = axis.point(k);
      are[r] = d.modes_a(k, n).real();
      aim[r] = d.modes_a(k, n).imag();
      bre[r] = d.modes_b(k, n).real();
      bim[r] = d.modes_b(k, n).imag();
    }
  }
  export_csv(claim_output(dir, "schmidt_modes.csv", rep),
             {"scenario: " + sc.name,
              "first " + std::to_string(n_show) + " mode pairs (long format)"},
             {"mode_index", "omega_eV", "mode_a_re", "mode_a_im", "mode_b_re", "mode_b_im"},
             {mode_col, omega_col, are, aim, bre, bim});

  std::ostringstream body;
  body << "weights = np.loadtxt(HERE / \"schmidt_weights.csv\", delimiter=\",\", ndmin=2)\n"
       << "modes = np.loadtxt(HERE / \"schmidt_modes.csv\", delimiter=\",\")\n"
       << "fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))\n"
       << "ax1.bar(weights[:, 0], weights[:, 1])\n"
       << "ax1.set_xlabel(\"mode index\")\n"
       << "ax1.set_ylabel(\"weight\")\n"
       << "ax1.set_yscale(\"log\")\n"
       << "n_points = " << axis.n_points << "\n"
       << "for n in range(min(4, len(weights))):\n"
       << "    block = modes[n * n_points:(n + 1) * n_points, :]\n"
       << "    ax2.plot(block[:, 1], np.hypot(block[:, 2], block[:, 3]), label=f\"mode {n}\")\n"
       << "ax2.set_xlabel(\"omega (eV)\")\n"
       << "ax2.set_ylabel(\"|mode|\")\n"
       << "ax2.legend()\n"
       << "fig.tight_layout()\n"
       << "OUT = HERE / \"schmidt.png\"\n";
  write_plot_script(claim_output(dir, "plot.py", rep), sc, body.str());
}

void run_broadband_hom(const Scenario& sc, const std::filesystem::path& dir, RunReport& rep) {
  const FrequencyGrid axis = schmidt_axis(sc);
  const SampledAmplitude phi = sample_biphoton(sc.biphoton, axis);
  SchmidtDecomposition d = schmidt_decompose(phi, sc.schmidt_truncation);
  rep.diagnostics["schmidt_number_K"] = schmidt_number(d);
  rep.echo.push_back("schmidt axis: " + std::to_string(axis.n_points) +
                     " points, center " + fmt(axis.center) + " eV, half width " +
                     fmt(axis.half_width) + " eV");

  // The sample acts on the arm-a modes multiplicatively in the frequency domain.
  if (sc.matter_enabled) {
    for (int n = 0; n < d.rank(); ++n) {
      for (int k = 0; k < axis.n_points; ++k) {
        d.modes_a(k, n) *= transmission(sc.arm.system, sc.arm.drive, axis.point(k),
                                        sc.arm.coupling_a0);
      }
    }
  }
  const BroadbandCoincidence evaluator(d, nullptr);
  const TimeGrid& tg = evaluator.grid();
  const double dt = tg.spacing();

  const int i_t = static_cast<int>(std::clamp(
      std::round((sc.broadband_time - tg.min()) / dt), 0.0,
      static_cast<double>(tg.n_points - 1)));
  const double t_used = tg.point(i_t);
  const long d_units = std::lround(sc.broadband_delay / dt);
  const double delta_used = static_cast<double>(d_units) * dt;
  if (std::abs(t_used - sc.broadband_time) > 1e-9 ||
      std::abs(delta_used - sc.broadband_delay) > 1e-9) {
    rep.notes.push_back("detection time / delay snapped to the mode time grid: t = " +
                        fmt(t_used) + ", delay = " + fmt(delta_used) + " eV^-1 (step " +
                        fmt(dt) + ")");
  }
  const int i_shift = i_t + static_cast<int>(d_units);
  if (i_shift < 0 || i_shift >= tg.n_points) {
    throw std::invalid_argument("broadband.delay_eV_inv pushes t + delay off the grid");
  }

  const long k_lo = std::max<long>(-i_t, d_units - i_t);
  const long k_hi = std::min<long>(tg.n_points - 1 - i_t,
                                   tg.n_points - 1 - i_t + d_units);
  std::vector<double> taus;
  std::vector<double> values;
  const BeamSplitter bs = sc.splitter.with_delay(delta_used);
  for (long k = k_lo; k <= k_hi; ++k) {
    const double tau = static_cast<double>(k) * dt;
    if (tau < sc.delay.min || tau > sc.delay.max) continue;
    taus.push_back(tau);
    values.push_back(evaluator(bs, sc.scale, t_used, tau));
  }
  if (taus.empty()) {
    throw std::invalid_argument(
        "no detection separations fall inside the delay window; widen delay.min/max");
  }
  export_csv(claim_output(dir, "broadband_hom.csv", rep),
             {"scenario: " + sc.name,
              "time-resolved coincidence vs detection separation; t = " + fmt(t_used) +
                  " eV^-1, splitter delay = " + fmt(delta_used) + " eV^-1"},
             {"tau_eV_inv", "coincidence"}, {to_vec(taus), to_vec(values)});
  rep.diagnostics["coincidence_min"] = to_vec(values).minCoeff();
  rep.diagnostics["coincidence_max"] = to_vec(values).maxCoeff();
  if (evaluator.aliasing_warning()) {
    rep.notes.push_back("mode spectra reach the axis edge; widen schmidt.half_width_eV");
  }

  write_plot_script(claim_output(dir, "plot.py", rep), sc,
                    "data = np.loadtxt(HERE / \"broadband_hom.csv\", delimiter=\",\")\n"
                    "fig, ax = plt.subplots(figsize=(6, 4))\n"
                    "ax.plot(data[:, 0], data[:, 1])\n"
                    "ax.set_xlabel(\"detection separation tau (1/eV)\")\n"
                    "ax.set_ylabel(\"coincidence\")\n"
                    "OUT = HERE / \"broadband_hom.png\"\n");
}

void run_mzi(const Scenario& sc, const std::filesystem::path& dir, RunReport& rep) {
  const FrequencyGrid axis{sc.mzi_center, 8.0 * sc.mzi_sigma, sc.grid_points};
  Spectrum photon;
  photon.grid = axis;
  photon.values.resize(axis.n_points);
  const double norm =
      std::pow(2.0 * std::numbers::pi * sc.mzi_sigma * sc.mzi_sigma, -0.25);
  for (int k = 0; k < axis.n_points; ++k) {
    const double w = axis.point(k) - sc.mzi_center;
    photon.values[k] = norm * std::exp(-w * w / (4.0 * sc.mzi_sigma * sc.mzi_sigma));
  }

  ArmFilter filter;
  if (sc.matter_enabled) {
    const SampleArm arm = sc.arm;
    filter = [arm](double w) {
      return transmission(arm.system, arm.drive, w, arm.coupling_a0);
    };
  } else {
    filter = [](double) { return std::complex<double>{1.0, 0.0}; };
  }
  const double phase = sc.mzi_phase;
  const ArmPhase arm_phase = [phase](double) { return phase; };

  const std::vector<double> deltas = plain_delay_axis(sc.delay);
  Eigen::VectorXd signal(static_cast<Eigen::Index>(deltas.size()));
  Eigen::VectorXd num_a(signal.size()), num_b(signal.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const MziPorts ports =
        mzi_ports(photon, filter, arm_phase, sc.splitter.with_delay(deltas[i]));
    const auto k = static_cast<Eigen::Index>(i);
    signal[k] = ports.number_a - ports.number_b;
    num_a[k] = ports.number_a;
    num_b[k] = ports.number_b;
  }
  export_csv(claim_output(dir, "mzi_scan.csv", rep),
             {"scenario: " + sc.name,
              "detector number difference vs interferometer delay"},
             {"delta_eV_inv", "signal", "number_a", "number_b"},
             {to_vec(deltas), signal, num_a, num_b});
  rep.diagnostics["total_number"] = num_a[0] + num_b[0];
  rep.diagnostics["signal_min"] = signal.minCoeff();
  rep.diagnostics["signal_max"] = signal.maxCoeff();

  write_plot_script(claim_output(dir, "plot.py", rep), sc,
                    "data = np.loadtxt(HERE / \"mzi_scan.csv\", delimiter=\",\")\n"
                    "fig, ax = plt.subplots(figsize=(6, 4))\n"
                    "ax.plot(data[:, 0], data[:, 1])\n"
                    "ax.set_xlabel(\"delay (1/eV)\")\n"
                    "ax.set_ylabel(\"n_a - n_b\")\n"
                    "OUT = HERE / \"mzi_scan.png\"\n");
}

}  // namespace

std::vector<double> snapped_delay_axis(const TimeGrid& tg, const DelayAxisSpec& spec,
                                       std::string* note) {
  const double half = 0.5 * tg.spacing();
  long step_units = std::lround(spec.step / half);
  if (step_units < 1) step_units = 1;
  const double step = static_cast<double>(step_units) * half;

  const long k_min = static_cast<long>(std::ceil(spec.min / half - 1e-9));
  // Phase-align the axis so zero delay is included whenever the window allows it.
  const long rem = ((-k_min) % step_units + step_units) % step_units;
  std::vector<double> deltas;
  for (long k = k_min + rem; static_cast<double>(k) * half <= spec.max + 1e-9;
       k += step_units) {
    deltas.push_back(static_cast<double>(k) * half);
  }
  if (deltas.empty()) {
    throw std::invalid_argument("delay window admits no pairing-aligned delays");
  }
  if (note != nullptr &&
      (std::abs(step - spec.step) > 1e-12 * std::max(1.0, spec.step) ||
       std::abs(deltas.front() - spec.min) > 1e-12 * std::max(1.0, std::abs(spec.min)))) {
    *note = "delay axis snapped to the pairing quadrature: step " + fmt(step) +
            " eV^-1 (requested " + fmt(spec.step) + "), first delay " +
            fmt(deltas.front()) + ", " + std::to_string(deltas.size()) + " samples";
  }
  return deltas;
}

RunReport run_scenario(const Scenario& sc_in, const RunOptions& opt) {
  Scenario sc = sc_in;
  if (opt.grid_points_override != 0) {
    if (opt.grid_points_override < 16 || opt.grid_points_override > (1 << 22)) {
      throw ScenarioError({"--grid-points must lie in [16, 4194304]"});
    }
    sc.grid_points = opt.grid_points_override;
  }
  if (opt.threads < 1) {
    throw ScenarioError({"--threads must be at least 1"});
  }

  const std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);

  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.scenario_name = sc.name;
  rep.task = sc.task;
  rep.echo = scenario_echo(sc);

  if (sc.task == "pulse-extent") {
    run_pulse_extent(sc, dir, rep);
  } else if (sc.task == "chi3-scan") {
    run_chi3_scan(sc, dir, rep);
  } else if (sc.task == "transmission") {
    run_transmission(sc, dir, rep);
  } else if (sc.task == "hom-dip") {
    run_hom_dip(sc, dir, rep);
  } else if (sc.task == "scan-2d") {
    run_scan_2d(sc, opt, dir, rep);
  } else if (sc.task == "schmidt") {
    run_schmidt(sc, dir, rep);
  } else if (sc.task == "broadband-hom") {
    run_broadband_hom(sc, dir, rep);
  } else if (sc.task == "mzi") {
    run_mzi(sc, dir, rep);
  } else {
    throw std::logic_error("unhandled task: " + sc.task);
  }

  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string report_path = claim_output(dir, "report.txt", rep);
  write_text_file(report_path, render_report(rep));

  for (const auto& file : rep.output_files) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(file, ec);
    if (ec || size == 0) {
      throw std::runtime_error("declared output missing or empty: " + file);
    }
  }
  return rep;
}

std::string render_report(const RunReport& report) {
  std::ostringstream out;
  out << "scenario: " << report.scenario_name << "\n";
  out << "task: " << report.task << "\n";
  out << "duration_seconds: " << fmt(report.wall_seconds) << "\n";
  out << "parameters:\n";
  for (const auto& line : report.echo) {
    out << "  " << line << "\n";
  }
  out << "outputs:\n";
  for (const auto& file : report.output_files) {
    out << "  " << file << "\n";
  }
  out << "diagnostics:\n";
  for (const auto& [key, value] : report.diagnostics) {
    out << "  " << key << " = " << format_value(value) << "\n";
  }
  if (!report.notes.empty()) {
    out << "notes:\n";
    for (const auto& n : report.notes) {
      out << "  - " << n << "\n";
    }
  }
  return out.str();
}

}
