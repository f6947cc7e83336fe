#include "homspec/hom_signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <thread>

#include "homspec/fourier.hpp"

namespace homspec {

namespace {

constexpr double align_tol = 1e-6;
constexpr std::complex<double> imag_unit{0.0, 1.0};

// Pair index m such that τ_p + τ_q = 2Δ requires p + q = m. Throws when Δ is not a
// multiple of dτ/2 relative to the grid origin.
long pairing_index(const TimeGrid& grid, double delta) {
  const double x = 2.0 * (delta - grid.min()) / grid.spacing();
  const double rounded = std::round(x);
  if (std::abs(x - rounded) > align_tol) {
    throw std::invalid_argument(
        "splitter delay must be a multiple of half the time-grid step");
  }
  return static_cast<long>(rounded);
}

}  // namespace

void SignalScale::validate() const {
  if (!(std::isfinite(p0) && p0 > 0.0)) {
    throw std::invalid_argument("signal scale p0 must be positive and finite");
  }
}

void SampleArm::validate() const {
  system.validate();
  drive.validate();
  if (!(std::isfinite(coupling_a0) && coupling_a0 >= 0.0)) {
    throw std::invalid_argument("sample coupling a0 must be non-negative and finite");
  }
}

TimeSignal convolved_response(const TimeSignal& g, const TimeSignal& chi_tau) {
  return convolve(g, chi_tau);
}

Spectrum arm_filtered_spectrum(const Spectrum& g, const SampleArm& arm, double omega_p) {
  arm.validate();
  check_signal(g, "arm filter input spectrum");
  if (!std::isfinite(omega_p)) {
    throw std::invalid_argument("pump frequency must be finite");
  }
  Spectrum out = g;
  const int n = g.grid.n_points;
  for (int k = 0; k < n; ++k) {
    const double absolute = g.grid.point(k) + 0.5 * omega_p;
    out.values[k] *= transmission(arm.system, arm.drive, absolute, arm.coupling_a0);
  }
  return out;
}

TimeSignal build_response(const std::optional<SampleArm>& arm, const BiphotonAmplitude& phi,
                          const TimeGrid& tg) {
  phi.validate();
  Spectrum slice = slice_spectrum(phi, conjugate_frequency_grid(tg, 0.0));
  if (arm.has_value()) {
    slice = arm_filtered_spectrum(slice, *arm, phi.omega_p());
  }
  return fourier_to_time(slice);
}

double integrated_norm(const TimeSignal& c) {
  check_signal(c, "pair response");
  return c.grid.spacing() * c.values.squaredNorm();
}

bool edge_decay_warning(const TimeSignal& c) {
  check_signal(c, "pair response");
  const double peak = c.values.cwiseAbs().maxCoeff();
  if (peak <= 0.0) return false;
  const int n = c.grid.n_points;
  const double edge = std::max(std::abs(c.values[0]), std::abs(c.values[n - 1]));
  return edge > 1e-6 * peak;
}

double coincidence_tau(const TimeSignal& c, double nu, const BeamSplitter& bs,
                       const SignalScale& scale, double tau) {
  check_signal(c, "pair response");
  bs.validate();
  scale.validate();
  if (!std::isfinite(nu)) {
    throw std::invalid_argument("residual carrier frequency must be finite");
  }
  const int j = c.grid.index_of(tau);
  if (j < 0) {
    throw std::invalid_argument("detection separation tau must land on a grid sample");
  }
  const double mirrored = 2.0 * bs.delay - tau;
  const int k = c.grid.index_of(mirrored);
  if (k < 0) {
    throw std::invalid_argument("mirrored time 2 delay - tau must land on a grid sample");
  }
  const std::complex<double> cj = c.values[j];
  const std::complex<double> ck = c.values[k];
  std::complex<double> phase{1.0, 0.0};
  if (nu != 0.0) {
    phase = std::exp(-imag_unit * nu * (tau - bs.delay));
  }
  const double t = bs.transmittance;
  const double r = bs.reflectance;
  const double cross = 2.0 * std::real(std::conj(cj) * ck * phase);
  return scale.p0 * (t * t * std::norm(cj) + r * r * std::norm(ck) - t * r * cross);
}

double coincidence_integrated(const TimeSignal& c, double nu, const BeamSplitter& bs,
                              const SignalScale& scale) {
  check_signal(c, "pair response");
  bs.validate();
  scale.validate();
  if (!std::isfinite(nu)) {
    throw std::invalid_argument("residual carrier frequency must be finite");
  }
  const int n = c.grid.n_points;
  const double dtau = c.grid.spacing();
  const long m = pairing_index(c.grid, bs.delay);

  const double t = bs.transmittance;
  const double r = bs.reflectance;
  const double n0 = scale.p0 * (t * t + r * r) * dtau * c.values.squaredNorm();

  const long lo = std::max<long>(0, m - (n - 1));
  const long hi = std::min<long>(n - 1, m);
  std::complex<double> overlap{0.0, 0.0};
  for (long p = lo; p <= hi; ++p) {
    const std::complex<double> term = std::conj(c.values[p]) * c.values[m - p];
    if (nu != 0.0) {
      overlap += term * std::exp(-imag_unit * nu * (c.grid.point(p) - bs.delay));
    } else {
      overlap += term;
    }
  }
  return n0 - scale.p0 * t * r * dtau * 2.0 * std::real(overlap);
}

HomScan scan_delta(const std::optional<SampleArm>& arm, const BiphotonAmplitude& phi,
                   const TimeGrid& tg, const BeamSplitter& bs,
                   const std::vector<double>& deltas, const SignalScale& scale) {
  if (deltas.empty()) {
    throw std::invalid_argument("delay axis must not be empty");
  }
  const TimeSignal c = build_response(arm, phi, tg);
  HomScan scan;
  scan.deltas = deltas;
  scan.values.resize(static_cast<Eigen::Index>(deltas.size()));
  scan.edge_warning = edge_decay_warning(c);
  scan.aliasing_warning = c.aliasing_warning;
  const double t = bs.transmittance;
  const double r = bs.reflectance;
  scan.n0 = scale.p0 * (t * t + r * r) * integrated_norm(c);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    scan.values[static_cast<Eigen::Index>(i)] =
        coincidence_integrated(c, 0.0, bs.with_delay(deltas[i]), scale);
  }
  return scan;
}

void CoincidenceMap::validate() const {
  if (values.rows() != static_cast<Eigen::Index>(deltas.size()) ||
      values.cols() != static_cast<Eigen::Index>(pump_freqs.size())) {
    throw std::logic_error("coincidence map shape does not match its axes");
  }
  if (!values.allFinite() || values.minCoeff() < -1e-12) {
    throw std::logic_error("coincidence map holds a non-finite or negative probability");
  }
}

BiphotonAmplitude with_pump(const BiphotonAmplitude& phi, double omega_p) {
  BiphotonAmplitude out = phi;
  std::visit([omega_p](auto& p) { p.omega_p = omega_p; }, out.params);
  out.validate();
  return out;
}

CoincidenceMap scan_2d(const std::optional<SampleArm>& arm, const BiphotonAmplitude& phi,
                       const TimeGrid& tg, const BeamSplitter& bs,
                       const std::vector<double>& deltas,
                       const std::vector<double>& pump_freqs, const SignalScale& scale,
                       int threads) {
  if (deltas.empty() || pump_freqs.empty()) {
    throw std::invalid_argument("scan axes must not be empty");
  }
  if (threads < 1) {
    throw std::invalid_argument("thread count must be at least 1");
  }
  const int n_cols = static_cast<int>(pump_freqs.size());
  CoincidenceMap map;
  map.deltas = deltas;
  map.pump_freqs = pump_freqs;
  map.values.resize(static_cast<Eigen::Index>(deltas.size()), n_cols);
  map.n0.resize(n_cols);

  std::vector<unsigned char> col_edge(static_cast<std::size_t>(n_cols), 0);
  std::vector<unsigned char> col_alias(static_cast<std::size_t>(n_cols), 0);

  auto run_column = [&](int col) {
    const HomScan scan =
        scan_delta(arm, with_pump(phi, pump_freqs[static_cast<std::size_t>(col)]), tg, bs,
                   deltas, scale);
    map.values.col(col) = scan.values;
    map.n0[col] = scan.n0;
    col_edge[static_cast<std::size_t>(col)] = scan.edge_warning ? 1 : 0;
    col_alias[static_cast<std::size_t>(col)] = scan.aliasing_warning ? 1 : 0;
  };

  const int n_workers = std::min(threads, n_cols);
  if (n_workers <= 1) {
    for (int col = 0; col < n_cols; ++col) run_column(col);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w]() {
        for (int col = w; col < n_cols; col += n_workers) run_column(col);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (int col = 0; col < n_cols; ++col) {
    map.edge_warning = map.edge_warning || col_edge[static_cast<std::size_t>(col)] != 0;
    map.aliasing_warning =
        map.aliasing_warning || col_alias[static_cast<std::size_t>(col)] != 0;
  }
  map.validate();
  return map;
}

SinglesRates singles_rates(const SampledAmplitude& phi, const BeamSplitter& bs) {
  bs.validate();
  if (phi.values.rows() != phi.axis.n_points || phi.values.cols() != phi.axis.n_points) {
    throw std::invalid_argument("sampled amplitude shape does not match its axis");
  }
  const double dw = phi.axis.spacing();
  // Marginal photon numbers per input arm; the cross term <a†(ω) b(ω)> connects states
  // with different photon numbers per arm and vanishes identically.
  const double n_a = phi.values.squaredNorm() * dw * dw;
  double n_b = 0.0;
  for (Eigen::Index j = 0; j < phi.values.cols(); ++j) {
    n_b += phi.values.col(j).squaredNorm();
  }
  n_b *= dw * dw;
  const double t = bs.transmittance;
  const double r = bs.reflectance;
  return SinglesRates{t * n_a + r * n_b, r * n_a + t * n_b};
}

double dip_visibility(const HomScan& scan) {
  if (!(scan.n0 > 0.0)) {
    throw std::invalid_argument("scan background must be positive");
  }
  return (scan.n0 - scan.values.minCoeff()) / scan.n0;
}

double asymmetry_metric(const HomScan& scan) {
  const std::size_t n = scan.deltas.size();
  if (n < 2) {
    throw std::invalid_argument("asymmetry needs at least two delay samples");
  }
  const double step = (scan.deltas.back() - scan.deltas.front()) / static_cast<double>(n - 1);
  if (!(step > 0.0)) {
    throw std::invalid_argument("delay axis must be increasing");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += scan.values[static_cast<Eigen::Index>(i)] * step;
    // Mirror sample by index on the uniform axis.
    const double mirrored = -scan.deltas[i];
    const double pos = (mirrored - scan.deltas.front()) / step;
    const double rounded = std::round(pos);
    if (rounded < 0.0 || rounded > static_cast<double>(n - 1) ||
        std::abs(pos - rounded) > 1e-6) {
      continue;
    }
    const auto j = static_cast<Eigen::Index>(rounded);
    num += std::abs(scan.values[static_cast<Eigen::Index>(i)] - scan.values[j]) * step;
  }
  if (!(den > 0.0)) {
    throw std::invalid_argument("scan integral must be positive");
  }
  return num / den;
}

FeatureDiagnostics analyze_feature(const CoincidenceMap& map, const HomScan& bare) {
  map.validate();
  if (bare.deltas != map.deltas) {
    throw std::invalid_argument("feature analysis needs matching delay axes");
  }
  if (!(bare.n0 > 0.0)) {
    throw std::invalid_argument("bare scan background must be positive");
  }
  const auto n_rows = static_cast<Eigen::Index>(map.deltas.size());
  const auto n_cols = static_cast<Eigen::Index>(map.pump_freqs.size());
  const double dstep =
      map.deltas.size() > 1
          ? (map.deltas.back() - map.deltas.front()) / static_cast<double>(map.deltas.size() - 1)
          : 1.0;

  // Normalized modulation against the bare scan; the flat absorption pedestal divides out.
  Eigen::MatrixXd profile(n_rows, n_cols);
  Eigen::VectorXd strength(n_cols);
  for (Eigen::Index col = 0; col < n_cols; ++col) {
    if (!(map.n0[col] > 0.0)) {
      throw std::invalid_argument("map background must be positive in every column");
    }
    profile.col(col) =
        (map.values.col(col) / map.n0[col] - bare.values / bare.n0).cwiseAbs();
    strength[col] = profile.col(col).sum() * dstep;
  }

  FeatureDiagnostics out;
  Eigen::Index peak_col = 0;
  out.strength = strength.maxCoeff(&peak_col);
  out.peak_column = static_cast<int>(peak_col);

  // Centroid of the column strength above half maximum.
  const double half = 0.5 * out.strength;
  double mass = 0.0;
  double moment = 0.0;
  for (Eigen::Index col = 0; col < n_cols; ++col) {
    if (strength[col] >= half) {
      mass += strength[col];
      moment += strength[col] * map.pump_freqs[static_cast<std::size_t>(col)];
    }
  }
  out.center = mass > 0.0 ? moment / mass : map.pump_freqs[static_cast<std::size_t>(peak_col)];

  // FWHM along the delay axis at the peak column, with linear interpolation at the
  // half-maximum crossings.
  const Eigen::VectorXd f = profile.col(peak_col);
  Eigen::Index peak_row = 0;
  const double fmax = f.maxCoeff(&peak_row);
  if (fmax > 0.0 && n_rows > 2) {
    const double target = 0.5 * fmax;
    double left = map.deltas.front();
    for (Eigen::Index i = peak_row; i > 0; --i) {
      if (f[i - 1] < target) {
        const double frac = (target - f[i - 1]) / (f[i] - f[i - 1]);
        left = map.deltas[static_cast<std::size_t>(i - 1)] + frac * dstep;
        break;
      }
    }
    double right = map.deltas.back();
    for (Eigen::Index i = peak_row; i + 1 < n_rows; ++i) {
      if (f[i + 1] < target) {
        const double frac = (target - f[i + 1]) / (f[i] - f[i + 1]);
        right = map.deltas[static_cast<std::size_t>(i + 1)] - frac * dstep;
        break;
      }
    }
    out.fwhm_delta = right - left;
  }
  return out;
}

}
