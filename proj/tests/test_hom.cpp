#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "homspec/biphoton.hpp"
#include "homspec/four_level.hpp"
#include "homspec/fourier.hpp"
#include "homspec/hom_signal.hpp"

using namespace homspec;

namespace {

constexpr std::complex<double> I{0.0, 1.0};
const double root_two_pi = std::sqrt(2.0 * std::numbers::pi);

Eigen::VectorXcd random_complex(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = std::complex<double>(uni(rng), uni(rng));
  return v;
}

// Exactly sample-wise even: values[j] == values[n-1-j] bit for bit.
TimeSignal even_signal(const TimeGrid& tg, unsigned seed) {
  const Eigen::VectorXcd v = random_complex(tg.n_points, seed);
  TimeSignal c(tg, Eigen::VectorXcd(tg.n_points));
  for (int j = 0; j < tg.n_points; ++j) c.values[j] = v[j] + v[tg.n_points - 1 - j];
  return c;
}

std::vector<double> quadrature_deltas(const TimeGrid& tg, int k_min, int k_max) {
  std::vector<double> deltas;
  for (int k = k_min; k <= k_max; ++k) deltas.push_back(k * 0.5 * tg.spacing());
  return deltas;
}

SampleArm paper_arm() {
  SampleArm arm;
  arm.drive = ClassicalDrive::resonant(arm.system);
  arm.coupling_a0 = 2.5e-5;
  return arm;
}

}  // namespace

TEST_SUITE("hom") {

TEST_CASE("coincidences vanish identically at tau = delay for a balanced splitter") {
  // At tau = delay both detection paths sample the same response value, so the
  // probability collapses to p0 (T - R)^2 |C|^2 for ANY state.
  const TimeGrid tg(20.0, 128);
  TimeSignal c(tg, random_complex(tg.n_points, 31u));
  const SignalScale scale;
  const double delta = tg.point(70);
  const BeamSplitter balanced{0.5, 0.5, delta};
  CHECK(coincidence_tau(c, 0.0, balanced, scale, delta) == 0.0);
  CHECK(coincidence_tau(c, 12.0, balanced, scale, delta) == 0.0);

  const BeamSplitter lopsided{0.3, 0.7, delta};
  const double expected = 0.16 * std::norm(c.values[70]);
  CHECK(coincidence_tau(c, 0.0, lopsided, scale, delta) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("integrated coincidence vanishes at zero delay for an even response") {
  const TimeGrid tg(30.0, 256);
  const TimeSignal c = even_signal(tg, 7u);
  const SignalScale scale;
  const BeamSplitter bs{0.5, 0.5, 0.0};
  const double n0 = scale.p0 * 0.5 * integrated_norm(c);
  const double p = coincidence_integrated(c, 0.0, bs, scale);
  CHECK(std::abs(p) < 1e-13 * n0);
}

TEST_CASE("integrated coincidence is even in the delay for an even response") {
  const TimeGrid tg(30.0, 256);
  const TimeSignal c = even_signal(tg, 8u);
  const SignalScale scale;
  const double n0 = 0.5 * integrated_norm(c);
  for (int k : {1, 3, 8, 31}) {
    const double delta = k * 0.5 * tg.spacing();
    const double plus = coincidence_integrated(c, 0.0, BeamSplitter{0.5, 0.5, delta}, scale);
    const double minus =
        coincidence_integrated(c, 0.0, BeamSplitter{0.5, 0.5, -delta}, scale);
    CHECK(std::abs(plus - minus) < 1e-12 * n0);
  }
}

TEST_CASE("the coincidence signal does not depend on the working frame") {
  // A response carried at the lab frequency, C exp(-i omega_p tau / 2) with
  // nu = omega_p, must reproduce the shifted-frame result with nu = 0: the
  // carrier phases cancel pair by pair.
  const TimeGrid tg(25.0, 200);
  const double omega_p = 12.0;
  TimeSignal shifted(tg, random_complex(tg.n_points, 17u));
  TimeSignal lab(tg, Eigen::VectorXcd(tg.n_points));
  for (int j = 0; j < tg.n_points; ++j) {
    lab.values[j] = shifted.values[j] * std::exp(-I * (0.5 * omega_p) * tg.point(j));
  }
  const SignalScale scale;
  const double n0 = 0.5 * integrated_norm(shifted);
  for (int k : {-31, -6, 0, 9, 42}) {
    const BeamSplitter bs{0.5, 0.5, k * 0.5 * tg.spacing()};
    const double a = coincidence_integrated(shifted, 0.0, bs, scale);
    const double b = coincidence_integrated(lab, omega_p, bs, scale);
    CHECK(std::abs(a - b) < 1e-12 * n0);
  }
  // Same cancellation for the time-resolved form.
  const BeamSplitter bs{0.5, 0.5, tg.point(120)};
  for (int j : {60, 100, 150}) {
    const double a = coincidence_tau(shifted, 0.0, bs, scale, tg.point(j));
    const double b = coincidence_tau(lab, omega_p, bs, scale, tg.point(j));
    CHECK(std::abs(a - b) < 1e-12 * (std::abs(a) + n0));
  }
}

TEST_CASE("the dip never exceeds the splitter-limited visibility") {
  // |pair overlap| <= response norm bounds P(delta)/n0 from below by
  // 1 - 2TR/(T^2+R^2) for every state and every aligned delay.
  const TimeGrid tg(15.0, 128);
  TimeSignal c(tg, random_complex(tg.n_points, 5u));
  const SignalScale scale;
  const BeamSplitter bs{0.3, 0.7, 0.0};
  const double n0 = scale.p0 * (0.09 + 0.49) * integrated_norm(c);
  const double floor_ratio = 1.0 - 2.0 * 0.21 / 0.58;
  for (int k = -40; k <= 40; ++k) {
    const double p =
        coincidence_integrated(c, 0.0, bs.with_delay(k * 0.5 * tg.spacing()), scale);
    CHECK(p >= n0 * floor_ratio - 1e-9 * n0);
    CHECK(p >= -1e-12 * n0);
  }
}

TEST_CASE("integrating the time-resolved coincidence recovers the delay form") {
  // Compact-support response: the pairing window then carries all the weight.
  const TimeGrid tg(30.0, 300);
  TimeSignal c(tg, Eigen::VectorXcd(tg.n_points));
  for (int j = 0; j < tg.n_points; ++j) {
    const double t = tg.point(j);
    c.values[j] = std::exp(-t * t / 4.0) * std::exp(I * 0.3 * t);
  }
  const SignalScale scale;
  const int n = tg.n_points;
  for (int k : {0, 10, -14}) {  // delta = k * dtau: every mirror stays on the lattice
    const double delta = k * tg.spacing();
    const BeamSplitter bs{0.4, 0.6, delta};
    const long m = 2L * k + (n - 1);
    double summed = 0.0;
    for (int j = 0; j < n; ++j) {
      const long mirror = m - j;
      if (mirror < 0 || mirror >= n) continue;
      summed += coincidence_tau(c, 0.0, bs, scale, tg.point(j));
    }
    summed *= tg.spacing();
    const double integrated = coincidence_integrated(c, 0.0, bs, scale);
    CHECK(summed == doctest::Approx(integrated).epsilon(1e-12));
  }
}

TEST_CASE("narrowband pairs dig a triangular dip of entanglement-time width") {
  const double t_ent = 10.0;
  const BiphotonAmplitude narrow{NarrowbandSincParams{12.0, t_ent}};
  const FrequencyGrid fg(0.0, 32.0, 1024);
  const TimeGrid tg = conjugate_time_grid(fg);
  const BeamSplitter bs{0.5, 0.5, 0.0};
  const SignalScale scale;
  const int k_max = static_cast<int>(std::floor(12.0 / (0.5 * tg.spacing())));
  const std::vector<double> deltas = quadrature_deltas(tg, -k_max, k_max);
  const HomScan scan = scan_delta(std::nullopt, narrow, tg, bs, deltas, scale);
  REQUIRE(scan.n0 > 0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double x = std::abs(deltas[i]) / t_ent;
    const double expected = 1.0 - std::max(0.0, 1.0 - x);
    worst = std::max(worst,
                     std::abs(scan.values[static_cast<Eigen::Index>(i)] / scan.n0 - expected));
  }
  CHECK(worst < 0.01);
  CHECK(dip_visibility(scan) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("the scan agrees with a direct quadrature oracle") {
  // Rebuild the wavepacket by direct summation of the defining transform and
  // re-derive the paired sum from scratch; the pipeline must match.
  const BiphotonAmplitude narrow{NarrowbandSincParams{12.0, 10.0}};
  const FrequencyGrid fg(0.0, 32.0, 1024);
  const TimeGrid tg = conjugate_time_grid(fg);
  const int n = tg.n_points;
  const double dtau = tg.spacing();
  const double dw = fg.spacing();

  Eigen::VectorXcd g(n);
  for (int j = 0; j < n; ++j) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < n; ++k) {
      acc += narrow.slice(fg.point(k)) * std::exp(-I * fg.point(k) * tg.point(j));
    }
    g[j] = acc * dw / root_two_pi;
  }

  const BeamSplitter bs{0.5, 0.5, 0.0};
  const SignalScale scale;
  const std::vector<int> ks = {0, 51, 102, -77, 160};
  std::vector<double> deltas;
  for (int k : ks) deltas.push_back(k * 0.5 * dtau);
  const HomScan scan = scan_delta(std::nullopt, narrow, tg, bs, deltas, scale);

  const double norm = g.squaredNorm() * dtau;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const long m = ks[i] + (n - 1);
    std::complex<double> overlap = 0.0;
    const long lo = std::max<long>(0, m - (n - 1));
    const long hi = std::min<long>(n - 1, m);
    for (long p = lo; p <= hi; ++p) overlap += std::conj(g[p]) * g[m - p];
    const double oracle = 0.5 * norm - 0.25 * dtau * 2.0 * overlap.real();
    CHECK(std::abs(scan.values[static_cast<Eigen::Index>(i)] - oracle) < 1e-9 * scan.n0);
  }
}

TEST_CASE("gaussian pairs dig a gaussian dip at the difference bandwidth") {
  const BiphotonAmplitude gauss{GaussianBiphotonParams{}};  // sigma_minus = 0.8
  const FrequencyGrid fg(0.0, 8.0, 2048);
  const TimeGrid tg = conjugate_time_grid(fg);
  const BeamSplitter bs{0.5, 0.5, 0.0};
  const SignalScale scale;
  const std::vector<double> deltas = quadrature_deltas(tg, -20, 20);
  const HomScan scan = scan_delta(std::nullopt, gauss, tg, bs, deltas, scale);
  CHECK_FALSE(scan.edge_warning);
  CHECK_FALSE(scan.aliasing_warning);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double expected = 1.0 - std::exp(-0.32 * deltas[i] * deltas[i]);
    CHECK(std::abs(scan.values[static_cast<Eigen::Index>(i)] / scan.n0 - expected) < 1e-8);
  }
}

TEST_CASE("multiplicative filtering equals convolution with the pole response") {
  const BiphotonAmplitude gauss{GaussianBiphotonParams{}};
  const FrequencyGrid fg(0.0, 32.0, 4096);
  const TimeGrid tg = conjugate_time_grid(fg);
  const SampleArm arm = paper_arm();

  const TimeSignal filtered = build_response(arm, gauss, tg);
  const TimeSignal bare = build_response(std::nullopt, gauss, tg);
  const double peak = filtered.values.cwiseAbs().maxCoeff();

  SUBCASE("exactly, when the response is the transform of the sampled pole") {
    Spectrum pole(fg, Eigen::VectorXcd(fg.n_points));
    for (int k = 0; k < fg.n_points; ++k) {
      pole.values[k] = chi3_photon(arm.system, arm.drive, fg.point(k) + 6.0);
    }
    const TimeSignal x = fourier_to_time(pole);
    const TimeSignal conv = convolve(bare, x);
    const Eigen::VectorXcd via_time =
        bare.values - (I * arm.coupling_a0 / root_two_pi) * conv.values;
    CHECK((filtered.values - via_time).cwiseAbs().maxCoeff() < 1e-13 * peak);
  }

  SUBCASE("to quadrature accuracy, with the analytic causal response") {
    const TimeSignal x = chi3_time(arm.system, arm.drive, tg, 6.0);
    const TimeSignal conv = convolve(bare, x);
    const Eigen::VectorXcd via_time =
        bare.values - (I * arm.coupling_a0 / root_two_pi) * conv.values;
    CHECK((filtered.values - via_time).cwiseAbs().maxCoeff() < 5e-3 * peak);
  }
}

TEST_CASE("both detectors see unit singles rates whatever the splitter") {
  const SampledAmplitude phi =
      sample_biphoton(BiphotonAmplitude{GaussianBiphotonParams{}}, FrequencyGrid(6.0, 4.0, 256));
  for (double t : {0.5, 0.3}) {
    const SinglesRates rates = singles_rates(phi, BeamSplitter{t, 1.0 - t, 0.0});
    CHECK(rates.detector_a == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rates.detector_b == doctest::Approx(1.0).epsilon(1e-9));
  }
  SampledAmplitude broken = phi;
  broken.values = Eigen::MatrixXcd::Zero(3, 256);
  CHECK_THROWS_AS(singles_rates(broken, BeamSplitter{0.5, 0.5, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("edge decay warning flags truncated responses") {
  const TimeGrid tg(10.0, 64);
  TimeSignal narrow(tg, Eigen::VectorXcd(tg.n_points));
  TimeSignal wide(tg, Eigen::VectorXcd(tg.n_points));
  for (int j = 0; j < tg.n_points; ++j) {
    const double t = tg.point(j);
    narrow.values[j] = std::exp(-t * t / 2.0);
    wide.values[j] = std::exp(-t * t / 800.0);
  }
  CHECK_FALSE(edge_decay_warning(narrow));
  CHECK(edge_decay_warning(wide));
  TimeSignal silent(tg, Eigen::VectorXcd::Zero(tg.n_points));
  CHECK_FALSE(edge_decay_warning(silent));
}

TEST_CASE("pump maps are identical for any thread count") {
  const BiphotonAmplitude gauss{GaussianBiphotonParams{}};
  const FrequencyGrid fg(0.0, 8.0, 512);
  const TimeGrid tg = conjugate_time_grid(fg);
  const std::vector<double> deltas = quadrature_deltas(tg, -10, 10);
  std::vector<double> pumps;
  for (int i = 0; i < 8; ++i) pumps.push_back(10.0 + 4.0 * i / 7.0);
  const SignalScale scale;
  const BeamSplitter bs{0.5, 0.5, 0.0};
  const std::optional<SampleArm> arm = paper_arm();

  const CoincidenceMap map1 = scan_2d(arm, gauss, tg, bs, deltas, pumps, scale, 1);
  const CoincidenceMap map4 = scan_2d(arm, gauss, tg, bs, deltas, pumps, scale, 4);
  const CoincidenceMap map7 = scan_2d(arm, gauss, tg, bs, deltas, pumps, scale, 7);
  CHECK((map1.values.array() == map4.values.array()).all());
  CHECK((map1.values.array() == map7.values.array()).all());
  CHECK((map1.n0.array() == map4.n0.array()).all());

  // Without the sample the pair state is pump-independent in the shifted frame,
  // so every column carries the same dip.
  const CoincidenceMap bare =
      scan_2d(std::nullopt, gauss, tg, bs, deltas, pumps, scale, 3);
  const double span = bare.values.col(0).cwiseAbs().maxCoeff();
  CHECK((bare.values.col(0) - bare.values.col(7)).cwiseAbs().maxCoeff() < 1e-12 * span);
}

TEST_CASE("replacing the pump carrier revalidates the state") {
  const BiphotonAmplitude gauss{GaussianBiphotonParams{}};
  CHECK(with_pump(gauss, 13.5).omega_p() == doctest::Approx(13.5));
  CHECK_THROWS_AS(with_pump(gauss, -2.0), std::invalid_argument);
  const BiphotonAmplitude narrow{NarrowbandSincParams{}};
  CHECK(with_pump(narrow, 11.0).omega_p() == doctest::Approx(11.0));
}

TEST_CASE("map validation rejects corrupted values") {
  CoincidenceMap map;
  map.deltas = {0.0, 1.0};
  map.pump_freqs = {10.0};
  map.values = Eigen::MatrixXd::Zero(2, 1);
  map.n0 = Eigen::VectorXd::Ones(1);
  CHECK_NOTHROW(map.validate());
  map.values(1, 0) = -1e-3;
  CHECK_THROWS_AS(map.validate(), std::logic_error);
  map.values(1, 0) = std::nan("");
  CHECK_THROWS_AS(map.validate(), std::logic_error);
  map.values = Eigen::MatrixXd::Zero(3, 1);
  CHECK_THROWS_AS(map.validate(), std::logic_error);
}

TEST_CASE("misaligned delays and detection times are rejected") {
  const TimeGrid tg(10.0, 64);
  TimeSignal c(tg, random_complex(tg.n_points, 3u));
  const SignalScale scale;
  CHECK_THROWS_AS(
      coincidence_integrated(c, 0.0, BeamSplitter{0.5, 0.5, 0.3 * tg.spacing()}, scale),
      std::invalid_argument);
  CHECK_THROWS_AS(
      coincidence_tau(c, 0.0, BeamSplitter{0.5, 0.5, 0.0}, scale, 0.37 * tg.spacing()),
      std::invalid_argument);
  CHECK_THROWS_AS(coincidence_integrated(c, std::nan(""), BeamSplitter{0.5, 0.5, 0.0}, scale),
                  std::invalid_argument);
  const BiphotonAmplitude gauss{GaussianBiphotonParams{}};
  CHECK_THROWS_AS(scan_delta(std::nullopt, gauss, tg, BeamSplitter{0.5, 0.5, 0.0}, {}, scale),
                  std::invalid_argument);
  CHECK_THROWS_AS(scan_2d(std::nullopt, gauss, tg, BeamSplitter{0.5, 0.5, 0.0}, {0.0}, {12.0},
                          scale, 0),
                  std::invalid_argument);
  SignalScale bad;
  bad.p0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  SampleArm arm = paper_arm();
  arm.coupling_a0 = -1.0;
  CHECK_THROWS_AS(arm.validate(), std::invalid_argument);
}

TEST_CASE("asymmetry metric on hand-built scans") {
  HomScan scan;
  scan.deltas = {-1.0, 0.0, 1.0};
  scan.values = Eigen::VectorXd(3);
  scan.values << 1.0, 2.0, 4.0;
  scan.n0 = 1.0;
  CHECK(asymmetry_metric(scan) == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  HomScan one_sided;
  one_sided.deltas = {0.0, 1.0, 2.0};
  one_sided.values = Eigen::VectorXd(3);
  one_sided.values << 1.0, 2.0, 3.0;
  CHECK(asymmetry_metric(one_sided) == doctest::Approx(0.0));
}

TEST_CASE("the sample skews the dip; bare dips stay symmetric") {
  const BiphotonAmplitude gauss{GaussianBiphotonParams{}};
  const FrequencyGrid fg(0.0, 8.0, 1024);
  const TimeGrid tg = conjugate_time_grid(fg);
  const BeamSplitter bs{0.5, 0.5, 0.0};
  const SignalScale scale;
  const std::vector<double> deltas = quadrature_deltas(tg, -60, 60);
  const HomScan bare = scan_delta(std::nullopt, gauss, tg, bs, deltas, scale);
  const HomScan dressed = scan_delta(paper_arm(), gauss, tg, bs, deltas, scale);
  CHECK(asymmetry_metric(bare) < 1e-8);
  CHECK(asymmetry_metric(dressed) > 1e-3);
}

TEST_CASE("feature analysis finds the two-photon resonance at the pump") {
  // The f <- g gap sits at 6 eV, so the sample modulation peaks where the pair
  // energy matches it: omega_p = 12 eV.
  const BiphotonAmplitude gauss{GaussianBiphotonParams{}};
  const FrequencyGrid fg(0.0, 8.0, 1024);
  const TimeGrid tg = conjugate_time_grid(fg);
  const BeamSplitter bs{0.5, 0.5, 0.0};
  const SignalScale scale;
  const std::vector<double> deltas = quadrature_deltas(tg, -40, 40);
  std::vector<double> pumps;
  for (int i = 0; i <= 8; ++i) pumps.push_back(10.0 + 0.5 * i);

  const CoincidenceMap map =
      scan_2d(paper_arm(), gauss, tg, bs, deltas, pumps, scale, 4);
  const HomScan bare = scan_delta(std::nullopt, gauss, tg, bs, deltas, scale);
  const FeatureDiagnostics feat = analyze_feature(map, bare);
  CHECK(std::abs(feat.center - 12.0) <= 0.5 + 1e-9);
  CHECK(feat.peak_column == 4);
  CHECK(feat.strength > 0.0);
  CHECK(feat.fwhm_delta > 0.0);

  HomScan mismatched = bare;
  mismatched.deltas.pop_back();
  mismatched.values.conservativeResize(mismatched.values.size() - 1);
  CHECK_THROWS_AS(analyze_feature(map, mismatched), std::invalid_argument);
}

}
