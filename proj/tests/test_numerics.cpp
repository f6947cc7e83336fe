#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "homspec/fourier.hpp"
#include "homspec/grid.hpp"
#include "homspec/signal.hpp"
#include "homspec/units.hpp"

using namespace homspec;

namespace {

constexpr std::complex<double> I{0.0, 1.0};
constexpr double root_two_pi = 2.5066282746310002;  // sqrt(2 pi)

Eigen::VectorXcd random_complex(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = std::complex<double>(uni(rng), uni(rng));
  return v;
}

// Unit-area Gaussian pulse exp(-t^2 / 2 sigma^2) / (sigma sqrt(2 pi)).
TimeSignal gaussian_pulse(const TimeGrid& tg, double sigma) {
  TimeSignal s(tg, Eigen::VectorXcd(tg.n_points));
  for (int j = 0; j < tg.n_points; ++j) {
    const double t = tg.point(j);
    s.values[j] = std::exp(-t * t / (2.0 * sigma * sigma)) / (sigma * root_two_pi);
  }
  return s;
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("frequency grid covers its window with inclusive endpoints") {
  const FrequencyGrid fg(3.0, 8.0, 1024);
  CHECK(fg.min() == doctest::Approx(-5.0).epsilon(1e-15));
  CHECK(fg.max() == doctest::Approx(11.0).epsilon(1e-15));
  CHECK(fg.point(0) == doctest::Approx(fg.min()));
  CHECK(fg.point(1023) == doctest::Approx(fg.max()));
  CHECK(fg.spacing() == doctest::Approx(16.0 / 1023.0));
}

TEST_CASE("grid construction rejects degenerate axes") {
  CHECK_THROWS_AS(FrequencyGrid(0.0, -1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid(0.0, 0.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(-2.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(2.0, 0), std::invalid_argument);
  const double nan = std::nan("");
  CHECK_THROWS_AS(FrequencyGrid(nan, 1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid(0.0, nan, 16), std::invalid_argument);
}

TEST_CASE("conjugate grids satisfy dw dtau N = 2 pi and invert each other") {
  const FrequencyGrid fg(5.0, 4.0, 640);
  const TimeGrid tg = conjugate_time_grid(fg);
  CHECK(tg.n_points == fg.n_points);
  CHECK(fg.spacing() * tg.spacing() * fg.n_points ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  const FrequencyGrid back = conjugate_frequency_grid(tg, fg.center);
  CHECK(same_grid(back, fg));
}

TEST_CASE("time grid sample lookup") {
  const TimeGrid tg(10.0, 41);  // dtau = 0.5
  CHECK(tg.index_of(tg.point(7)) == 7);
  CHECK(tg.index_of(0.0) == 20);
  CHECK(tg.has_zero_sample());
  CHECK(tg.index_of(tg.point(7) + 0.25) == -1);   // between samples
  CHECK(tg.index_of(tg.max() + 0.5) == -1);       // outside the window
  const TimeGrid even(10.0, 40);  // samples sit at half-integer steps
  CHECK_FALSE(even.has_zero_sample());
}

TEST_CASE("transform of a centered Gaussian matches the continuous result") {
  // f(w) = exp(-(w - 3)^2 / (2 sigma^2)), sigma = 0.5, has the exact transform
  // f(tau) = sigma exp(-3 i tau) exp(-sigma^2 tau^2 / 2) under this convention.
  const double sigma = 0.5;
  const FrequencyGrid fg(3.0, 8.0, 1024);
  Spectrum spec(fg, Eigen::VectorXcd(fg.n_points));
  for (int k = 0; k < fg.n_points; ++k) {
    const double w = fg.point(k) - 3.0;
    spec.values[k] = std::exp(-w * w / (2.0 * sigma * sigma));
  }
  const TimeSignal sig = fourier_to_time(spec);
  double worst = 0.0;
  for (int j = 0; j < sig.grid.n_points; ++j) {
    const double tau = sig.grid.point(j);
    const std::complex<double> expected =
        sigma * std::exp(-I * 3.0 * tau) * std::exp(-sigma * sigma * tau * tau / 2.0);
    worst = std::max(worst, std::abs(sig.values[j] - expected));
  }
  CHECK(worst < 1e-10);
  CHECK_FALSE(sig.aliasing_warning);
}

TEST_CASE("transform of a single spectral spike is a pure phasor") {
  const FrequencyGrid fg(2.0, 4.0, 64);
  const int k0 = 10;
  Spectrum spec(fg, Eigen::VectorXcd::Zero(fg.n_points));
  spec.values[k0] = 1.0;
  const TimeSignal sig = fourier_to_time(spec);
  const double mag = fg.spacing() / root_two_pi;
  for (int j = 0; j < sig.grid.n_points; ++j) {
    const std::complex<double> expected =
        mag * std::exp(-I * fg.point(k0) * sig.grid.point(j));
    CHECK(std::abs(sig.values[j] - expected) < 1e-14);
  }
}

TEST_CASE("discrete Parseval identity holds to machine precision") {
  const FrequencyGrid fg(-1.0, 6.0, 512);
  Spectrum spec(fg, random_complex(fg.n_points, 12345u));
  const TimeSignal sig = fourier_to_time(spec);
  const double freq_energy = fg.spacing() * spec.values.squaredNorm();
  const double time_energy = sig.grid.spacing() * sig.values.squaredNorm();
  CHECK(freq_energy == doctest::Approx(time_energy).epsilon(1e-13));
}

TEST_CASE("frequency -> time -> frequency round trip is exact") {
  const FrequencyGrid fg(4.0, 3.0, 300);
  Spectrum spec(fg, random_complex(fg.n_points, 777u));
  const Spectrum back = fourier_to_frequency(fourier_to_time(spec), fg);
  CHECK((back.values - spec.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("time -> frequency -> time round trip is exact") {
  const TimeGrid tg(20.0, 256);
  TimeSignal sig(tg, random_complex(tg.n_points, 4242u));
  const Spectrum spec = fourier_to_frequency(sig);   // zero-centered conjugate axis
  const TimeSignal back = fourier_to_time(spec);
  REQUIRE(same_grid(back.grid, tg));
  CHECK((back.values - sig.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transform to a mismatched target grid is rejected") {
  const TimeGrid tg(20.0, 256);
  TimeSignal sig(tg, Eigen::VectorXcd::Zero(tg.n_points));
  CHECK_THROWS_AS(fourier_to_frequency(sig, FrequencyGrid(0.0, 1.0, 256)),
                  std::invalid_argument);
  CHECK_THROWS_AS(fourier_to_frequency(sig, FrequencyGrid(0.0, 1.0, 128)),
                  std::invalid_argument);
}

TEST_CASE("convolution of Gaussians adds their variances") {
  // Unit-area Gaussians: g_1.5 * g_2.0 = g_2.5 exactly in the continuum.
  const TimeGrid tg(40.0, 2049);
  const TimeSignal a = gaussian_pulse(tg, 1.5);
  const TimeSignal b = gaussian_pulse(tg, 2.0);
  const TimeSignal c = convolve(a, b);
  const TimeSignal expected = gaussian_pulse(tg, 2.5);
  CHECK((c.values - expected.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("convolution with a discrete unit impulse is the identity") {
  // On an odd grid the tau = 0 sample exists; a spike of height 1/dtau is the
  // discrete delta, and the spectral-product convolution reproduces the partner.
  const TimeGrid tg(10.0, 257);
  TimeSignal spike(tg, Eigen::VectorXcd::Zero(tg.n_points));
  REQUIRE(tg.index_of(0.0) == 128);
  spike.values[128] = 1.0 / tg.spacing();
  TimeSignal b(tg, random_complex(tg.n_points, 2024u));
  const TimeSignal c = convolve(spike, b);
  CHECK((c.values - b.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("convolution is commutative and linear") {
  const TimeGrid tg(15.0, 128);
  TimeSignal a(tg, random_complex(tg.n_points, 1u));
  TimeSignal b(tg, random_complex(tg.n_points, 2u));
  TimeSignal c(tg, random_complex(tg.n_points, 3u));

  const TimeSignal ab = convolve(a, b);
  const TimeSignal ba = convolve(b, a);
  CHECK((ab.values - ba.values).cwiseAbs().maxCoeff() < 1e-12);

  TimeSignal combo(tg, (2.0 * b.values + c.values).eval());
  const TimeSignal lhs = convolve(a, combo);
  const Eigen::VectorXcd rhs = 2.0 * ab.values + convolve(a, c).values;
  CHECK((lhs.values - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("convolution rejects signals on different grids") {
  TimeSignal a(TimeGrid(10.0, 64), Eigen::VectorXcd::Zero(64));
  TimeSignal b(TimeGrid(12.0, 64), Eigen::VectorXcd::Zero(64));
  CHECK_THROWS_AS(convolve(a, b), std::invalid_argument);
}

TEST_CASE("non-finite samples are rejected with the caller's name") {
  const FrequencyGrid fg(0.0, 1.0, 16);
  Spectrum spec(fg, Eigen::VectorXcd::Zero(16));
  spec.values[3] = std::nan("");
  CHECK_THROWS_WITH_AS(fourier_to_time(spec),
                       "fourier_to_time: non-finite sample in spectrum",
                       std::invalid_argument);
  Spectrum short_spec(fg, Eigen::VectorXcd::Zero(8));
  CHECK_THROWS_AS(fourier_to_time(short_spec), std::invalid_argument);
}

TEST_CASE("under-resolved spectra raise the aliasing warning") {
  // Odd point count so the grid carries an exact zero sample; the narrow
  // feature then lives on one sample and the time signal cannot decay.
  const FrequencyGrid fg(0.0, 4.0, 129);
  // Much narrower than the grid step: the time-domain result cannot decay
  // inside the window, so its edges carry energy.
  Spectrum narrow(fg, Eigen::VectorXcd(fg.n_points));
  Spectrum wide(fg, Eigen::VectorXcd(fg.n_points));
  for (int k = 0; k < fg.n_points; ++k) {
    const double w = fg.point(k);
    narrow.values[k] = std::exp(-w * w / (2.0 * 0.01 * 0.01));
    wide.values[k] = std::exp(-w * w / (2.0 * 1.0 * 1.0));
  }
  CHECK(fourier_to_time(narrow).aliasing_warning);
  CHECK_FALSE(fourier_to_time(wide).aliasing_warning);
}

TEST_CASE("edge energy fraction measures the window tails") {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(64);
  v[32] = 1.0;
  CHECK(edge_energy_fraction(v) == doctest::Approx(0.0));
  v[0] = 1.0;
  CHECK(edge_energy_fraction(v) == doctest::Approx(0.5));
  CHECK(edge_energy_fraction(Eigen::VectorXcd::Zero(16)) == doctest::Approx(0.0));
}

TEST_CASE("pulse extent in micrometers") {
  // c * 2 ps = 599.584916 um; the wavelength only tags the pulse.
  CHECK(units::pulse_extent_um(1064.0, 2.0) ==
        doctest::Approx(599.584916).epsilon(1e-12));
  CHECK(units::pulse_extent_um(800.0, 2.0) ==
        doctest::Approx(599.584916).epsilon(1e-12));
  CHECK_THROWS_AS(units::pulse_extent_um(-1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(units::pulse_extent_um(1064.0, 0.0), std::invalid_argument);
  CHECK(units::ev_inverse_to_fs(1.0) == doctest::Approx(0.6582119569));
}

}
