#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "homspec/mach_zehnder.hpp"

using namespace homspec;

namespace {

constexpr double sigma = 0.1;
constexpr double omega_0 = 6.0;

// Unit-norm single-photon spectrum, dω Σ |ε|² = 1.
Spectrum test_photon(int n = 4096) {
  const FrequencyGrid fg(omega_0, 0.8, n);
  Spectrum photon(fg, Eigen::VectorXcd(n));
  const double front = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
  for (int k = 0; k < n; ++k) {
    const double d = fg.point(k) - omega_0;
    photon.values[k] = front * std::exp(-d * d / (4.0 * sigma * sigma));
  }
  return photon;
}

const ArmFilter transparent = [](double) { return std::complex<double>{1.0, 0.0}; };
const ArmPhase flat_phase = [](double) { return 0.0; };

}  // namespace

TEST_SUITE("mzi") {

TEST_CASE("identical arms route the photon entirely to detector b") {
  const Spectrum photon = test_photon();
  const MziPorts ports =
      mzi_ports(photon, transparent, flat_phase, BeamSplitter{0.5, 0.5, 0.0});
  // Destructive interference toward detector a is exact sample by sample.
  CHECK(ports.port_a.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ports.number_a == 0.0);
  const double total = photon.grid.spacing() * photon.values.squaredNorm();
  CHECK(ports.number_b == doctest::Approx(total).epsilon(1e-12));
  CHECK(mzi_number_difference(photon, transparent, flat_phase,
                              BeamSplitter{0.5, 0.5, 0.0}) ==
        doctest::Approx(-total).epsilon(1e-12));
}

TEST_CASE("delay fringes oscillate at the carrier under a gaussian envelope") {
  // S(Δ) = -dω Σ |ε|² cos(ωΔ) = -cos(ω0 Δ) e^{-σ²Δ²/2} for a unit gaussian photon.
  const Spectrum photon = test_photon();
  for (double delta : {0.3, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double s = mzi_number_difference(photon, transparent, flat_phase,
                                           BeamSplitter{0.5, 0.5, delta});
    const double expected =
        -std::cos(omega_0 * delta) * std::exp(-0.5 * sigma * sigma * delta * delta);
    CHECK(s == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("a flat reference phase shifts the fringe") {
  const Spectrum photon = test_photon(1024);
  const ArmPhase quarter = [](double) { return 0.5 * std::numbers::pi; };
  // With φ = π/2 the zero-delay fringe moves from -1 to 0.
  const double s =
      mzi_number_difference(photon, transparent, quarter, BeamSplitter{0.5, 0.5, 0.0});
  CHECK(std::abs(s) < 1e-10);
}

TEST_CASE("a purely dispersive sample conserves the photon number") {
  const Spectrum photon = test_photon(1024);
  const ArmFilter chirp = [](double omega) {
    return std::exp(std::complex<double>{0.0, 0.02 * (omega - 6.0) * (omega - 6.0)});
  };
  const ArmPhase ramp = [](double omega) { return 0.3 * omega; };
  const MziPorts ports =
      mzi_ports(photon, chirp, ramp, BeamSplitter{0.5, 0.5, 1.5});
  const double total = photon.grid.spacing() * photon.values.squaredNorm();
  CHECK(ports.number_a + ports.number_b == doctest::Approx(total).epsilon(1e-12));
  CHECK(ports.number_a > 0.0);
  CHECK(ports.number_b > 0.0);
}

TEST_CASE("an absorbing sample removes photon number") {
  const Spectrum photon = test_photon(1024);
  const ArmFilter absorber = [](double) { return std::complex<double>{0.9, 0.0}; };
  const MziPorts ports =
      mzi_ports(photon, absorber, flat_phase, BeamSplitter{0.5, 0.5, 0.0});
  const double total = photon.grid.spacing() * photon.values.squaredNorm();
  // Half the photon meets the sample: 1 - (1 - 0.81)/2 of the number survives.
  CHECK(ports.number_a + ports.number_b ==
        doctest::Approx(total * (1.0 - 0.19 / 2.0)).epsilon(1e-12));
  CHECK(ports.number_a + ports.number_b < total);
}

TEST_CASE("weak absorption reads out linearly in the number difference") {
  const Spectrum photon = test_photon(1024);
  const double a = 1e-8;
  const ArmFilter weak = [a](double) { return std::complex<double>{1.0 - a, 0.0}; };
  const double total = photon.grid.spacing() * photon.values.squaredNorm();
  const double s_ref = mzi_number_difference(photon, transparent, flat_phase,
                                             BeamSplitter{0.5, 0.5, 0.0});
  const double s_weak =
      mzi_number_difference(photon, weak, flat_phase, BeamSplitter{0.5, 0.5, 0.0});
  // S = -dω Σ |ε|² Re F at zero delay, so the readout shifts by exactly a · total.
  CHECK(s_weak - s_ref == doctest::Approx(a * total).epsilon(1e-6));
}

TEST_CASE("misuse is rejected") {
  const Spectrum photon = test_photon(128);
  CHECK_THROWS_WITH_AS(mzi_ports(photon, transparent, flat_phase,
                                 BeamSplitter{0.3, 0.7, 0.0}),
                       "interferometer splitters must be balanced", std::invalid_argument);
  CHECK_THROWS_AS(mzi_ports(photon, ArmFilter{}, flat_phase, BeamSplitter{0.5, 0.5, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(mzi_ports(photon, transparent, ArmPhase{}, BeamSplitter{0.5, 0.5, 0.0}),
                  std::invalid_argument);
  const ArmFilter poisoned = [](double omega) {
    return omega > 6.0 ? std::complex<double>{std::numeric_limits<double>::quiet_NaN(), 0.0}
                       : std::complex<double>{1.0, 0.0};
  };
  CHECK_THROWS_WITH_AS(mzi_ports(photon, poisoned, flat_phase, BeamSplitter{0.5, 0.5, 0.0}),
                       "arm filter or phase produced a non-finite value",
                       std::invalid_argument);
}

}
