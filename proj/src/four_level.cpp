#include "homspec/four_level.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homspec {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

void require_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0)
    throw std::invalid_argument(std::string("FourLevelSystem: ") + name +
                                " must be positive and finite");
}

}

void FourLevelSystem::validate() const {
  require_finite_positive(omega_e1g, "omega_e1g");
  require_finite_positive(omega_e2e1, "omega_e2e1");
  require_finite_positive(omega_fe2, "omega_fe2");
  require_finite_positive(gamma_e1g, "gamma_e1g");
  require_finite_positive(gamma_e2g, "gamma_e2g");
  require_finite_positive(gamma_fg, "gamma_fg");
  for (double mu : {mu_e1g, mu_e2e1, mu_fe2})
    if (!std::isfinite(mu))
      throw std::invalid_argument("FourLevelSystem: dipole moments must be finite");
}

void ClassicalDrive::validate() const {
  if (!std::isfinite(omega1) || !std::isfinite(omega2) || omega1 <= 0.0 || omega2 <= 0.0)
    throw std::invalid_argument("ClassicalDrive: drive frequencies must be positive and finite");
}

std::complex<double> chi3(const FourLevelSystem& s, double omega_a, double omega_b,
                          double omega_c) {
  const std::complex<double> d1 = omega_a - s.omega_e1g + I * s.gamma_e1g;
  const std::complex<double> d2 = omega_a + omega_b - s.omega_e2g() + I * s.gamma_e2g;
  const std::complex<double> d3 = omega_a + omega_b + omega_c - s.omega_fg() + I * s.gamma_fg;
  if (d1 == 0.0 || d2 == 0.0 || d3 == 0.0)
    throw std::domain_error("chi3: pole on the real axis (zero dephasing at exact resonance)");
  return -(s.mu_fe2 * s.mu_e2e1 * s.mu_e1g) / (d3 * d2 * d1);
}

std::complex<double> chi3_photon(const FourLevelSystem& s, const ClassicalDrive& d,
                                 double omega) {
  return chi3(s, d.omega1, d.omega2, omega - d.omega1 - d.omega2);
}

TimeSignal chi3_time(const FourLevelSystem& s, const ClassicalDrive& d, const TimeGrid& tg,
                     double frame_shift) {
  // chi3_photon(ω) = A / (ω - p) with a single pole p = ω_fg - i γ_fg; the two drive
  // denominators are ω-independent. Contour integration of the defining transform gives
  //   chi(τ) = -i sqrt(2π) A e^{-i p τ} θ(τ).
  const std::complex<double> drive1 = d.omega1 - s.omega_e1g + I * s.gamma_e1g;
  const std::complex<double> drive2 = d.omega1 + d.omega2 - s.omega_e2g() + I * s.gamma_e2g;
  if (drive1 == 0.0 || drive2 == 0.0)
    throw std::domain_error("chi3_time: pole on the real axis (zero dephasing at exact resonance)");
  const std::complex<double> amplitude = -(s.mu_fe2 * s.mu_e2e1 * s.mu_e1g) / (drive2 * drive1);
  const std::complex<double> front =
      -I * std::sqrt(2.0 * std::numbers::pi) * amplitude;
  const double carrier = s.omega_fg() - frame_shift;

  TimeSignal out(tg, Eigen::VectorXcd::Zero(tg.n_points));
  for (int j = 0; j < tg.n_points; ++j) {
    const double tau = tg.point(j);
    if (tau < 0.0) continue;
    const double step = (tau == 0.0) ? 0.5 : 1.0;
    out.values[j] = front * step * std::exp(-I * carrier * tau) * std::exp(-s.gamma_fg * tau);
  }

  const double dtau = tg.spacing();
  const bool carrier_unresolved = std::abs(carrier) * dtau > std::numbers::pi;
  const bool decay_unresolved = s.gamma_fg * dtau > 0.5;
  const bool tail_alive = std::exp(-s.gamma_fg * tg.max()) > 1e-8;
  out.aliasing_warning = carrier_unresolved || decay_unresolved || tail_alive;
  return out;
}

std::complex<double> transmission(const FourLevelSystem& s, const ClassicalDrive& d,
                                  double omega, double a0) {
  if (!std::isfinite(a0) || a0 < 0.0)
    throw std::invalid_argument("transmission: coupling A0 must be non-negative and finite");
  return 1.0 - I * a0 * chi3_photon(s, d, omega);
}

}
