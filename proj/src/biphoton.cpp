#include "homspec/biphoton.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "homspec/fourier.hpp"

namespace homspec {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* type, const char* name) {
  if (!std::isfinite(v) || v <= 0.0)
    throw std::invalid_argument(std::string(type) + ": " + name +
                                " must be positive and finite");
}

}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

void SincPdcParams::validate() const {
  require_positive(omega_p, "SincPdcParams", "omega_p");
  require_positive(sigma_p, "SincPdcParams", "sigma_p");
  require_positive(crystal_length, "SincPdcParams", "crystal_length");
  for (double k : {kprime_a, kprime_b, kprime_p})
    if (!std::isfinite(k))
      throw std::invalid_argument("SincPdcParams: group slownesses must be finite");
  if (entanglement_time() == 0.0)
    throw std::invalid_argument(
        "SincPdcParams: equal group delays give T_ent = 0 (no entanglement time)");
}

void GaussianBiphotonParams::validate() const {
  require_positive(omega_p, "GaussianBiphotonParams", "omega_p");
  require_positive(sigma_plus, "GaussianBiphotonParams", "sigma_plus");
  require_positive(sigma_minus, "GaussianBiphotonParams", "sigma_minus");
}

void NarrowbandSincParams::validate() const {
  require_positive(omega_p, "NarrowbandSincParams", "omega_p");
  if (!std::isfinite(t_ent) || t_ent == 0.0)
    throw std::invalid_argument("NarrowbandSincParams: t_ent must be non-zero and finite");
}

std::complex<double> amplitude_sinc_pdc(const SincPdcParams& p, double omega_a,
                                        double omega_b) {
  const double mismatch = omega_a + omega_b - p.omega_p;
  const double pump = std::exp(-mismatch * mismatch / (2.0 * p.sigma_p * p.sigma_p)) /
                      std::sqrt(two_pi * p.sigma_p * p.sigma_p);
  const double arg =
      (omega_a - 0.5 * p.omega_p) * p.time_a() + (omega_b - 0.5 * p.omega_p) * p.time_b();
  return pump * sinc(arg);
}

std::complex<double> amplitude_gaussian(const GaussianBiphotonParams& p, double omega_a,
                                        double omega_b) {
  const double sum = omega_a + omega_b - p.omega_p;
  const double diff = omega_a - omega_b;
  const double norm = 1.0 / std::sqrt(two_pi * p.sigma_plus * p.sigma_minus);
  return norm * std::exp(-sum * sum / (16.0 * p.sigma_plus * p.sigma_plus)) *
         std::exp(-diff * diff / (4.0 * p.sigma_minus * p.sigma_minus));
}

double amplitude_narrowband(double omega_p, double t_ent, double omega) {
  return sinc((omega - 0.5 * omega_p) * t_ent);
}

double BiphotonAmplitude::omega_p() const {
  return std::visit([](const auto& p) { return p.omega_p; }, params);
}

void BiphotonAmplitude::validate() const {
  std::visit([](const auto& p) { p.validate(); }, params);
}

std::complex<double> BiphotonAmplitude::value(double omega_a, double omega_b) const {
  if (const auto* p = std::get_if<SincPdcParams>(&params))
    return amplitude_sinc_pdc(*p, omega_a, omega_b);
  if (const auto* p = std::get_if<GaussianBiphotonParams>(&params))
    return amplitude_gaussian(*p, omega_a, omega_b);
  throw std::invalid_argument(
      "BiphotonAmplitude: the narrowband family has no two-frequency amplitude; "
      "use slice()");
}

std::complex<double> BiphotonAmplitude::slice(double w) const {
  if (const auto* p = std::get_if<NarrowbandSincParams>(&params))
    return amplitude_narrowband(p->omega_p, p->t_ent, 0.5 * p->omega_p + w);
  const double wp = omega_p();
  return value(0.5 * wp + w, 0.5 * wp - w);
}

SampledAmplitude sample_biphoton(const BiphotonAmplitude& phi, const FrequencyGrid& axis) {
  phi.validate();
  if (phi.is_narrowband())
    throw std::invalid_argument(
        "sample_biphoton: the narrowband family is one-dimensional and cannot be "
        "sampled on a two-frequency grid");
  const int n = axis.n_points;
  SampledAmplitude out{axis, Eigen::MatrixXcd(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.values(i, j) = phi.value(axis.point(i), axis.point(j));
  const double dw = axis.spacing();
  const double norm = out.values.squaredNorm() * dw * dw;
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("sample_biphoton: amplitude vanishes on the grid");
  out.values /= std::sqrt(norm);
  return out;
}

Spectrum slice_spectrum(const BiphotonAmplitude& phi, const FrequencyGrid& detuning_axis) {
  phi.validate();
  if (std::abs(detuning_axis.center) > 1e-12 * detuning_axis.half_width)
    throw std::invalid_argument(
        "slice_spectrum: detuning axis must be centered on zero (shifted frame)");
  Spectrum out(detuning_axis, Eigen::VectorXcd(detuning_axis.n_points));
  for (int k = 0; k < detuning_axis.n_points; ++k)
    out.values[k] = phi.slice(detuning_axis.point(k));
  return out;
}

TimeSignal pump_slice_g(const BiphotonAmplitude& phi, const TimeGrid& tg) {
  return fourier_to_time(slice_spectrum(phi, conjugate_frequency_grid(tg, 0.0)));
}

}
