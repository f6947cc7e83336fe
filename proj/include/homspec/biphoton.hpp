#pragma once

#include <complex>
#include <variant>

#include "homspec/signal.hpp"

namespace homspec {

// sin(x)/x with the removable singularity filled in.
double sinc(double x);

// Downconversion pair amplitude from a pump of bandwidth σ_p through a crystal of
// length L with group slownesses k' (time per length): a pump envelope on ω_a + ω_b
// times a phase-matching sinc. Derived walk-off times T_a, T_b and the entanglement
// time T_ent = T_a - T_b are in eV^-1.
struct SincPdcParams {
  double omega_p = 12.0;     // pump carrier, eV
  double sigma_p = 0.1;      // pump bandwidth, eV
  double crystal_length = 1.0;
  double kprime_a = 0.0;     // group slowness of each field, (1/eV) per length unit
  double kprime_b = 0.0;
  double kprime_p = 0.0;

  double time_a() const { return (kprime_a - kprime_p) * crystal_length; }
  double time_b() const { return (kprime_b - kprime_p) * crystal_length; }
  double entanglement_time() const { return time_a() - time_b(); }

  void validate() const;
};

// Double-Gaussian pair amplitude with independent sum (σ+) and difference (σ-)
// bandwidths; σ- > 2σ+ gives frequency anticorrelation, σ- = 2σ+ factorizes.
struct GaussianBiphotonParams {
  double omega_p = 12.0;
  double sigma_plus = 0.1;
  double sigma_minus = 0.8;

  void validate() const;
};

// Monochromatic-pump limit: the pair lives on ω_a + ω_b = ω_p and is described by the
// one-dimensional profile sinc[(ω - ω_p/2) T_ent].
struct NarrowbandSincParams {
  double omega_p = 12.0;
  double t_ent = 10.0;  // eV^-1

  void validate() const;
};

std::complex<double> amplitude_sinc_pdc(const SincPdcParams& p, double omega_a, double omega_b);
std::complex<double> amplitude_gaussian(const GaussianBiphotonParams& p, double omega_a,
                                        double omega_b);
double amplitude_narrowband(double omega_p, double t_ent, double omega);

// A pair state of one of the three families above.
struct BiphotonAmplitude {
  std::variant<SincPdcParams, GaussianBiphotonParams, NarrowbandSincParams> params;

  double omega_p() const;
  bool is_narrowband() const {
    return std::holds_alternative<NarrowbandSincParams>(params);
  }

  // Two-argument amplitude Φ(ω_a, ω_b); rejected for the narrowband family, which is
  // one-dimensional by construction.
  std::complex<double> value(double omega_a, double omega_b) const;

  // Anti-diagonal profile in the frame shifted by ω_p/2:
  // Φ(ω_p/2 + w, ω_p/2 - w), defined for every family.
  std::complex<double> slice(double w) const;

  void validate() const;
};

// Φ sampled on a tensor grid of two identical frequency axes, normalised so that
// ΣΣ |Φ|² dω² = 1. values(i, j) = Φ(axis_i, axis_j).
struct SampledAmplitude {
  FrequencyGrid axis;
  Eigen::MatrixXcd values;
};

SampledAmplitude sample_biphoton(const BiphotonAmplitude& phi, const FrequencyGrid& axis);

// Anti-diagonal slice sampled on a zero-centered frequency grid in the shifted frame.
Spectrum slice_spectrum(const BiphotonAmplitude& phi, const FrequencyGrid& detuning_axis);

// Effective one-photon wavepacket of the pair collapsed on the pump energy surface:
// G(τ) = (2π)^(-1/2) Integral dω Φ(ω, ω_p - ω) e^{-iωτ}, computed in the shifted frame
// (the carrier e^{-i ω_p τ / 2} is dropped; downstream coincidence formulas absorb it).
TimeSignal pump_slice_g(const BiphotonAmplitude& phi, const TimeGrid& tg);

}
