#pragma once

#include <complex>

#include "homspec/signal.hpp"

namespace homspec {

// Ladder of levels g, e1, e2, f with consecutive transition energies (eV), transition
// dipoles (arbitrary units) and dephasing rates (eV) of the coherences reached by the
// ladder-climbing pathway. Composite gaps are derived, never stored.
struct FourLevelSystem {
  double omega_e1g = 3.0;
  double omega_e2e1 = 2.0;
  double omega_fe2 = 1.0;
  double mu_e1g = 1.0;
  double mu_e2e1 = 1.0;
  double mu_fe2 = 1.0;
  double gamma_e1g = 0.05;
  double gamma_e2g = 0.05;
  double gamma_fg = 0.05;

  double omega_e2g() const { return omega_e1g + omega_e2e1; }
  double omega_fg() const { return omega_e1g + omega_e2e1 + omega_fe2; }

  // Rejects non-positive transition energies or dephasings (poles must sit strictly
  // below the real axis) and non-finite dipoles.
  void validate() const;
};

// Two classical narrowband drive fields climbing g -> e1 -> e2.
struct ClassicalDrive {
  double omega1 = 3.0;
  double omega2 = 2.0;

  static ClassicalDrive resonant(const FourLevelSystem& s) {
    return ClassicalDrive{s.omega_e1g, s.omega_e2e1};
  }
  void validate() const;
};

// Third-order susceptibility of the single ladder-climbing pathway,
//   chi3 = -mu_fe2 mu_e2e1 mu_e1g / [(ω_a+ω_b+ω_c-ω_fg+iγ_fg)(ω_a+ω_b-ω_e2g+iγ_e2g)(ω_a-ω_e1g+iγ_e1g)].
// Computes for whatever rates the caller passes (tests exercise the γ -> -γ conjugation
// symmetry); an exact pole on the real axis is rejected.
std::complex<double> chi3(const FourLevelSystem& s, double omega_a, double omega_b,
                          double omega_c);

// Susceptibility seen by a probe photon of frequency ω with the two drives fixed:
// the third field closes the energy balance at ω_c = ω - ω1 - ω2.
std::complex<double> chi3_photon(const FourLevelSystem& s, const ClassicalDrive& d,
                                 double omega);

// Time-domain response chi(τ) = (2π)^(-1/2) Integral dω chi3_photon(ω) e^{-iωτ}, sampled
// on the grid. In the photon variable the susceptibility is a single pole below the real
// axis, so the transform is evaluated by exact contour integration: a causal one-sided
// exponential with carrier ω_fg - frame_shift and decay γ_fg (the sample at the τ = 0
// jump takes the half value). frame_shift moves the carrier when the caller works in a
// shifted frequency frame. Warnings: aliasing_warning is set when the grid under-resolves
// the carrier or the decay, or the tail has not decayed by the grid edge.
TimeSignal chi3_time(const FourLevelSystem& s, const ClassicalDrive& d, const TimeGrid& tg,
                     double frame_shift = 0.0);

// Thin-sample transmission T(ω) = 1 - i A0 chi3_photon(ω); A0 carries the coupling and
// number density in arbitrary units.
std::complex<double> transmission(const FourLevelSystem& s, const ClassicalDrive& d,
                                  double omega, double a0);

}
