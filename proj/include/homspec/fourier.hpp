#pragma once

#include "homspec/signal.hpp"

namespace homspec {

// Transform convention throughout the library:
//   f(tau) = (2 pi)^(-1/2) Integral dω f(ω) e^{-i ω tau}
//   f(ω)   = (2 pi)^(-1/2) Integral dτ f(τ) e^{+i ω tau}
// Discretised with dω dτ N = 2π the pair is an exact DFT with explicit phase factors
// for the grid offsets, so round trips are exact to machine precision and the discrete
// Parseval identity Σ|f(ω)|² dω = Σ|f(τ)|² dτ holds exactly.

// Spectrum on its grid -> signal on the conjugate TimeGrid (symmetric about τ = 0).
TimeSignal fourier_to_time(const Spectrum& spec);

// Inverse direction onto an explicit conjugate grid (must satisfy dω dτ N = 2π within
// 1e-9 relative); the overload without a target uses the zero-centered conjugate grid.
Spectrum fourier_to_frequency(const TimeSignal& sig, const FrequencyGrid& target);
Spectrum fourier_to_frequency(const TimeSignal& sig);

// Continuous-convolution approximation (a * b)(τ) = Integral dt a(t) b(τ - t) on the
// shared grid, evaluated as the spectral product sqrt(2π) â b̂. Equals the δτ-scaled
// discrete convolution when the grid has a τ = 0 sample; commutative and linear exactly.
TimeSignal convolve(const TimeSignal& a, const TimeSignal& b);

// Fraction of |f|² carried by the outer `edge_fraction` of samples on each side.
double edge_energy_fraction(const Eigen::VectorXcd& values, double edge_fraction = 0.0625);

}
