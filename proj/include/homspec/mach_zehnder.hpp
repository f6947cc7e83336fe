#pragma once

#include <functional>

#include "homspec/beam_splitter.hpp"
#include "homspec/signal.hpp"

namespace homspec {

// Frequency-dependent single-arm filter and a dispersive phase for the reference arm.
using ArmFilter = std::function<std::complex<double>(double omega)>;
using ArmPhase = std::function<double(double omega)>;

struct MziPorts {
  Spectrum port_a;  // amplitude leaving the second splitter toward detector a
  Spectrum port_b;
  double number_a = 0.0;  // dω Σ |ψ|² at each detector
  double number_b = 0.0;
};

// Single photon ε(ω) through a balanced two-splitter interferometer: the sample filter
// acts in one arm, the phase e^{iφ(ω)} in the other, and the second splitter carries
// the scan delay Δ. Both splitters must be balanced.
MziPorts mzi_ports(const Spectrum& photon, const ArmFilter& sample_filter,
                   const ArmPhase& reference_phase, const BeamSplitter& bs);

// Detector number difference S = n_a - n_b. With identical arms the photon exits
// toward detector b at zero delay, so a transparent sample with flat phase gives
// S(0) = -(total photon number) and S(Δ) oscillates at the photon carrier; a linear
// filter imprints S = -dω Σ |ε(ω)|² Re[F(ω) e^{-i(ωΔ + φ(ω))}].
double mzi_number_difference(const Spectrum& photon, const ArmFilter& sample_filter,
                             const ArmPhase& reference_phase, const BeamSplitter& bs);

}
