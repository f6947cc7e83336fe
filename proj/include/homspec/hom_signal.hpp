#pragma once

#include <optional>
#include <vector>

#include "homspec/beam_splitter.hpp"
#include "homspec/biphoton.hpp"
#include "homspec/four_level.hpp"
#include "homspec/signal.hpp"

namespace homspec {

// Overall detection scale P0. It bundles pair flux, detector efficiency and the
// phase-matching weight |f(Δk)|²; the coincidence formulas only ever use the product.
struct SignalScale {
  double p0 = 1.0;
  void validate() const;
};

// A molecular sample of coupling strength A0 placed in interferometer arm 'a',
// driven by two classical fields.
struct SampleArm {
  FourLevelSystem system;
  ClassicalDrive drive;
  double coupling_a0 = 0.0;
  void validate() const;
};

// Plain convolution C = G * chi of the pair wavepacket with an arm response.
TimeSignal convolved_response(const TimeSignal& g, const TimeSignal& chi_tau);

// Applies the arm's thin-sample transmission multiplicatively: the spectrum sampled on
// a zero-centered detuning axis (frame shifted by ω_p/2) is multiplied by
// T(w + ω_p/2) = 1 - i A0 chi3_photon(w + ω_p/2). Equivalent to convolving with
// δ(τ) + the susceptibility response in the time domain.
Spectrum arm_filtered_spectrum(const Spectrum& g, const SampleArm& arm, double omega_p);

// Pair wavepacket behind arm 'a': pump slice of Φ, filtered by the sample when present.
TimeSignal build_response(const std::optional<SampleArm>& arm, const BiphotonAmplitude& phi,
                          const TimeGrid& tg);

// dτ Σ |C|², the norm entering the coincidence background.
double integrated_norm(const TimeSignal& c);

// True when |C| at the first or last sample exceeds 1e-6 of its peak, i.e. the grid
// window truncates the response.
bool edge_decay_warning(const TimeSignal& c);

// Time-resolved coincidence probability for detections τ apart,
//   P(τ) = P0 { T²|C(τ)|² + R²|C(2Δ-τ)|² - T R [C*(τ) C(2Δ-τ) e^{-iν(τ-Δ)} + c.c.] },
// with Δ the splitter delay. ν is the residual carrier frequency of C: zero when C was
// built in the frame shifted by ω_p/2 (the usual path), ω_p for a lab-frame C. Both τ
// and the mirrored time 2Δ - τ must land on grid samples.
double coincidence_tau(const TimeSignal& c, double nu, const BeamSplitter& bs,
                       const SignalScale& scale, double tau);

// Time-integrated coincidence probability
//   P(Δ) = n0 - P0 T R dτ Σ [C*(Δ+τ) C(Δ-τ) e^{-iντ} + c.c.],
//   n0   = P0 (T² + R²) dτ Σ |C|²,
// evaluated by pairing grid samples; Δ must be a multiple of dτ/2 relative to the grid.
double coincidence_integrated(const TimeSignal& c, double nu, const BeamSplitter& bs,
                              const SignalScale& scale);

struct HomScan {
  std::vector<double> deltas;
  Eigen::VectorXd values;
  double n0 = 0.0;
  bool edge_warning = false;
  bool aliasing_warning = false;
};

// P(Δ) over a delay axis for a pair state, optionally with the sample in arm 'a'.
HomScan scan_delta(const std::optional<SampleArm>& arm, const BiphotonAmplitude& phi,
                   const TimeGrid& tg, const BeamSplitter& bs,
                   const std::vector<double>& deltas, const SignalScale& scale);

struct CoincidenceMap {
  std::vector<double> deltas;      // row coordinate
  std::vector<double> pump_freqs;  // column coordinate
  Eigen::MatrixXd values;          // values(i, j) = P(deltas[i]; pump_freqs[j])
  Eigen::VectorXd n0;              // background per pump column
  bool edge_warning = false;
  bool aliasing_warning = false;

  // All entries finite and non-negative within -1e-12.
  void validate() const;
};

// Delay scan repeated over pump carrier frequencies; the pair amplitude is rebuilt at
// each ω_p. Columns are independent, so the result is identical for any thread count.
CoincidenceMap scan_2d(const std::optional<SampleArm>& arm, const BiphotonAmplitude& phi,
                       const TimeGrid& tg, const BeamSplitter& bs,
                       const std::vector<double>& deltas,
                       const std::vector<double>& pump_freqs, const SignalScale& scale,
                       int threads = 1);

// Same pair state with the pump carrier replaced.
BiphotonAmplitude with_pump(const BiphotonAmplitude& phi, double omega_p);

// Singles rates behind the splitter for a two-photon input, one photon per input arm.
// The inter-arm coherence <a†(ω) b(ω)> vanishes for such states, so the splitter mixes
// only the marginal intensities and the delay never enters: rates are Δ-independent.
struct SinglesRates {
  double detector_a = 0.0;
  double detector_b = 0.0;
};
SinglesRates singles_rates(const SampledAmplitude& phi, const BeamSplitter& bs);

// (n0 - min P) / n0 over the scan.
double dip_visibility(const HomScan& scan);

// dΔ Σ |P(Δ) - P(-Δ)| / dΔ Σ P(Δ) over delays whose mirror is on the axis.
double asymmetry_metric(const HomScan& scan);

struct FeatureDiagnostics {
  double center = 0.0;       // pump frequency of the sample-induced modulation
  double fwhm_delta = 0.0;   // width of the modulation along the delay axis
  double strength = 0.0;     // peak of the integrated modulation over pump columns
  int peak_column = 0;
};

// Locates the sample-induced modulation of a map against the bare (A0 = 0) scan of the
// same state. The profile |P/n0 - P_bare/n0_bare| removes the flat absorption pedestal;
// the center is the centroid of its column-integrated strength above half maximum.
FeatureDiagnostics analyze_feature(const CoincidenceMap& map, const HomScan& bare);

}
