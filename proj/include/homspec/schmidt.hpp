#pragma once

#include <utility>

#include "homspec/beam_splitter.hpp"
#include "homspec/biphoton.hpp"
#include "homspec/hom_signal.hpp"
#include "homspec/signal.hpp"

namespace homspec {

// Reduced single-photon kernels κ_a(ω, ω') = dω'' Σ Φ(ω, ω'') Φ*(ω', ω'') and the
// partner kernel for the second photon. Hermitian, positive semidefinite, and
// trace κ dω = 1 for a normalized amplitude.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> schmidt_kernels(const SampledAmplitude& phi);

// Mode expansion Φ(ω_a, ω_b) = Σ_n sqrt(λ_n) ψ_n(ω_a) φ_n(ω_b) with orthonormal modes
// under the grid measure (dω Σ ψ_m* ψ_n = δ_mn) and weights sorted descending, Σλ = 1.
// The phase of each pair is fixed by making the largest-magnitude sample of ψ_n real
// and positive, so results are reproducible across runs.
struct SchmidtDecomposition {
  FrequencyGrid axis;
  Eigen::VectorXd weights;    // λ_n after truncation
  Eigen::MatrixXcd modes_a;   // ψ_n as columns
  Eigen::MatrixXcd modes_b;   // φ_n as columns
  double truncation_threshold = 0.0;
  // Residual weight ‖Φ - Σ sqrt(λ)ψφ‖² under the grid measure (the squared L² deficit
  // of the truncated expansion; equals the dropped weight mass up to roundoff).
  double reconstruction_error = 0.0;

  int rank() const { return static_cast<int>(weights.size()); }
};

// Decomposes a normalized amplitude on a square grid; modes with λ_n below the
// threshold are dropped. Throws when the input is not unit-normalized or when the
// truncated expansion misses the input by more than reconstruction_tol, which signals
// a grid too coarse for the state.
SchmidtDecomposition schmidt_decompose(const SampledAmplitude& phi,
                                       double truncation_threshold = 1e-8,
                                       double reconstruction_tol = 1e-6);

// Participation ratio K = 1 / Σ λ²; 1 for a separable state.
double schmidt_number(const SchmidtDecomposition& d);

// Mode functions carried to the time domain on the conjugate grid of the axis.
struct TemporalModes {
  TimeGrid grid;
  Eigen::MatrixXcd u;  // time-domain ψ_n as columns
  Eigen::MatrixXcd v;  // time-domain φ_n as columns
  bool aliasing_warning = false;
};
TemporalModes temporal_modes(const SchmidtDecomposition& d);

// Time-resolved coincidence for a broadband pair written in Schmidt form, with an
// optional sample response chi(τ) convolved into the arm-a modes. For detections at
// t and t + τ with splitter delay Δ,
//   P = P0 { T²|X|² + R²|Y|² - 2 T R Re(X* Y) },
//   X = Σ sqrt(λ_k) v_k(t) u~_k(t+τ),  Y = Σ sqrt(λ_k) v_k(t+τ-Δ) u~_k(t+Δ),
// where u~ is the filtered arm-a mode. All three times must land on grid samples.
class BroadbandCoincidence {
 public:
  BroadbandCoincidence(const SchmidtDecomposition& d, const TimeSignal* chi);

  const TimeGrid& grid() const { return grid_; }
  bool aliasing_warning() const { return aliasing_warning_; }

  double operator()(const BeamSplitter& bs, const SignalScale& scale, double t,
                    double tau) const;

 private:
  TimeGrid grid_{1.0, 2};
  Eigen::VectorXd sqrt_weights_;
  Eigen::MatrixXcd u_filtered_;
  Eigen::MatrixXcd v_;
  bool aliasing_warning_ = false;
};

double broadband_coincidence(const SchmidtDecomposition& d, const TimeSignal* chi,
                             const BeamSplitter& bs, const SignalScale& scale, double t,
                             double tau);

// Projection of a target single-photon spectrum onto the arm-a Schmidt modes:
// coefficients a_n = dω Σ ψ_n* A, the synthesized spectrum Σ a_n ψ_n, and the relative
// L² residual of the part of the target outside the mode span.
struct PulseShaping {
  Eigen::VectorXcd coefficients;
  Eigen::VectorXcd synthesized;
  double residual = 0.0;
};
PulseShaping reshape_pulse(const SchmidtDecomposition& d, const Eigen::VectorXcd& target);

// Aims the synthesized spectrum at a single frequency by targeting a unit spike at the
// grid sample nearest ω_s (which must land on the axis); coefficients reduce to
// a_n ∝ ψ_n*(ω_s). Using more modes narrows the synthesized peak.
PulseShaping reshape_pulse_at(const SchmidtDecomposition& d, double omega_s,
                              int n_modes = -1);

}
