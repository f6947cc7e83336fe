#pragma once

#include <Eigen/Dense>

namespace homspec {

// Lossless beam splitter with intensity transmittance/reflectance and a longitudinal
// displacement delay (eV^-1) of one input arm.
struct BeamSplitter {
  double transmittance = 0.5;
  double reflectance = 0.5;
  double delay = 0.0;

  BeamSplitter with_delay(double d) const { return {transmittance, reflectance, d}; }
  bool balanced(double tol = 1e-12) const;

  // Rejects T + R != 1 (beyond 1e-12), values outside [0, 1], non-finite delay.
  void validate() const;
};

// Frequency-domain mixing matrix
//   [ sqrt(T)              i sqrt(R) e^{+iωΔ} ]
//   [ i sqrt(R) e^{-iωΔ}   sqrt(T)            ]
// unitary for every ω whenever T + R = 1.
Eigen::Matrix2cd beam_splitter_matrix(const BeamSplitter& bs, double omega);

}
