#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace homspec {

// A cloud of N point emitters at fixed positions with a collective momentum mismatch
// Δk between absorbed and emitted fields.
struct MoleculeCloud {
  std::vector<Eigen::Vector3d> positions;
  Eigen::Vector3d delta_k = Eigen::Vector3d::Zero();

  void validate() const;
};

// Collective phase-matching factor f(Δk) = N^(-1) Σ_α e^{i Δk · r_α}.
// f(0) = 1 exactly; |f| <= 1 always.
std::complex<double> phase_matching_factor(const MoleculeCloud& cloud);

}
