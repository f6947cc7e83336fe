#include "homspec/phase_matching.hpp"

#include <cmath>
#include <stdexcept>

namespace homspec {

void MoleculeCloud::validate() const {
  if (positions.empty())
    throw std::invalid_argument("MoleculeCloud: needs at least one emitter position");
  for (const auto& r : positions)
    if (!r.allFinite())
      throw std::invalid_argument("MoleculeCloud: non-finite emitter position");
  if (!delta_k.allFinite())
    throw std::invalid_argument("MoleculeCloud: non-finite momentum mismatch");
}

std::complex<double> phase_matching_factor(const MoleculeCloud& cloud) {
  cloud.validate();
  if (cloud.delta_k.isZero(0.0))
    return {1.0, 0.0};
  std::complex<double> sum = 0.0;
  for (const auto& r : cloud.positions) {
    const double phase = cloud.delta_k.dot(r);
    sum += std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return sum / static_cast<double>(cloud.positions.size());
}

}
