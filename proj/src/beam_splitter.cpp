#include "homspec/beam_splitter.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace homspec {

namespace {
constexpr std::complex<double> I{0.0, 1.0};
}

bool BeamSplitter::balanced(double tol) const {
  return std::abs(transmittance - 0.5) <= tol && std::abs(reflectance - 0.5) <= tol;
}

void BeamSplitter::validate() const {
  if (!std::isfinite(transmittance) || !std::isfinite(reflectance) ||
      transmittance < 0.0 || reflectance < 0.0)
    throw std::invalid_argument("BeamSplitter: T and R must be finite and non-negative");
  if (std::abs(transmittance + reflectance - 1.0) > 1e-12)
    throw std::invalid_argument("BeamSplitter: lossless splitter requires T + R = 1");
  if (!std::isfinite(delay))
    throw std::invalid_argument("BeamSplitter: delay must be finite");
}

Eigen::Matrix2cd beam_splitter_matrix(const BeamSplitter& bs, double omega) {
  bs.validate();
  const double t = std::sqrt(bs.transmittance);
  const double r = std::sqrt(bs.reflectance);
  Eigen::Matrix2cd m;
  m(0, 0) = t;
  m(0, 1) = I * r * std::exp(I * omega * bs.delay);
  m(1, 0) = I * r * std::exp(-I * omega * bs.delay);
  m(1, 1) = t;
  return m;
}

}
