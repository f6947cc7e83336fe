#include "homspec/mach_zehnder.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace homspec {

namespace {
constexpr std::complex<double> imag_unit{0.0, 1.0};
}

MziPorts mzi_ports(const Spectrum& photon, const ArmFilter& sample_filter,
                   const ArmPhase& reference_phase, const BeamSplitter& bs) {
  check_signal(photon, "interferometer input photon");
  bs.validate();
  if (!bs.balanced()) {
    throw std::invalid_argument("interferometer splitters must be balanced");
  }
  if (!sample_filter || !reference_phase) {
    throw std::invalid_argument("arm filter and reference phase must be callable");
  }

  const int n = photon.grid.n_points;
  MziPorts out;
  out.port_a.grid = photon.grid;
  out.port_b.grid = photon.grid;
  out.port_a.values.resize(n);
  out.port_b.values.resize(n);

  const BeamSplitter first = bs.with_delay(0.0);
  for (int k = 0; k < n; ++k) {
    const double omega = photon.grid.point(k);

    const Eigen::Matrix2cd split_in = beam_splitter_matrix(first, omega);
    const std::complex<double> arm_a = split_in(0, 0) * photon.values[k];
    const std::complex<double> arm_b = split_in(1, 0) * photon.values[k];

    const std::complex<double> f = sample_filter(omega);
    const double phi = reference_phase(omega);
    if (!std::isfinite(f.real()) || !std::isfinite(f.imag()) || !std::isfinite(phi)) {
      throw std::invalid_argument("arm filter or phase produced a non-finite value");
    }
    const std::complex<double> fed_a = f * arm_a;
    const std::complex<double> fed_b = std::exp(imag_unit * phi) * arm_b;

    const Eigen::Matrix2cd split_out = beam_splitter_matrix(bs, omega);
    out.port_a.values[k] = split_out(0, 0) * fed_a + split_out(0, 1) * fed_b;
    out.port_b.values[k] = split_out(1, 0) * fed_a + split_out(1, 1) * fed_b;
  }

  const double dw = photon.grid.spacing();
  out.number_a = dw * out.port_a.values.squaredNorm();
  out.number_b = dw * out.port_b.values.squaredNorm();
  return out;
}

double mzi_number_difference(const Spectrum& photon, const ArmFilter& sample_filter,
                             const ArmPhase& reference_phase, const BeamSplitter& bs) {
  const MziPorts ports = mzi_ports(photon, sample_filter, reference_phase, bs);
  return ports.number_a - ports.number_b;
}

}
