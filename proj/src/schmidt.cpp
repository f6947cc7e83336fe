#include "homspec/schmidt.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "homspec/fourier.hpp"

namespace homspec {

namespace {

void check_square(const SampledAmplitude& phi) {
  if (phi.values.rows() != phi.axis.n_points || phi.values.cols() != phi.axis.n_points) {
    throw std::invalid_argument("sampled amplitude shape does not match its axis");
  }
  if (!phi.values.allFinite()) {
    throw std::invalid_argument("sampled amplitude holds non-finite values");
  }
}

void check_normalized(const SampledAmplitude& phi) {
  const double dw = phi.axis.spacing();
  const double norm = phi.values.squaredNorm() * dw * dw;
  if (std::abs(norm - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "sampled amplitude must be unit-normalized under the grid measure, got "
        << norm;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> schmidt_kernels(const SampledAmplitude& phi) {
  check_square(phi);
  check_normalized(phi);
  const double dw = phi.axis.spacing();
  Eigen::MatrixXcd kernel_a = phi.values * phi.values.adjoint() * dw;
  Eigen::MatrixXcd kernel_b =
      (phi.values.transpose() * phi.values.conjugate()) * dw;
  return {std::move(kernel_a), std::move(kernel_b)};
}

SchmidtDecomposition schmidt_decompose(const SampledAmplitude& phi,
                                       double truncation_threshold,
                                       double reconstruction_tol) {
  check_square(phi);
  check_normalized(phi);
  if (!(truncation_threshold >= 0.0) || !(reconstruction_tol > 0.0)) {
    throw std::invalid_argument("schmidt tolerances must be non-negative");
  }
  const double dw = phi.axis.spacing();

  // Under the grid measure the amplitude matrix scaled by dω has the Schmidt weights
  // as squared singular values.
  const Eigen::MatrixXcd a = phi.values * dw;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sigma = svd.singularValues();
  Eigen::MatrixXcd u = svd.matrixU();
  Eigen::MatrixXcd v = svd.matrixV();

  int rank = 0;
  for (Eigen::Index n = 0; n < sigma.size(); ++n) {
    if (sigma[n] * sigma[n] >= truncation_threshold) {
      rank = static_cast<int>(n) + 1;
    }
  }
  if (rank == 0) {
    throw std::invalid_argument("all mode weights fall below the truncation threshold");
  }

  // The dropped weight is the squared L² deficit of the truncated expansion.
  double dropped = 0.0;
  for (Eigen::Index n = rank; n < sigma.size(); ++n) {
    dropped += sigma[n] * sigma[n];
  }
  if (dropped > reconstruction_tol) {
    std::ostringstream msg;
    msg << "truncated mode expansion misses the amplitude by " << dropped
        << "; the grid is too coarse for this state or the threshold too aggressive";
    throw std::invalid_argument(msg.str());
  }

  // A common phase on each (ψ, φ) pair leaves the expansion invariant; pin it so the
  // largest-magnitude sample of ψ_n is real and positive.
  for (int n = 0; n < rank; ++n) {
    Eigen::Index imax = 0;
    u.col(n).cwiseAbs().maxCoeff(&imax);
    const std::complex<double> pivot = u(imax, n);
    if (std::abs(pivot) > 0.0) {
      const std::complex<double> fix = std::conj(pivot) / std::abs(pivot);
      u.col(n) *= fix;
      v.col(n) *= fix;
    }
  }

  SchmidtDecomposition d;
  d.axis = phi.axis;
  d.truncation_threshold = truncation_threshold;
  d.reconstruction_error = dropped;
  d.weights = sigma.head(rank).array().square();
  const double root_dw = std::sqrt(dw);
  d.modes_a = u.leftCols(rank) / root_dw;
  d.modes_b = v.leftCols(rank).conjugate() / root_dw;
  return d;
}

double schmidt_number(const SchmidtDecomposition& d) {
  const double sum_sq = d.weights.squaredNorm();
  if (!(sum_sq > 0.0)) {
    throw std::invalid_argument("mode weights must carry nonzero mass");
  }
  return 1.0 / sum_sq;
}

TemporalModes temporal_modes(const SchmidtDecomposition& d) {
  TemporalModes out;
  out.grid = conjugate_time_grid(d.axis);
  const int n = d.axis.n_points;
  out.u.resize(n, d.rank());
  out.v.resize(n, d.rank());
  for (int k = 0; k < d.rank(); ++k) {
    Spectrum mode{d.axis, d.modes_a.col(k)};
    TimeSignal ut = fourier_to_time(mode);
    mode.values = d.modes_b.col(k);
    TimeSignal vt = fourier_to_time(mode);
    out.u.col(k) = ut.values;
    out.v.col(k) = vt.values;
    out.aliasing_warning = out.aliasing_warning || ut.aliasing_warning || vt.aliasing_warning;
  }
  return out;
}

BroadbandCoincidence::BroadbandCoincidence(const SchmidtDecomposition& d,
                                           const TimeSignal* chi) {
  const TemporalModes tm = temporal_modes(d);
  grid_ = tm.grid;
  v_ = tm.v;
  aliasing_warning_ = tm.aliasing_warning;
  sqrt_weights_ = d.weights.array().sqrt();

  if (chi == nullptr) {
    u_filtered_ = tm.u;
  } else {
    check_signal(*chi, "broadband sample response");
    if (!same_grid(chi->grid, grid_)) {
      throw std::invalid_argument(
          "sample response must live on the conjugate grid of the mode axis");
    }
    u_filtered_.resize(tm.u.rows(), tm.u.cols());
    for (int k = 0; k < d.rank(); ++k) {
      TimeSignal mode{grid_, tm.u.col(k)};
      const TimeSignal filtered = convolve(mode, *chi);
      u_filtered_.col(k) = filtered.values;
      aliasing_warning_ = aliasing_warning_ || filtered.aliasing_warning;
    }
  }
}

double BroadbandCoincidence::operator()(const BeamSplitter& bs, const SignalScale& scale,
                                        double t, double tau) const {
  bs.validate();
  scale.validate();
  const double delta = bs.delay;
  const int i_t = grid_.index_of(t);
  const int i_ttau = grid_.index_of(t + tau);
  const int i_mirror = grid_.index_of(t + tau - delta);
  const int i_shift = grid_.index_of(t + delta);
  if (i_t < 0 || i_ttau < 0 || i_mirror < 0 || i_shift < 0) {
    throw std::invalid_argument(
        "detection times t, t + tau, t + tau - delay and t + delay must all land on "
        "grid samples");
  }
  std::complex<double> x{0.0, 0.0};
  std::complex<double> y{0.0, 0.0};
  for (Eigen::Index k = 0; k < sqrt_weights_.size(); ++k) {
    x += sqrt_weights_[k] * v_(i_t, k) * u_filtered_(i_ttau, k);
    y += sqrt_weights_[k] * v_(i_mirror, k) * u_filtered_(i_shift, k);
  }
  const double tr = bs.transmittance;
  const double re = bs.reflectance;
  return scale.p0 * (tr * tr * std::norm(x) + re * re * std::norm(y) -
                     2.0 * tr * re * std::real(std::conj(x) * y));
}

double broadband_coincidence(const SchmidtDecomposition& d, const TimeSignal* chi,
                             const BeamSplitter& bs, const SignalScale& scale, double t,
                             double tau) {
  return BroadbandCoincidence(d, chi)(bs, scale, t, tau);
}

PulseShaping reshape_pulse(const SchmidtDecomposition& d, const Eigen::VectorXcd& target) {
  if (target.size() != d.axis.n_points) {
    throw std::invalid_argument("target spectrum size does not match the mode axis");
  }
  if (!target.allFinite()) {
    throw std::invalid_argument("target spectrum holds non-finite values");
  }
  const double norm = target.norm();
  if (!(norm > 0.0)) {
    throw std::invalid_argument("target spectrum must be nonzero");
  }
  const double dw = d.axis.spacing();
  PulseShaping out;
  out.coefficients = d.modes_a.adjoint() * target * dw;
  out.synthesized = d.modes_a * out.coefficients;
  out.residual = (target - out.synthesized).norm() / norm;
  return out;
}

PulseShaping reshape_pulse_at(const SchmidtDecomposition& d, double omega_s, int n_modes) {
  const double dw = d.axis.spacing();
  const double pos = (omega_s - d.axis.min()) / dw;
  const double rounded = std::round(pos);
  if (rounded < 0.0 || rounded >= static_cast<double>(d.axis.n_points) ||
      std::abs(pos - rounded) > 1e-6) {
    throw std::invalid_argument("target frequency must land on the mode axis");
  }
  if (n_modes < 0 || n_modes > d.rank()) {
    n_modes = d.rank();
  }
  if (n_modes == 0) {
    throw std::invalid_argument("pulse shaping needs at least one mode");
  }
  SchmidtDecomposition head = d;
  head.weights = d.weights.head(n_modes);
  head.modes_a = d.modes_a.leftCols(n_modes);
  head.modes_b = d.modes_b.leftCols(n_modes);

  // Unit L² spike at the chosen sample: value 1/sqrt(dω) so dω Σ |A|² = 1.
  Eigen::VectorXcd spike = Eigen::VectorXcd::Zero(d.axis.n_points);
  spike[static_cast<Eigen::Index>(rounded)] = 1.0 / std::sqrt(dw);
  return reshape_pulse(head, spike);
}

}
