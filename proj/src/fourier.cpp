#include "homspec/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace homspec {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::complex<double> I{0.0, 1.0};

// Energy at the window edges above this fraction marks the result as under-resolved.
constexpr double aliasing_energy_threshold = 0.01;

void check_conjugate(const FrequencyGrid& fg, const TimeGrid& tg, const char* what) {
  if (fg.n_points != tg.n_points)
    throw std::invalid_argument(std::string(what) + ": grids differ in point count");
  const double product = fg.spacing() * tg.spacing() * fg.n_points;
  if (std::abs(product - two_pi) > 1e-9 * two_pi)
    throw std::invalid_argument(std::string(what) +
                                ": grids are not conjugate (dω dτ N != 2π)");
}

}

void check_signal(const Spectrum& s, const char* what) {
  if (s.values.size() != s.grid.n_points)
    throw std::invalid_argument(std::string(what) + ": sample count does not match grid");
  if (!s.values.allFinite())
    throw std::invalid_argument(std::string(what) + ": non-finite sample in spectrum");
}

void check_signal(const TimeSignal& s, const char* what) {
  if (s.values.size() != s.grid.n_points)
    throw std::invalid_argument(std::string(what) + ": sample count does not match grid");
  if (!s.values.allFinite())
    throw std::invalid_argument(std::string(what) + ": non-finite sample in time signal");
}

double edge_energy_fraction(const Eigen::VectorXcd& values, double edge_fraction) {
  const int n = static_cast<int>(values.size());
  const int m = std::max(1, static_cast<int>(n * edge_fraction));
  const double total = values.squaredNorm();
  if (total == 0.0) return 0.0;
  const double edges = values.head(m).squaredNorm() + values.tail(m).squaredNorm();
  return edges / total;
}

TimeSignal fourier_to_time(const Spectrum& spec) {
  check_signal(spec, "fourier_to_time");
  const int n = spec.grid.n_points;
  const double dw = spec.grid.spacing();
  const double w0 = spec.grid.min();
  const TimeGrid tg = conjugate_time_grid(spec.grid);
  const double tau0 = tg.min();

  Eigen::VectorXcd pre(n);
  for (int k = 0; k < n; ++k)
    pre[k] = spec.values[k] * std::exp(-I * (k * dw * tau0));

  Eigen::FFT<double> fft;
  Eigen::VectorXcd transformed(n);
  fft.fwd(transformed, pre);

  const double scale = dw / std::sqrt(two_pi);
  TimeSignal out(tg, Eigen::VectorXcd(n));
  for (int j = 0; j < n; ++j)
    out.values[j] = scale * std::exp(-I * (w0 * tg.point(j))) * transformed[j];
  out.aliasing_warning =
      spec.aliasing_warning || edge_energy_fraction(out.values) > aliasing_energy_threshold;
  return out;
}

Spectrum fourier_to_frequency(const TimeSignal& sig, const FrequencyGrid& target) {
  check_signal(sig, "fourier_to_frequency");
  check_conjugate(target, sig.grid, "fourier_to_frequency");
  const int n = sig.grid.n_points;
  const double dt = sig.grid.spacing();
  const double tau0 = sig.grid.min();
  const double w0 = target.min();
  const double dw = target.spacing();

  Eigen::VectorXcd pre(n);
  for (int j = 0; j < n; ++j)
    pre[j] = sig.values[j] * std::exp(I * (w0 * sig.grid.point(j)));

  Eigen::FFT<double> fft;
  Eigen::VectorXcd transformed(n);
  fft.inv(transformed, pre);  // (1/N) Σ_j pre_j e^{+2π i jk/N}

  const double scale = n * dt / std::sqrt(two_pi);
  Spectrum out(target, Eigen::VectorXcd(n));
  for (int k = 0; k < n; ++k)
    out.values[k] = scale * std::exp(I * (k * dw * tau0)) * transformed[k];
  out.aliasing_warning =
      sig.aliasing_warning || edge_energy_fraction(out.values) > aliasing_energy_threshold;
  return out;
}

Spectrum fourier_to_frequency(const TimeSignal& sig) {
  return fourier_to_frequency(sig, conjugate_frequency_grid(sig.grid, 0.0));
}

TimeSignal convolve(const TimeSignal& a, const TimeSignal& b) {
  check_signal(a, "convolve");
  check_signal(b, "convolve");
  if (!same_grid(a.grid, b.grid))
    throw std::invalid_argument("convolve: signals live on different time grids");

  const FrequencyGrid fg = conjugate_frequency_grid(a.grid, 0.0);
  const Spectrum fa = fourier_to_frequency(a, fg);
  const Spectrum fb = fourier_to_frequency(b, fg);
  Spectrum product(fg, std::sqrt(two_pi) * fa.values.cwiseProduct(fb.values).eval());
  TimeSignal c = fourier_to_time(product);
  c.grid = a.grid;  // identical up to round-off; keep the callers' grid object
  c.aliasing_warning = c.aliasing_warning || a.aliasing_warning || b.aliasing_warning;
  return c;
}

}
