#pragma once

namespace homspec {

// Uniform frequency grid: n_points samples covering [center - half_width, center + half_width],
// endpoints included. Energies in eV (hbar = 1).
struct FrequencyGrid {
  double center = 0.0;
  double half_width = 0.0;
  int n_points = 0;

  FrequencyGrid() = default;
  FrequencyGrid(double center, double half_width, int n_points);

  double spacing() const { return 2.0 * half_width / (n_points - 1); }
  double min() const { return center - half_width; }
  double max() const { return center + half_width; }
  double point(int k) const { return min() + k * spacing(); }
};

// Uniform time grid symmetric about tau = 0, samples at (-half_span + j dtau), dtau > 0.
// Times in eV^-1.
struct TimeGrid {
  double half_span = 0.0;
  int n_points = 0;

  TimeGrid() = default;
  TimeGrid(double half_span, int n_points);

  double spacing() const { return 2.0 * half_span / (n_points - 1); }
  double min() const { return -half_span; }
  double max() const { return half_span; }
  double point(int j) const { return -half_span + j * spacing(); }

  // Sample index of time t, or -1 if t does not land on a sample within tol * dtau.
  int index_of(double t, double tol = 1e-6) const;
  bool has_zero_sample(double tol = 1e-9) const { return index_of(0.0, tol) >= 0; }
};

// Conjugate grids tied by dω dτ N = 2π, so transforms between them are exact DFT pairs.
TimeGrid conjugate_time_grid(const FrequencyGrid& fg);
FrequencyGrid conjugate_frequency_grid(const TimeGrid& tg, double center = 0.0);

bool same_grid(const FrequencyGrid& a, const FrequencyGrid& b, double rel_tol = 1e-9);
bool same_grid(const TimeGrid& a, const TimeGrid& b, double rel_tol = 1e-9);

}
