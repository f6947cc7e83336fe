#pragma once

#include <Eigen/Dense>
#include <complex>

#include "homspec/grid.hpp"

namespace homspec {

// Complex samples over a grid. aliasing_warning is set by transform routines when the
// result looks under-resolved (significant energy at the window edges); it propagates
// through convolve.
template <class GridT>
struct Sampled {
  GridT grid;
  Eigen::VectorXcd values;
  bool aliasing_warning = false;

  Sampled() = default;
  Sampled(GridT g, Eigen::VectorXcd v) : grid(g), values(std::move(v)) {}
};

using Spectrum = Sampled<FrequencyGrid>;
using TimeSignal = Sampled<TimeGrid>;

// Throws std::invalid_argument naming `what` if any sample is NaN or infinite,
// or if the sample count does not match the grid.
void check_signal(const Spectrum& s, const char* what);
void check_signal(const TimeSignal& s, const char* what);

}
