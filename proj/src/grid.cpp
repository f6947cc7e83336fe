#include "homspec/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace homspec {

namespace {

void check_axis(const char* what, double extent, int n_points) {
  if (!std::isfinite(extent) || extent <= 0.0)
    throw std::invalid_argument(std::string(what) + ": extent must be positive and finite");
  if (n_points < 2)
    throw std::invalid_argument(std::string(what) + ": need at least 2 points, got " +
                                std::to_string(n_points));
}

}

FrequencyGrid::FrequencyGrid(double center_, double half_width_, int n_points_)
    : center(center_), half_width(half_width_), n_points(n_points_) {
  check_axis("FrequencyGrid", half_width, n_points);
  if (!std::isfinite(center))
    throw std::invalid_argument("FrequencyGrid: center must be finite");
}

TimeGrid::TimeGrid(double half_span_, int n_points_)
    : half_span(half_span_), n_points(n_points_) {
  check_axis("TimeGrid", half_span, n_points);
}

int TimeGrid::index_of(double t, double tol) const {
  const double x = (t - min()) / spacing();
  const double r = std::round(x);
  if (std::abs(x - r) > tol) return -1;
  const int j = static_cast<int>(r);
  return (j >= 0 && j < n_points) ? j : -1;
}

TimeGrid conjugate_time_grid(const FrequencyGrid& fg) {
  const double dtau = 2.0 * std::numbers::pi / (fg.n_points * fg.spacing());
  return TimeGrid(0.5 * (fg.n_points - 1) * dtau, fg.n_points);
}

FrequencyGrid conjugate_frequency_grid(const TimeGrid& tg, double center) {
  const double dw = 2.0 * std::numbers::pi / (tg.n_points * tg.spacing());
  return FrequencyGrid(center, 0.5 * (tg.n_points - 1) * dw, tg.n_points);
}

bool same_grid(const FrequencyGrid& a, const FrequencyGrid& b, double rel_tol) {
  if (a.n_points != b.n_points) return false;
  const double scale = std::max(std::abs(a.half_width), std::abs(b.half_width));
  return std::abs(a.center - b.center) <= rel_tol * scale &&
         std::abs(a.half_width - b.half_width) <= rel_tol * scale;
}

bool same_grid(const TimeGrid& a, const TimeGrid& b, double rel_tol) {
  if (a.n_points != b.n_points) return false;
  const double scale = std::max(std::abs(a.half_span), std::abs(b.half_span));
  return std::abs(a.half_span - b.half_span) <= rel_tol * scale;
}

}
