#include "homspec/units.hpp"

#include <cmath>
#include <stdexcept>

namespace homspec::units {

double pulse_extent_um(double wavelength_nm, double duration_ps) {
  if (!std::isfinite(wavelength_nm) || wavelength_nm <= 0.0)
    throw std::invalid_argument("pulse_extent_um: wavelength must be a positive number of nm");
  if (!std::isfinite(duration_ps) || duration_ps <= 0.0)
    throw std::invalid_argument("pulse_extent_um: duration must be a positive number of ps");
  return speed_of_light_m_per_s * (duration_ps * 1e-12) * 1e6;
}

}
