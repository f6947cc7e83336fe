#pragma once

namespace homspec::units {

inline constexpr double speed_of_light_m_per_s = 299792458.0;
inline constexpr double hbar_ev_s = 6.582119569e-16;

// 1 eV^-1 of time expressed in femtoseconds (hbar = 1 throughout the library).
inline constexpr double ev_inverse_in_fs = 0.6582119569;

inline double ev_inverse_to_fs(double t) { return t * ev_inverse_in_fs; }

// Spatial extent c * duration of a classical pulse, in micrometers.
// The wavelength tags the pulse for the record; it does not enter the extent.
double pulse_extent_um(double wavelength_nm, double duration_ps);

}
