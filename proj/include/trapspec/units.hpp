#pragma once

// Hartree atomic units throughout. Conversions happen only at the I/O boundary.

#include <numbers>

namespace trapspec::units {

inline constexpr double au_time_s = 2.4188843265e-17;
inline constexpr double amu_in_me = 1822.888486;
inline constexpr double pi = std::numbers::pi;

inline double omega_from_kHz(double nu_kHz) { return 2.0 * pi * nu_kHz * 1e3 * au_time_s; }
inline double kHz_from_omega(double omega) { return omega / (2.0 * pi * 1e3 * au_time_s); }
inline double me_from_amu(double m_u) { return m_u * amu_in_me; }

}  // namespace trapspec::units
