#pragma once

#include <numbers>

namespace casimir {

/// SI values (CODATA 2018). eps0 is derived from mu0 and c so that
/// c^2 * eps0 * mu0 == 1 holds to rounding.
struct PhysicalConstants {
  static constexpr double c = 299792458.0;
  static constexpr double mu0 = 1.25663706212e-6;
  static constexpr double eps0 = 1.0 / (mu0 * c * c);
  static constexpr double hbar = 1.054571817e-34;
  static constexpr double kB = 1.380649e-23;
};

using constants = PhysicalConstants;

inline constexpr double pi = std::numbers::pi;

/// Riemann zeta(3), used by the classical high-temperature limit.
inline constexpr double apery = 1.2020569031595942854;

}  // namespace casimir
