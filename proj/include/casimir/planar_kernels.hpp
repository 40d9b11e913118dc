#pragma once

// Per-(zeta, k_perp) building blocks of the planar three-layer problem:
// decay constants, Fresnel coefficients on the imaginary axis, the
// multiple-reflection factor 1/d_q and the position kernel chi_q(z).

#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

enum class Polarization { s, p };

/// Exponents beyond this (in units of kappa1 * a) are treated as exactly zero.
inline constexpr double max_decay_exponent = 700.0;

/// sqrt(k_perp^2 + eps zeta^2 / c^2).
inline double kappa(double eps, double zeta, double k_perp) {
  if (!(eps >= 1.0)) throw DomainError("kappa: eps must be >= 1");
  if (!(zeta >= 0.0) || !(k_perp >= 0.0)) throw DomainError("kappa: zeta and k_perp must be >= 0");
  if (zeta == 0.0 && k_perp == 0.0) throw DomainError("kappa: zeta = k_perp = 0 makes the mode function singular");
  const double q = zeta / constants::c;
  return std::sqrt(k_perp * k_perp + eps * q * q);
}

struct Reflection {
  double s;
  double p;

  double operator[](Polarization q) const { return q == Polarization::s ? s : p; }
};

/// Gap/wall reflection coefficients; medium 1 is the gap, medium 2 the wall.
inline Reflection fresnel(double kappa1, double kappa2, double eps1, double eps2) {
  if (!(kappa1 > 0.0) || !(kappa2 > 0.0) || !(eps1 > 0.0) || !(eps2 > 0.0))
    throw DomainError("fresnel: all inputs must be positive");
  return {(kappa2 - kappa1) / (kappa2 + kappa1), (eps1 * kappa2 - eps2 * kappa1) / (eps1 * kappa2 + eps2 * kappa1)};
}

/// Same as fresnel() but parametrised by the wall/gap permittivity ratio,
/// which stays meaningful in the zero-frequency limits (ratio may be 0 or inf).
inline Reflection fresnel_from_ratio(double kappa1, double kappa2, double eps_ratio) {
  const double rs = (kappa2 - kappa1) / (kappa2 + kappa1);
  double rp;
  if (std::isinf(eps_ratio))
    rp = -1.0;
  else
    rp = (kappa2 - eps_ratio * kappa1) / (kappa2 + eps_ratio * kappa1);
  return {rs, rp};
}

/// 1/d_q = r^2 e^{-2 kappa1 a} / (1 - r^2 e^{-2 kappa1 a}).
inline double mode_sum(double r, double kappa1, double a) {
  if (!(a > 0.0)) throw DomainError("mode_sum: gap width must be positive");
  if (kappa1 * a > max_decay_exponent) return 0.0;
  const double x = r * r * std::exp(-2.0 * kappa1 * a);
  if (!(x < 1.0)) throw DomainError("mode_sum: r^2 exp(-2 kappa1 a) >= 1");
  return x / (1.0 - x);
}

/// chi_q(z) = r e^{-kappa1 a} cosh(2 kappa1 (z - a/2)) / (1 - r^2 e^{-2 kappa1 a}),
/// evaluated as r (e^{-2 kappa1 z} + e^{-2 kappa1 (a - z)}) / (2 (1 - r^2 e^{-2 kappa1 a}))
/// so that no intermediate exceeds one.
inline double chi(double r, double kappa1, double a, double z) {
  if (!(a > 0.0)) throw DomainError("chi: gap width must be positive");
  if (!(z >= 0.0 && z <= a)) throw DomainError("chi: z must lie inside the gap [0, a]");
  const auto decay = [](double exponent) { return exponent > 2.0 * max_decay_exponent ? 0.0 : std::exp(-exponent); };
  const double x = r * r * decay(2.0 * kappa1 * a);
  if (!(x < 1.0)) throw DomainError("chi: r^2 exp(-2 kappa1 a) >= 1");
  const double w = std::min(z, a - z);
  return r * 0.5 * (decay(2.0 * kappa1 * w) + decay(2.0 * kappa1 * (a - w))) / (1.0 - x);
}

/// Everything the Casimir integrands need at one (zeta, k_perp).
struct SpectralPoint {
  double zeta;
  double k_perp;
  double kappa1;
  double kappa2;
  double eps1;
  double eps2;
  double r_s;
  double r_p;
};

inline SpectralPoint make_spectral_point(double eps1, double eps2, double zeta, double k_perp) {
  const double k1 = kappa(eps1, zeta, k_perp);
  const double k2 = kappa(eps2, zeta, k_perp);
  const auto r = fresnel(k1, k2, eps1, eps2);
  return {zeta, k_perp, k1, k2, eps1, eps2, r.s, r.p};
}

}  // namespace casimir
