#pragma once

// Abraham-Minkowski (Lifshitz) Casimir pressure in the symmetric
// three-layer cavity:
//
//   P = -(kB T / pi) Sum'_m  int_0^inf dk k kappa1 Sum_{q=s,p} 1/d_q
//
// Pressure is negative for attraction. The stress outside the gap vanishes
// and the gap stress is position independent, so the result carries no z.

#include <cmath>
#include <limits>

#include "casimir/cavity.hpp"
#include "casimir/diagnostics.hpp"
#include "casimir/planar_kernels.hpp"
#include "casimir/spectral_engine.hpp"

namespace casimir {

struct PressureResult {
  double pressure = 0.0;  // Pa, negative = attraction
  double te_part = 0.0;   // s polarization
  double tm_part = 0.0;   // p polarization
  double error = 0.0;
  ConvergenceReport report;
};

enum class Interface { left, right };

namespace detail {

/// Upper limit in kappa1 for a transverse cutoff (k_perp <= cutoff).
inline double kappa_upper(const MediaAtFrequency& media, double k_cutoff) {
  if (std::isinf(k_cutoff)) return k_cutoff;
  return std::sqrt(k_cutoff * k_cutoff + media.kappa0_sq);
}

/// int dy y^power / d_q(y) over y = 2 a kappa1 in [2 a kappa0, 2 a kappa_upper).
/// Using k dk = kappa1 dkappa1 removes the light-cone square root.
inline SpectralTerm mode_integral(const MediaAtFrequency& media, double a, Polarization q, int power,
                                  double k_cutoff, const QuadratureSpec& spec) {
  if (media.identical) return {};
  const double y0 = 2.0 * a * media.kappa0();
  const double y_up = 2.0 * a * kappa_upper(media, k_cutoff);
  auto f = [&](double y) {
    const double kappa1 = y / (2.0 * a);
    const double r = media.reflection(kappa1)[q];
    const double d = mode_sum(r, kappa1, a);
    return power == 2 ? y * y * d : d;
  };
  const auto res = integrate_semi_infinite(f, y0, 1.0, y_up, spec.tolerance());
  return {res.value, res.error, res.evaluations, res.converged};
}

inline QuadratureSpec am_effective_spec(const QuadratureSpec& spec) {
  if (!spec.k_cutoff || spec.force_am_cutoff) return spec;
  warn("finite k_perp cutoff ignored for the Abraham-Minkowski pressure (set force_am_cutoff to apply it)");
  QuadratureSpec out = spec;
  out.k_cutoff.reset();
  return out;
}

/// Sum over frequencies of (2a)^-3 int dy y^2 / d_q, scaled by `to_pascal`.
inline SumResult polarization_sum(const CavitySpec& cavity, Polarization q, const QuadratureSpec& spec,
                                  double to_pascal, bool inv_eps_weight = false) {
  const double a = cavity.gap_width;
  const double norm = 1.0 / (8.0 * a * a * a);
  const double cutoff = spec.upper_k();
  auto term = [&](double zeta) {
    const auto media = media_at(cavity, zeta);
    auto t = mode_integral(media, a, q, 2, cutoff, spec);
    const double w = inv_eps_weight ? media.inv_eps1 : 1.0;
    t.value *= norm * w;
    t.error *= norm * w;
    return t;
  };
  return thermal_frequency_sum(term, cavity.temperature, spec, constants::c / (2.0 * a), to_pascal);
}

}  // namespace detail

/// Lifshitz pressure between the walls, with TE/TM breakdown.
inline PressureResult am_pressure(const CavitySpec& cavity, const QuadratureSpec& spec_in = {}) {
  cavity.validate();
  spec_in.validate();
  PressureResult out;
  if (cavity.gap_equals_wall()) return out;

  const auto spec = detail::am_effective_spec(spec_in);
  const auto te = detail::polarization_sum(cavity, Polarization::s, spec, -1.0 / pi);
  const auto tm = detail::polarization_sum(cavity, Polarization::p, spec, -1.0 / pi);
  out.te_part = te.value;
  out.tm_part = tm.value;
  out.pressure = te.value + tm.value;
  out.error = te.error + tm.error;
  out.report = te.report;
  out.report.merge(tm.report);
  return out;
}

/// Stress difference across one wall/gap interface, outside minus gap:
/// <T_zz,outside> - <T_zz,gap> = -<T_zz,gap> since the outside stress
/// vanishes. Both interfaces return this same value (equal to am_pressure).
/// The z-directed force per area on the left wall is -value, on the right
/// wall +value.
inline double am_stress_difference(Interface side, const CavitySpec& cavity, const QuadratureSpec& spec = {}) {
  (void)side;  // mirror-symmetric cavity: identical for both interfaces
  return am_pressure(cavity, spec).pressure;
}

/// Ideal-mirror walls (r_s^2 = r_p^2 = 1) around a vacuum gap.
inline PressureResult ideal_metal_limit(double a, double T, const QuadratureSpec& spec = {}) {
  CavitySpec cavity;
  cavity.gap_width = a;
  cavity.temperature = T;
  cavity.wall = WallMaterial::perfect_mirror();
  cavity.gap = PermittivityModel::vacuum();
  return am_pressure(cavity, spec);
}

}  // namespace casimir
