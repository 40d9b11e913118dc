#pragma once

// Raabe-Welsch gap stress <T_zz^RW(z)> in the symmetric three-layer cavity:
//
//   (kB T / pi) Sum'_m int dk k { kappa1 Sum_q (d_sq + d_pq / eps1) / d_q
//       - (eps1 zeta^2 / (2 kappa1 c^2)) (1 - 1/eps1) Sum_q (d_sq - d_pq) [1/d_q + chi_q(z)] }
//
// The stress outside the gap is taken to vanish (evaluated at infinity), so
// the RW pressure on the control volume is P^RW(z) = -<T_zz^RW(z)>.
//
// With k dk = kappa1 dkappa1 the second bracket becomes a plain kappa1
// integral of (eps1 - 1) zeta^2 / (2 c^2) [...]; at the interfaces that
// integrand tends to a nonzero constant and the k_perp integral grows
// linearly with its upper limit.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "casimir/casimir_am.hpp"
#include "casimir/cavity.hpp"
#include "casimir/errors.hpp"
#include "casimir/planar_kernels.hpp"
#include "casimir/spectral_engine.hpp"

namespace casimir {

/// Instrumented split of <T_zz^RW(z)> (all in Pa). value = first_bracket +
/// second_modes + second_position.
struct RwDecomposition {
  double first_bracket = 0.0;    // kappa1 (1/d_s + 1/(eps1 d_p))
  double second_modes = 0.0;     // -(...) (1/d_s - 1/d_p)
  double second_position = 0.0;  // -(...) (chi_s(z) - chi_p(z)); the only z dependence
  double zero_frequency_position = 0.0;  // m = 0 contribution to second_position
};

struct RwStressResult {
  double z = 0.0;
  double value = 0.0;  // <T_zz^RW(z)> [Pa]
  double error = 0.0;
  RwDecomposition parts;
  ConvergenceReport report;
};

struct StressProfileResult {
  std::vector<double> z_grid;
  std::vector<double> values;  // <T_zz^RW(z)> [Pa]
  std::optional<double> cutoff;
  std::vector<double> per_point_error;
  ConvergenceReport report;
  std::vector<RwDecomposition> parts;
};

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double correlation = 0.0;
  double max_residual = 0.0;
};

struct CutoffScanResult {
  double z = 0.0;
  std::vector<double> cutoffs;
  std::vector<double> values;  // P^RW(z; cutoff) = -<T_zz^RW> [Pa]
  double fitted_intercept = 0.0;  // c0 [Pa]
  double fitted_slope = 0.0;      // c1 [Pa m]
  double slope_stderr = 0.0;
  double correlation = 0.0;
  double fit_residual_fraction = 0.0;  // max |residual| / value range
  std::size_t fit_points = 0;
  std::optional<double> analytic_slope;  // only for z at an interface
  ConvergenceReport report;
};

struct NearInterfaceResult {
  bool has_divergent_part = false;
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double exponent_stderr = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> z;
  std::vector<double> z_dependent;  // <T_zz^RW(z)> - <T_zz^RW(a/2)> [Pa]
  ConvergenceReport report;
};

/// Ordinary least squares y = intercept + slope x.
inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ParameterError("linear fit needs at least two (x, y) pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ParameterError("linear fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
    fit.max_residual = std::max(fit.max_residual, std::abs(r));
  }
  fit.slope_stderr = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  fit.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  return fit;
}

namespace detail {

inline void check_rw_position(const CavitySpec& cavity, double z, const QuadratureSpec& spec) {
  const double a = cavity.gap_width;
  if (!(z >= 0.0 && z <= a)) throw DomainError("RW stress is defined inside the gap only (0 <= z <= a)");
  // Only a polarizable gap has the interface-divergent term.
  const bool polarizable = !cavity.gap_equals_wall() && !(cavity.gap == PermittivityModel::vacuum());
  if ((z == 0.0 || z == a) && !spec.k_cutoff && polarizable)
    throw DivergenceError("RW stress diverges at an interface without a k_perp cutoff",
                          "run cutoff_scan with a list of finite cutoffs to quantify the linear divergence");
}

/// int dy (1/d_s - 1/d_p) over y = 2 a kappa1.
inline SpectralTerm mode_difference_integral(const MediaAtFrequency& media, double a, double k_cutoff,
                                             const QuadratureSpec& spec) {
  if (media.identical) return {};
  const double y0 = 2.0 * a * media.kappa0();
  const double y_up = 2.0 * a * kappa_upper(media, k_cutoff);
  auto f = [&](double y) {
    const double kappa1 = y / (2.0 * a);
    const auto r = media.reflection(kappa1);
    return mode_sum(r.s, kappa1, a) - mode_sum(r.p, kappa1, a);
  };
  const auto res = integrate_semi_infinite(f, y0, 1.0, y_up, spec.tolerance());
  return {res.value, res.error, res.evaluations, res.converged};
}

/// int dy (chi_s(z) - chi_p(z)) over y = 2 a kappa1; the map scale follows
/// the decay length of e^{-2 kappa1 min(z, a - z)}.
inline SpectralTerm position_integral(const MediaAtFrequency& media, double a, double z, double k_cutoff,
                                      const QuadratureSpec& spec) {
  if (media.identical) return {};
  const double w = std::min(z, a - z);
  const double y0 = 2.0 * a * media.kappa0();
  const double y_up = 2.0 * a * kappa_upper(media, k_cutoff);
  const double scale = w > 0.0 ? std::max(a / w, 1.0) : 1.0;
  // chi_s - chi_p with the three exponentials shared between polarizations.
  auto f = [&](double y) {
    const double kappa1 = y / (2.0 * a);
    if (y * w / a > 2.0 * max_decay_exponent) return 0.0;
    const auto r = media.reflection(kappa1);
    const double e_near = std::exp(-2.0 * kappa1 * w);
    const double e_far = y > 2.0 * max_decay_exponent ? 0.0 : std::exp(-2.0 * kappa1 * (a - w));
    const double e_gap = y > 2.0 * max_decay_exponent ? 0.0 : std::exp(-y);
    const double xs = r.s * r.s * e_gap, xp = r.p * r.p * e_gap;
    if (!(xs < 1.0) || !(xp < 1.0)) throw DomainError("position integrand: r^2 exp(-2 kappa1 a) >= 1");
    return 0.5 * (e_near + e_far) * (r.s / (1.0 - xs) - r.p / (1.0 - xp));
  };
  const auto res = integrate_semi_infinite(f, y0, scale, y_up, spec.tolerance());
  return {res.value, res.error, res.evaluations, res.converged};
}

struct RwBulk {
  SumResult first_s;
  SumResult first_p;
  SumResult second_modes;
};

inline RwBulk rw_bulk(const CavitySpec& cavity, const QuadratureSpec& spec) {
  const double a = cavity.gap_width;
  const double zeta_scale = constants::c / (2.0 * a);
  const double cutoff = spec.upper_k();
  RwBulk out;
  out.first_s = polarization_sum(cavity, Polarization::s, spec, 1.0 / pi);
  out.first_p = polarization_sum(cavity, Polarization::p, spec, 1.0 / pi, true);
  auto term = [&](double zeta) -> SpectralTerm {
    const auto media = media_at(cavity, zeta);
    if (media.polarization_weight == 0.0) return {0.0, 0.0, 0, true};
    auto t = mode_difference_integral(media, a, cutoff, spec);
    const double w = -media.polarization_weight / (2.0 * a);
    t.value *= w;
    t.error *= std::abs(w);
    return t;
  };
  out.second_modes = thermal_frequency_sum(term, cavity.temperature, spec, zeta_scale, 1.0 / pi);
  return out;
}

inline SumResult rw_position(const CavitySpec& cavity, double z, const QuadratureSpec& spec) {
  const double a = cavity.gap_width;
  const double cutoff = spec.upper_k();
  auto term = [&](double zeta) -> SpectralTerm {
    const auto media = media_at(cavity, zeta);
    if (media.polarization_weight == 0.0) return {0.0, 0.0, 0, true};
    auto t = position_integral(media, a, z, cutoff, spec);
    const double w = -media.polarization_weight / (2.0 * a);
    t.value *= w;
    t.error *= std::abs(w);
    return t;
  };
  return thermal_frequency_sum(term, cavity.temperature, spec, constants::c / (2.0 * a), 1.0 / pi);
}

inline RwStressResult combine(double z, const RwBulk& bulk, const SumResult& position) {
  RwStressResult out;
  out.z = z;
  out.parts.first_bracket = bulk.first_s.value + bulk.first_p.value;
  out.parts.second_modes = bulk.second_modes.value;
  out.parts.second_position = position.value;
  out.parts.zero_frequency_position = position.zero_term;
  out.value = out.parts.first_bracket + out.parts.second_modes + out.parts.second_position;
  out.error = bulk.first_s.error + bulk.first_p.error + bulk.second_modes.error + position.error;
  out.report = bulk.first_s.report;
  out.report.merge(bulk.first_p.report);
  out.report.merge(bulk.second_modes.report);
  out.report.merge(position.report);
  return out;
}

}  // namespace detail

/// <T_zz^RW(z)> inside the gap. Interfaces (z = 0, a) need a finite cutoff.
inline RwStressResult rw_stress(const CavitySpec& cavity, double z, const QuadratureSpec& spec = {}) {
  cavity.validate();
  spec.validate();
  detail::check_rw_position(cavity, z, spec);
  const auto bulk = detail::rw_bulk(cavity, spec);
  return detail::combine(z, bulk, detail::rw_position(cavity, z, spec));
}

/// P^RW(z) = -<T_zz^RW(z)>, negative for attraction.
inline double rw_pressure(const CavitySpec& cavity, double z, const QuadratureSpec& spec = {}) {
  return -rw_stress(cavity, z, spec).value;
}

/// rw_stress on a grid; the z-independent sums are computed once and grid
/// points are distributed over spec.threads workers.
inline StressProfileResult rw_profile(const CavitySpec& cavity, const std::vector<double>& z_grid,
                                      const QuadratureSpec& spec = {}) {
  cavity.validate();
  spec.validate();
  if (z_grid.empty()) throw ParameterError("z grid must not be empty");
  for (double z : z_grid) detail::check_rw_position(cavity, z, spec);

  const auto bulk = detail::rw_bulk(cavity, spec);
  QuadratureSpec inner = spec;
  inner.threads = 1;
  std::vector<SumResult> positions(z_grid.size());
  parallel_for(z_grid.size(), spec.threads,
               [&](std::size_t i) { positions[i] = detail::rw_position(cavity, z_grid[i], inner); });

  StressProfileResult out;
  out.z_grid = z_grid;
  out.cutoff = spec.k_cutoff;
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    const auto point = detail::combine(z_grid[i], bulk, positions[i]);
    out.values.push_back(point.value);
    out.per_point_error.push_back(point.error);
    out.parts.push_back(point.parts);
    if (i == 0)
      out.report = point.report;
    else
      out.report.merge(positions[i].report);
  }
  return out;
}

/// Slope d P^RW / d cutoff at an interface as the cutoff -> infinity:
/// (kB T / pi) Sum'_m (eps1 - 1) zeta_m^2 / (2 c^2) (r_s(inf) - r_p(inf)) / 2,
/// using the large-k_perp limits of the reflection coefficients. The terms
/// of dispersive media fall off as a power of m; the remainder after the
/// last term is extrapolated from the local power law.
inline SumResult interface_tail_slope(const CavitySpec& cavity, const QuadratureSpec& spec = {}) {
  cavity.validate();
  spec.validate();
  auto term = [&](double zeta) -> double {
    const auto media = media_at(cavity, zeta);
    if (media.identical) return 0.0;
    const auto r = media.large_k_reflection();
    return media.polarization_weight * 0.5 * (r.s - r.p);
  };
  const double to_pascal = 1.0 / pi;
  if (cavity.temperature == 0.0)
    return thermal_frequency_sum(term, 0.0, spec, constants::c / (2.0 * cavity.gap_width), to_pascal);

  const double kT = constants::kB * cavity.temperature;
  const std::size_t max_terms = std::max<std::size_t>(spec.max_matsubara_terms, 1'000'000);
  SumResult out;
  double sum = 0.5 * term(0.0);
  out.zero_term = sum * 2.0;
  double last = 0.0, before = 0.0;
  int quiet = 0;
  std::size_t m = 1;
  for (; m < max_terms; ++m) {
    before = last;
    last = term(matsubara_frequency(m, cavity.temperature));
    sum += last;
    quiet = std::abs(last) <= spec.rel_tol * std::abs(sum) ? quiet + 1 : 0;
    if (quiet >= 3 && std::abs(last) * static_cast<double>(m) <= spec.rel_tol * std::abs(sum)) break;
  }
  out.report.matsubara_terms_used = std::min(m + 1, max_terms);
  out.report.total_function_evals = out.report.matsubara_terms_used;
  double tail = 0.0;
  out.report.converged = m < max_terms;
  if (!out.report.converged && last != 0.0 && before != 0.0 && last / before > 0.0) {
    // t_m ~ C m^-p  =>  Sum_{n > M} t_n ~ t_M M / (p - 1).
    const double M = static_cast<double>(max_terms - 1);
    const double p = std::log(before / last) / std::log(M / (M - 1.0));
    if (p > 1.0) {
      tail = last * M / (p - 1.0);
      // Remaining uncertainty of the extrapolation is O(tail / M).
      out.report.converged = std::abs(tail) / M <= spec.rel_tol * std::abs(sum + tail);
    }
  }
  out.value = kT * to_pascal * (sum + tail);
  out.error = std::abs(kT * to_pascal * tail) / static_cast<double>(max_terms) +
              std::abs(out.value) * spec.rel_tol;
  out.report.tail_estimate = std::abs(kT * to_pascal * tail);
  out.zero_term *= kT * to_pascal;
  return out;
}

/// P^RW(z) for each cutoff and a linear fit c0 + c1 cutoff over the largest
/// decade of cutoffs.
inline CutoffScanResult cutoff_scan(const CavitySpec& cavity, double z, const std::vector<double>& cutoffs,
                                    const QuadratureSpec& spec = {}) {
  cavity.validate();
  spec.validate();
  const double a = cavity.gap_width;
  if (cutoffs.size() < 4) throw ParameterError("cutoff_scan needs at least 4 cutoffs");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] >= 10.0 / a)) throw ParameterError("cutoffs must be >= 10 / a");
    if (i > 0 && !(cutoffs[i] > cutoffs[i - 1])) throw ParameterError("cutoffs must be strictly increasing");
  }
  if (!(z >= 0.0 && z <= a)) throw DomainError("cutoff_scan: z must lie in [0, a]");

  CutoffScanResult out;
  out.z = z;
  out.cutoffs = cutoffs;
  out.values.resize(cutoffs.size());
  std::vector<RwStressResult> points(cutoffs.size());
  QuadratureSpec inner = spec;
  inner.threads = 1;
  parallel_for(cutoffs.size(), spec.threads, [&](std::size_t i) {
    QuadratureSpec s = inner;
    s.k_cutoff = cutoffs[i];
    points[i] = rw_stress(cavity, z, s);
  });
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    out.values[i] = -points[i].value;
    if (i == 0)
      out.report = points[i].report;
    else
      out.report.merge(points[i].report);
  }

  std::vector<double> fx, fy;
  const double top = cutoffs.back();
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] >= top / 10.0 * (1.0 - 1e-12)) {
      fx.push_back(cutoffs[i]);
      fy.push_back(out.values[i]);
    }
  }
  if (fx.size() < 3) {
    fx = cutoffs;
    fy = out.values;
  }
  const auto fit = fit_line(fx, fy);
  out.fitted_intercept = fit.intercept;
  out.fitted_slope = fit.slope;
  out.slope_stderr = fit.slope_stderr;
  out.correlation = fit.correlation;
  out.fit_points = fx.size();
  const auto [lo, hi] = std::minmax_element(fy.begin(), fy.end());
  const double range = *hi - *lo;
  out.fit_residual_fraction = range > 0.0 ? fit.max_residual / range : 0.0;
  if (z == 0.0 || z == a) out.analytic_slope = interface_tail_slope(cavity, spec).value;
  return out;
}

/// Log-log slope of the z-dependent part <T_zz^RW(z)> - <T_zz^RW(a/2)> for
/// z -> 0 with no cutoff.
inline NearInterfaceResult near_interface_growth(const CavitySpec& cavity, const std::vector<double>& z_values,
                                                 const QuadratureSpec& spec_in = {}) {
  cavity.validate();
  spec_in.validate();
  const double a = cavity.gap_width;
  if (z_values.size() < 3) throw ParameterError("near_interface_growth needs at least 3 z values");
  for (double z : z_values)
    if (!(z > 0.0 && z <= a / 10.0)) throw ParameterError("near_interface_growth: z values must lie in (0, a/10]");
  QuadratureSpec spec = spec_in;
  spec.k_cutoff.reset();

  QuadratureSpec inner = spec;
  inner.threads = 1;
  std::vector<double> points = z_values;
  points.push_back(0.5 * a);
  std::vector<SumResult> pos(points.size());
  parallel_for(points.size(), spec.threads, [&](std::size_t i) { pos[i] = detail::rw_position(cavity, points[i], inner); });

  NearInterfaceResult out;
  out.z = z_values;
  out.report = pos.back().report;
  const double mid = pos.back().value;
  bool any = false;
  for (std::size_t i = 0; i < z_values.size(); ++i) {
    out.z_dependent.push_back(pos[i].value - mid);
    out.report.merge(pos[i].report);
    any = any || out.z_dependent.back() != 0.0;
  }
  if (!any) return out;
  out.has_divergent_part = true;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < z_values.size(); ++i) {
    if (out.z_dependent[i] == 0.0) continue;
    lx.push_back(std::log(z_values[i]));
    ly.push_back(std::log(std::abs(out.z_dependent[i])));
  }
  if (lx.size() < 2) return out;
  const auto fit = fit_line(lx, ly);
  out.exponent = fit.slope;
  out.exponent_stderr = fit.slope_stderr;
  return out;
}

}  // namespace casimir
