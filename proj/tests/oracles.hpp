#pragma once

// Reference implementations used to check the library. They integrate in
// k_perp directly with fixed composite rules and evaluate the position
// kernel through cosh, so they share no code path with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>

namespace oracle {

inline constexpr double c = 299792458.0;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double kB = 1.380649e-23;
inline constexpr double mu0 = 1.25663706212e-6;
inline constexpr double eps0 = 1.0 / (mu0 * c * c);
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double zeta3 = 1.2020569031595942854;

/// -pi^2 hbar c / (240 a^4)
inline double ideal_metal_zero_temperature(double a) { return -pi * pi * hbar * c / (240.0 * a * a * a * a); }

/// -kB T zeta(3) / (4 pi a^3), the m = 0 term for ideal mirrors.
inline double ideal_metal_classical(double a, double T) { return -kB * T * zeta3 / (4.0 * pi * a * a * a); }

inline double matsubara(std::size_t m, double T) { return 2.0 * pi * kB * T * static_cast<double>(m) / hbar; }

inline double chi_cosh(double r, double kappa, double a, double z) {
  return r * std::exp(-kappa * a) * std::cosh(2.0 * kappa * (z - a / 2.0)) / (1.0 - r * r * std::exp(-2.0 * kappa * a));
}

/// Constant permittivities eps1 (gap) and eps2 (walls).
struct ConstantPair {
  double eps1;
  double eps2;
};

struct Fresnel {
  double k1, rs, rp;
};

inline Fresnel fresnel(const ConstantPair& m, double zeta, double k) {
  const double q2 = zeta * zeta / (c * c);
  const double k1 = std::sqrt(k * k + m.eps1 * q2);
  const double k2 = std::sqrt(k * k + m.eps2 * q2);
  if (k1 == 0.0) return {0.0, 0.0, (m.eps1 - m.eps2) / (m.eps1 + m.eps2)};
  return {k1, (k2 - k1) / (k2 + k1), (m.eps1 * k2 - m.eps2 * k1) / (m.eps1 * k2 + m.eps2 * k1)};
}

/// Matsubara sum with half-weight zero term, stopped after three
/// consecutive terms below 1e-13 of the partial sum.
inline double primed_sum(const std::function<double(double)>& term_of_zeta, double T, std::size_t max_terms = 200000) {
  double sum = 0.5 * term_of_zeta(0.0);
  int quiet = 0;
  for (std::size_t m = 1; m < max_terms; ++m) {
    const double t = term_of_zeta(matsubara(m, T));
    sum += t;
    quiet = std::abs(t) <= 1e-13 * std::abs(sum) ? quiet + 1 : 0;
    if (quiet >= 3) break;
  }
  return sum;
}

/// Composite Simpson rule on [0, K] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double K, std::size_t n) {
  const double h = K / static_cast<double>(n);
  double s = f(0.0) + f(K);
  for (std::size_t i = 1; i < n; ++i) s += f(h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Trapezoid rule on [0, K] with n panels.
inline double trapezoid(const std::function<double(double)>& f, double K, std::size_t n) {
  const double h = K / static_cast<double>(n);
  double s = 0.5 * (f(0.0) + f(K));
  for (std::size_t i = 1; i < n; ++i) s += f(h * static_cast<double>(i));
  return s * h;
}

/// Lifshitz pressure for constant permittivities, k_perp Simpson rule.
inline double am_pressure_constant(const ConstantPair& m, double a, double T, std::size_t panels = 20000) {
  auto term = [&](double zeta) {
    // e^{-2 kappa1 a} < 1e-30 beyond kappa1 a = 35.
    const double kappa_max = 35.0 / a;
    const double q2 = m.eps1 * zeta * zeta / (c * c);
    if (kappa_max * kappa_max <= q2) return 0.0;
    const double K = std::sqrt(kappa_max * kappa_max - q2);
    auto f = [&](double k) {
      const auto r = fresnel(m, zeta, k);
      const double e = std::exp(-2.0 * r.k1 * a);
      const double ds = r.rs * r.rs * e / (1.0 - r.rs * r.rs * e);
      const double dp = r.rp * r.rp * e / (1.0 - r.rp * r.rp * e);
      return k * r.k1 * (ds + dp);
    };
    return simpson(f, K, panels);
  };
  return -kB * T / pi * primed_sum(term, T);
}

/// <T_zz^RW(z)> for constant permittivities by a k_perp trapezoid rule.
inline double rw_stress_constant(const ConstantPair& m, double a, double T, double z, std::size_t panels = 1000000) {
  const double w = std::min(z, a - z);
  auto term = [&](double zeta) {
    const double kappa_max = std::max(25.0 / w, 35.0 / a);
    const double q2 = m.eps1 * zeta * zeta / (c * c);
    if (kappa_max * kappa_max <= q2) return 0.0;
    const double K = std::sqrt(kappa_max * kappa_max - q2);
    const double weight = m.eps1 * zeta * zeta / (2.0 * c * c) * (1.0 - 1.0 / m.eps1);
    auto f = [&](double k) {
      const auto r = fresnel(m, zeta, k);
      if (r.k1 == 0.0) return 0.0;
      const double e = std::exp(-2.0 * r.k1 * a);
      const double ds = r.rs * r.rs * e / (1.0 - r.rs * r.rs * e);
      const double dp = r.rp * r.rp * e / (1.0 - r.rp * r.rp * e);
      const double first = r.k1 * (ds + dp / m.eps1);
      const double second = weight / r.k1 * ((ds + chi_cosh(r.rs, r.k1, a, z)) - (dp + chi_cosh(r.rp, r.k1, a, z)));
      return k * (first - second);
    };
    return trapezoid(f, K, panels);
  };
  return kB * T / pi * primed_sum(term, T);
}

/// Interface slope of P^RW against the cutoff, summed term by term with a
/// 1/m^2 tail correction: (kB T / pi) Sum' chi1 zeta^2 / (2 c^2) * (-r_p(inf)) / 2
/// with r_p(inf) = (eps1 - eps2) / (eps1 + eps2). chi_i = eps_i - 1.
inline double interface_slope(const std::function<double(double)>& chi1, const std::function<double(double)>& chi2,
                              double T, std::size_t terms = 2000000) {
  auto g = [&](std::size_t m) {
    const double zeta = matsubara(m, T);
    const double x1 = chi1(zeta), x2 = chi2(zeta);
    return x1 * zeta * zeta / (4.0 * c * c) * (x2 - x1) / (2.0 + x1 + x2);
  };
  double sum = 0.5 * g(0);
  for (std::size_t m = 1; m <= terms; ++m) sum += g(m);
  // g(m) ~ C / m^2 for large m: Sum_{m > M} ~ C / (M + 1/2).
  const double M = static_cast<double>(terms);
  sum += g(terms) * M * M / (M + 0.5);
  return kB * T / pi * sum;
}

}  // namespace oracle
