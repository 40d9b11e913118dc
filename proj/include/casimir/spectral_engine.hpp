#pragma once

// Matsubara frequencies, primed Matsubara sums with a deterministic
// truncation rule, the zero-temperature frequency integral and the
// transverse-wavenumber quadrature shared by the Casimir modules.

#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-20;  // Pa
  std::size_t max_matsubara_terms = 100000;
  std::optional<double> k_cutoff;  // empty: integrate to infinity
  std::size_t max_quadrature_evals_per_term = 10000;
  /// Casimir AM pressures ignore a finite cutoff unless this is set.
  bool force_am_cutoff = false;
  /// Worker threads for independent Matsubara terms / grid points.
  unsigned threads = 1;

  void validate() const {
    if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be positive");
    if (!(abs_tol >= 0.0)) throw ParameterError("abs_tol must be >= 0");
    if (k_cutoff && !(*k_cutoff > 0.0)) throw ParameterError("finite k_cutoff must be positive");
    if (max_matsubara_terms < 4) throw ParameterError("max_matsubara_terms must be at least 4");
    if (max_quadrature_evals_per_term < 30) throw ParameterError("max_quadrature_evals_per_term must be at least 30");
    if (threads == 0) throw ParameterError("threads must be >= 1");
  }

  double upper_k() const { return k_cutoff ? *k_cutoff : std::numeric_limits<double>::infinity(); }

  QuadratureTolerance tolerance(double abs_tol_integral = 0.0) const {
    return {rel_tol, abs_tol_integral, max_quadrature_evals_per_term, 4};
  }
};

struct ConvergenceReport {
  std::size_t matsubara_terms_used = 0;
  double tail_estimate = 0.0;  // Pa
  std::size_t total_function_evals = 0;
  bool converged = true;

  void merge(const ConvergenceReport& other) {
    matsubara_terms_used = std::max(matsubara_terms_used, other.matsubara_terms_used);
    tail_estimate += other.tail_estimate;
    total_function_evals += other.total_function_evals;
    converged = converged && other.converged;
  }
};

/// A Matsubara-term value together with its quadrature bookkeeping.
struct SpectralTerm {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

struct SumResult {
  double value = 0.0;
  double error = 0.0;
  ConvergenceReport report;
  double zero_term = 0.0;  // unweighted term(0), kept for instrumentation
};

enum class ZeroTermWeight { half, full };

/// zeta_m = 2 pi kB T m / hbar.
inline double matsubara_frequency(std::size_t m, double T) {
  if (!(T > 0.0)) throw DomainError("matsubara_frequency: temperature must be positive");
  return 2.0 * pi * constants::kB * T / constants::hbar * static_cast<double>(m);
}

/// Run fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// visited exactly once; the first exception (by index) is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace detail {
template <class R>
SpectralTerm as_term(R&& r) {
  if constexpr (std::is_same_v<std::decay_t<R>, SpectralTerm>)
    return r;
  else
    return SpectralTerm{static_cast<double>(r), 0.0, 1, true};
}
}  // namespace detail

/// Sum' over m >= 0 of term(m): the m = 0 term carries half weight.
///
/// Terminates once three consecutive weighted terms fall below
/// rel_tol |partial| (+ abs_tol) and the geometric tail extrapolated from the
/// last two terms is within the same bound. Terms are evaluated in blocks,
/// concurrently when spec.threads > 1, but always reduced in index order, so
/// the result does not depend on the thread count.
///
/// `to_pascal` converts the bare sum to Pa; it scales abs_tol and the
/// reported tail.
template <class Term>
SumResult matsubara_sum(Term&& term, const QuadratureSpec& spec, double to_pascal = 1.0,
                        ZeroTermWeight zero_weight = ZeroTermWeight::half) {
  spec.validate();
  const double abs_bound = to_pascal != 0.0 ? spec.abs_tol / std::abs(to_pascal) : 0.0;
  const std::size_t block = spec.threads > 1 ? 4 * static_cast<std::size_t>(spec.threads) : 1;

  SumResult out;
  bool terms_ok = true;
  bool stopped = false;
  std::vector<SpectralTerm> buffer;
  double partial = 0.0;
  double previous = std::numeric_limits<double>::quiet_NaN();
  int quiet = 0;
  std::size_t m = 0;

  while (m < spec.max_matsubara_terms) {
    const std::size_t count = std::min(block, spec.max_matsubara_terms - m);
    buffer.assign(count, {});
    parallel_for(count, spec.threads, [&](std::size_t i) { buffer[i] = detail::as_term(term(m + i)); });

    for (std::size_t i = 0; i < count && !stopped; ++i, ++m) {
      const auto& t = buffer[i];
      const double w = (m == 0 && zero_weight == ZeroTermWeight::half) ? 0.5 : 1.0;
      if (m == 0) out.zero_term = t.value;
      const double contribution = w * t.value;
      partial += contribution;
      out.error += w * t.error;
      out.report.total_function_evals += t.evaluations;
      out.report.matsubara_terms_used = m + 1;
      terms_ok = terms_ok && t.converged;

      if (m == 0) {
        previous = contribution;
        continue;
      }
      const double bound = spec.rel_tol * std::abs(partial) + abs_bound;
      quiet = std::abs(contribution) <= bound ? quiet + 1 : 0;
      double tail = std::numeric_limits<double>::infinity();
      if (contribution == 0.0) {
        tail = 0.0;
      } else if (previous != 0.0) {
        const double ratio = std::abs(contribution / previous);
        if (ratio < 1.0) tail = std::abs(contribution) * ratio / (1.0 - ratio);
      }
      previous = contribution;
      out.report.tail_estimate = tail * std::abs(to_pascal);
      if (quiet >= 3 && tail <= bound) stopped = true;
    }
    if (stopped) break;
  }

  out.value = partial;
  out.report.converged = stopped && terms_ok;
  if (std::isfinite(out.report.tail_estimate)) {
    out.error += to_pascal != 0.0 ? out.report.tail_estimate / std::abs(to_pascal) : 0.0;
  } else {
    // No decay seen at the last term: report the last term times the budget.
    out.error += std::abs(previous) * static_cast<double>(spec.max_matsubara_terms);
    out.report.tail_estimate = std::abs(previous * to_pascal) * static_cast<double>(spec.max_matsubara_terms);
  }
  return out;
}

/// (hbar / 2 pi) * integral_0^inf d zeta term(zeta): the T -> 0 limit of
/// kB T Sum'_m term(zeta_m). `zeta_scale` sets the quadrature map scale.
template <class Term>
SumResult zero_temperature_integral(Term&& term, const QuadratureSpec& spec, double zeta_scale,
                                    double to_pascal = 1.0) {
  spec.validate();
  const double factor = constants::hbar / (2.0 * pi);
  std::size_t inner_evals = 0;
  double inner_rel_error = 0.0;
  bool inner_ok = true;
  auto integrand = [&](double zeta) {
    const auto t = detail::as_term(term(zeta));
    inner_evals += t.evaluations;
    if (t.value != 0.0) inner_rel_error = std::max(inner_rel_error, std::abs(t.error / t.value));
    inner_ok = inner_ok && t.converged;
    return t.value;
  };
  const double abs_integral = to_pascal != 0.0 ? spec.abs_tol / std::abs(to_pascal * factor) : 0.0;
  QuadratureTolerance tol{spec.rel_tol, abs_integral, spec.max_quadrature_evals_per_term, 4};
  const auto q = integrate_semi_infinite(integrand, 0.0, zeta_scale, std::numeric_limits<double>::infinity(), tol);

  SumResult out;
  out.value = factor * q.value;
  out.error = factor * (q.error + inner_rel_error * std::abs(q.value));
  out.report.matsubara_terms_used = 0;
  out.report.total_function_evals = inner_evals + q.evaluations;
  out.report.converged = q.converged && inner_ok;
  return out;
}

/// kB T Sum'_m term(zeta_m) for T > 0, its zero-temperature integral for T == 0.
/// Values and errors are multiplied by `to_pascal`.
template <class Term>
SumResult thermal_frequency_sum(Term&& term, double T, const QuadratureSpec& spec, double zeta_scale,
                                double to_pascal = 1.0) {
  if (!(T >= 0.0)) throw DomainError("temperature must be >= 0");
  SumResult out;
  if (T == 0.0) {
    out = zero_temperature_integral(term, spec, zeta_scale, to_pascal);
  } else {
    const double kT = constants::kB * T;
    out = matsubara_sum([&](std::size_t m) { return term(matsubara_frequency(m, T)); }, spec, kT * to_pascal);
    out.value *= kT;
    out.error *= kT;
    out.zero_term *= kT;
  }
  out.value *= to_pascal;
  out.error *= std::abs(to_pascal);
  out.zero_term *= to_pascal;
  return out;
}

/// integral_0^cutoff dk f(k) with the map k = scale t / (1 - t).
template <class F>
QuadratureResult integrate_kperp(F&& integrand, double scale, const QuadratureSpec& spec) {
  return integrate_semi_infinite(integrand, 0.0, scale, spec.upper_k(), spec.tolerance());
}

}  // namespace casimir
