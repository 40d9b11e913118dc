#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature with a global error heap, plus the
// rational map used for the semi-infinite transverse-wavenumber integrals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

struct QuadratureTolerance {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  std::size_t max_evals = 10000;
  unsigned initial_panels = 4;
};

namespace detail {

inline constexpr std::array<double, 8> gk15_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> gk15_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5, 7 above.
inline constexpr std::array<double, 4> g7_weights = {0.129484966168869693270611432679082,
                                                     0.279705391489276667901467771423780,
                                                     0.381830050505118944950369775488975,
                                                     0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
};

struct PanelOrder {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.lo > b.lo;
  }
};

template <class F>
Panel gauss_kronrod_15(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<double, 15> fv{};
  fv[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * gk15_nodes[j];
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }
  for (double v : fv)
    if (!std::isfinite(v)) throw DomainError("quadrature: integrand is not finite");

  double kronrod = gk15_weights[7] * fv[7];
  double gauss = g7_weights[3] * fv[7];
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double pair = fv[j] + fv[14 - j];
    kronrod += gk15_weights[j] * pair;
    abs_sum += gk15_weights[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
    if (j % 2 == 1) gauss += g7_weights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = gk15_weights[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j) asc += gk15_weights[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

  const double value = kronrod * half;
  double err = std::abs((kronrod - gauss) * half);
  asc *= std::abs(half);
  abs_sum *= std::abs(half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * abs_sum, err);
  return {lo, hi, value, err};
}

}  // namespace detail

/// Globally adaptive G7/K15 quadrature of f over [lo, hi]. Stops once the
/// summed error estimate is <= max(abs_tol, rel_tol |value|); if the
/// evaluation budget runs out, returns the best value with converged = false.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double lo, double hi, const QuadratureTolerance& tol = {}) {
  QuadratureResult out;
  if (lo == hi) return out;
  if (!(hi > lo)) throw DomainError("quadrature: interval must satisfy lo < hi");

  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelOrder> heap;
  const unsigned n0 = std::max(1u, tol.initial_panels);
  for (unsigned i = 0; i < n0; ++i) {
    const double a = lo + (hi - lo) * i / n0;
    const double b = (i + 1 == n0) ? hi : lo + (hi - lo) * (i + 1) / n0;
    heap.push(detail::gauss_kronrod_15(f, a, b));
    out.evaluations += 15;
  }

  const auto totals = [&heap] {
    // Fixed order (by left endpoint) so the sum does not depend on heap layout.
    auto panels = heap;
    std::vector<detail::Panel> v;
    v.reserve(panels.size());
    while (!panels.empty()) {
      v.push_back(panels.top());
      panels.pop();
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    double value = 0.0, error = 0.0;
    for (const auto& p : v) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  double value = 0.0, error = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
  }
  while (error > std::max(tol.abs_tol, tol.rel_tol * std::abs(value))) {
    if (out.evaluations + 30 > tol.max_evals) {
      out.converged = false;
      break;
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Panel cannot be split further in floating point.
      out.converged = false;
      break;
    }
    heap.pop();
    const auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  std::tie(out.value, out.error) = totals();
  return out;
}

/// Integral of f over [lower, upper) with upper possibly +infinity, through
/// the map x = lower + scale t / (1 - t). `scale` should match the decay
/// length of the integrand.
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double lower, double scale, double upper,
                                         const QuadratureTolerance& tol = {}) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("quadrature: scale must be positive and finite");
  if (!(upper >= lower)) throw DomainError("quadrature: upper limit below lower limit");
  if (upper == lower) return {};
  const double t_max = std::isinf(upper) ? 1.0 : (upper - lower) / ((upper - lower) + scale);
  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double x = lower + scale * t / one_minus;
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx * scale / (one_minus * one_minus);
  };
  return integrate_adaptive(mapped, 0.0, t_max, tol);
}

}  // namespace casimir
