#pragma once

// The symmetric three-layer cavity: wall | gap of width a | wall, with
// mu = 1 everywhere. Provides the per-frequency medium data both Casimir
// stress evaluations need, including the zero-frequency limits.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/diagnostics.hpp"
#include "casimir/errors.hpp"
#include "casimir/materials.hpp"
#include "casimir/planar_kernels.hpp"

namespace casimir {

/// Wall medium: either a permittivity model or the ideal mirror limit
/// (r_s = +1, r_p = -1 at every frequency).
class WallMaterial {
 public:
  WallMaterial(PermittivityModel model) : model_(std::move(model)) {}  // NOLINT: implicit by intent

  static WallMaterial perfect_mirror() { return WallMaterial(); }

  bool is_perfect_mirror() const noexcept { return !model_.has_value(); }

  const PermittivityModel& model() const {
    if (!model_) throw ParameterError("perfect mirror has no permittivity model");
    return *model_;
  }

  std::string describe() const { return model_ ? model_->describe() : std::string("perfect_mirror"); }

 private:
  WallMaterial() = default;
  std::optional<PermittivityModel> model_;
};

struct CavitySpec {
  double gap_width = 1e-6;  // a [m]
  double temperature = 0.0;  // T [K]
  WallMaterial wall = WallMaterial::perfect_mirror();
  PermittivityModel gap = PermittivityModel::vacuum();
  bool check_dilute_gap = true;

  /// Throws on invalid geometry; a gap that is not more dilute than the
  /// walls somewhere on the imaginary axis only produces a warning.
  void validate() const;

  bool gap_equals_wall() const { return !wall.is_perfect_mirror() && wall.model() == gap; }

  std::string describe() const {
    std::ostringstream os;
    os << "a=" << detail::format_number(gap_width) << " T=" << detail::format_number(temperature)
       << " wall=" << wall.describe() << " gap=" << gap.describe();
    return os.str();
  }
};

/// Returns true when eps_wall(i zeta) > eps_gap(i zeta) on a logarithmic
/// grid of imaginary frequencies (and in the zero-frequency limit).
inline bool is_dilute_gap(const WallMaterial& wall, const PermittivityModel& gap) {
  if (wall.is_perfect_mirror()) return true;
  const auto& w = wall.model();
  for (int i = 0; i <= 120; ++i) {
    const double zeta = std::pow(10.0, 8.0 + 0.1 * i);
    if (!(w.eval(zeta) > gap.eval(zeta))) return false;
  }
  const auto lw = w.static_limit(), lg = gap.static_limit();
  if (lw.cls == lg.cls) return lw.coefficient > lg.coefficient;
  return static_cast<int>(lw.cls) > static_cast<int>(lg.cls);
}

inline void CavitySpec::validate() const {
  if (!(gap_width > 0.0) || !std::isfinite(gap_width)) throw ParameterError("gap width must be positive");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw ParameterError("temperature must be >= 0");
  if (check_dilute_gap && !gap_equals_wall() && !is_dilute_gap(wall, gap))
    warn("gap medium is not more dilute than the walls on the whole imaginary axis (" + describe() + ")");
}

/// Medium data at one imaginary frequency. At zeta = 0 the entries hold
/// the analytic limits selected by each model's zero-frequency class.
struct MediaAtFrequency {
  double zeta = 0.0;
  double inv_eps1 = 1.0;        // 1 / eps_gap (0 for a divergent gap at zeta = 0)
  double kappa0_sq = 0.0;       // eps_gap zeta^2 / c^2, the minimum of kappa1^2
  double delta_kappa_sq = 0.0;  // (eps_wall - eps_gap) zeta^2 / c^2 = kappa2^2 - kappa1^2
  double eps_ratio = 1.0;       // eps_wall / eps_gap (may be 0 or +inf at zeta = 0)
  double eps_ratio_m1 = 0.0;    // eps_ratio - 1, from susceptibilities
  double polarization_weight = 0.0;  // (eps_gap - 1) zeta^2 / (2 c^2)
  bool mirror = false;
  bool identical = false;

  double kappa0() const { return std::sqrt(kappa0_sq); }

  Reflection reflection(double kappa1) const {
    if (mirror) return {1.0, -1.0};
    if (identical) return {0.0, 0.0};
    const double k2sq = std::max(0.0, kappa1 * kappa1 + delta_kappa_sq);
    const double kappa2 = delta_kappa_sq == 0.0 ? kappa1 : std::sqrt(k2sq);
    const double sum = kappa1 + kappa2;
    // kappa2 - kappa1 without cancellation.
    const double rs = delta_kappa_sq / (sum * sum);
    double rp;
    if (std::isinf(eps_ratio))
      rp = -1.0;
    else  // numerator (kappa2 - kappa1) - (ratio - 1) kappa1, both parts accurate
      rp = (delta_kappa_sq / sum - eps_ratio_m1 * kappa1) / (kappa2 + eps_ratio * kappa1);
    return {rs, rp};
  }

  /// Limits of r_s and r_p as k_perp -> infinity at this frequency.
  Reflection large_k_reflection() const {
    if (mirror) return {1.0, -1.0};
    if (identical) return {0.0, 0.0};
    if (std::isinf(eps_ratio)) return {0.0, -1.0};
    return {0.0, -eps_ratio_m1 / (1.0 + eps_ratio)};
  }
};

namespace detail {
inline double static_ratio(const StaticLimit& wall, const StaticLimit& gap) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (wall.cls == gap.cls) return wall.coefficient / gap.coefficient;
  return static_cast<int>(wall.cls) > static_cast<int>(gap.cls) ? inf : 0.0;
}
}  // namespace detail

inline MediaAtFrequency media_at(const CavitySpec& cavity, double zeta) {
  constexpr double c2 = constants::c * constants::c;
  MediaAtFrequency m;
  m.zeta = zeta;
  m.mirror = cavity.wall.is_perfect_mirror();
  m.identical = cavity.gap_equals_wall();

  if (zeta == 0.0) {
    const auto lg = cavity.gap.static_limit();
    const double b1 = cavity.gap.static_eps_zeta_squared();
    m.inv_eps1 = lg.cls == ZeroFrequencyClass::finite ? 1.0 / lg.coefficient : 0.0;
    m.kappa0_sq = b1 / c2;
    m.polarization_weight = b1 / (2.0 * c2);
    if (!m.mirror) {
      const auto& wall = cavity.wall.model();
      m.delta_kappa_sq = (wall.static_eps_zeta_squared() - b1) / c2;
      m.eps_ratio = detail::static_ratio(wall.static_limit(), lg);
      m.eps_ratio_m1 = m.eps_ratio - 1.0;
    }
    return m;
  }

  const double chi1 = cavity.gap.susceptibility(zeta);
  const double eps1 = 1.0 + chi1;
  const double q2 = zeta * zeta / c2;
  m.inv_eps1 = 1.0 / eps1;
  m.kappa0_sq = eps1 * q2;
  m.polarization_weight = 0.5 * chi1 * q2;
  if (!m.mirror) {
    const double chi2 = cavity.wall.model().susceptibility(zeta);
    const double d_eps = chi2 - chi1;
    m.delta_kappa_sq = d_eps * q2;
    m.eps_ratio = (1.0 + chi2) / eps1;
    m.eps_ratio_m1 = d_eps / eps1;
  }
  return m;
}

}  // namespace casimir
