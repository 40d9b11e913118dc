#pragma once

// Relative permittivity on the imaginary frequency axis, eps(i*zeta), for a
// small family of causal models. All models are real, >= 1 and
// non-increasing in zeta on this axis.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <type_traits>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

enum class ZeroFrequencyClass {
  finite,
  divergent_as_1_over_zeta,
  divergent_as_1_over_zeta_squared,
};

inline const char* to_string(ZeroFrequencyClass cls) {
  switch (cls) {
    case ZeroFrequencyClass::finite: return "finite";
    case ZeroFrequencyClass::divergent_as_1_over_zeta: return "divergent_as_1_over_zeta";
    case ZeroFrequencyClass::divergent_as_1_over_zeta_squared: return "divergent_as_1_over_zeta_squared";
  }
  return "unknown";
}

/// One Lorentz oscillator: strength f [rad^2/s^2], resonance omega [rad/s],
/// damping gamma [rad/s]. Contributes f / (omega^2 + zeta^2 + gamma*zeta).
struct LorentzOscillator {
  double strength;
  double omega;
  double gamma;
};

/// Leading behaviour of eps(i*zeta) as zeta -> 0.
///   finite:     eps -> coefficient
///   1/zeta:     eps ~ coefficient / zeta
///   1/zeta^2:   eps ~ coefficient / zeta^2
struct StaticLimit {
  ZeroFrequencyClass cls;
  double coefficient;
};

class PermittivityModel {
 public:
  struct Constant {
    double eps;
  };
  struct Drude {
    double omega_p;
    double gamma;
  };
  struct Plasma {
    double omega_p;
  };
  struct Lorentz {
    std::vector<LorentzOscillator> oscillators;
  };
  using Variant = std::variant<Constant, Drude, Plasma, Lorentz>;

  static PermittivityModel constant(double eps) {
    if (!(eps >= 1.0) || !std::isfinite(eps))
      throw ParameterError("constant permittivity must be finite and >= 1");
    return PermittivityModel(Constant{eps});
  }

  static PermittivityModel drude(double omega_p, double gamma) {
    if (!(omega_p > 0.0) || !std::isfinite(omega_p))
      throw ParameterError("Drude plasma frequency must be positive");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw ParameterError("Drude damping must be positive");
    return PermittivityModel(Drude{omega_p, gamma});
  }

  static PermittivityModel plasma(double omega_p) {
    if (!(omega_p > 0.0) || !std::isfinite(omega_p))
      throw ParameterError("plasma frequency must be positive");
    return PermittivityModel(Plasma{omega_p});
  }

  static PermittivityModel lorentz(std::vector<LorentzOscillator> oscillators) {
    if (oscillators.empty()) throw ParameterError("Lorentz model needs at least one oscillator");
    for (const auto& osc : oscillators) {
      if (!(osc.strength > 0.0) || !std::isfinite(osc.strength))
        throw ParameterError("Lorentz oscillator strength must be positive");
      if (!(osc.omega >= 0.0) || !std::isfinite(osc.omega))
        throw ParameterError("Lorentz resonance frequency must be >= 0");
      if (!(osc.gamma >= 0.0) || !std::isfinite(osc.gamma))
        throw ParameterError("Lorentz damping must be >= 0");
    }
    return PermittivityModel(Lorentz{std::move(oscillators)});
  }

  static PermittivityModel vacuum() { return constant(1.0); }

  const Variant& variant() const noexcept { return model_; }

  /// eps(i*zeta). At zeta == 0 the divergent models return +infinity; use
  /// static_limit() for the zero-frequency Matsubara term instead.
  double eval(double zeta) const { return 1.0 + susceptibility(zeta); }

  /// eps(i*zeta) - 1, computed without forming eps so that differences of
  /// nearly transparent media keep their relative accuracy.
  double susceptibility(double zeta) const {
    if (!(zeta >= 0.0)) throw DomainError("imaginary frequency must be >= 0");
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        [&](const auto& m) -> double {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, Constant>) {
            return m.eps - 1.0;
          } else if constexpr (std::is_same_v<M, Drude>) {
            if (zeta == 0.0) return inf;
            return m.omega_p * m.omega_p / (zeta * (zeta + m.gamma));
          } else if constexpr (std::is_same_v<M, Plasma>) {
            if (zeta == 0.0) return inf;
            return (m.omega_p / zeta) * (m.omega_p / zeta);
          } else {
            double chi = 0.0;
            for (const auto& osc : m.oscillators) {
              const double denom = osc.omega * osc.omega + zeta * zeta + osc.gamma * zeta;
              if (denom == 0.0) return inf;
              chi += osc.strength / denom;
            }
            return chi;
          }
        },
        model_);
  }

  ZeroFrequencyClass zero_frequency_class() const { return static_limit().cls; }

  StaticLimit static_limit() const {
    return std::visit(
        [](const auto& m) -> StaticLimit {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, Constant>) {
            return {ZeroFrequencyClass::finite, m.eps};
          } else if constexpr (std::is_same_v<M, Drude>) {
            return {ZeroFrequencyClass::divergent_as_1_over_zeta, m.omega_p * m.omega_p / m.gamma};
          } else if constexpr (std::is_same_v<M, Plasma>) {
            return {ZeroFrequencyClass::divergent_as_1_over_zeta_squared, m.omega_p * m.omega_p};
          } else {
            // Free-carrier terms (omega == 0) dominate bound ones.
            double finite = 1.0, inv_zeta = 0.0, inv_zeta2 = 0.0;
            for (const auto& osc : m.oscillators) {
              if (osc.omega > 0.0)
                finite += osc.strength / (osc.omega * osc.omega);
              else if (osc.gamma > 0.0)
                inv_zeta += osc.strength / osc.gamma;
              else
                inv_zeta2 += osc.strength;
            }
            if (inv_zeta2 > 0.0) return {ZeroFrequencyClass::divergent_as_1_over_zeta_squared, inv_zeta2};
            if (inv_zeta > 0.0) return {ZeroFrequencyClass::divergent_as_1_over_zeta, inv_zeta};
            return {ZeroFrequencyClass::finite, finite};
          }
        },
        model_);
  }

  /// lim eps(i*zeta) * zeta^2 as zeta -> 0 (nonzero only for the 1/zeta^2 class).
  double static_eps_zeta_squared() const {
    const auto lim = static_limit();
    return lim.cls == ZeroFrequencyClass::divergent_as_1_over_zeta_squared ? lim.coefficient : 0.0;
  }

  /// Largest characteristic frequency of the model (0 for Constant).
  double characteristic_frequency() const {
    return std::visit(
        [](const auto& m) -> double {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, Constant>) {
            return 0.0;
          } else if constexpr (std::is_same_v<M, Lorentz>) {
            double w = 0.0;
            for (const auto& osc : m.oscillators)
              w = std::max({w, osc.omega, std::sqrt(osc.strength), osc.gamma});
            return w;
          } else {
            return m.omega_p;
          }
        },
        model_);
  }

  std::string describe() const;

  friend bool operator==(const PermittivityModel& lhs, const PermittivityModel& rhs) {
    return lhs.describe() == rhs.describe();
  }

 private:
  explicit PermittivityModel(Variant model) : model_(std::move(model)) {}

  Variant model_;
};

inline double eval_permittivity(const PermittivityModel& model, double zeta) { return model.eval(zeta); }

inline ZeroFrequencyClass zero_frequency_class(const PermittivityModel& model) {
  return model.zero_frequency_class();
}

namespace detail {
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}
}  // namespace detail

inline std::string PermittivityModel::describe() const {
  using detail::format_number;
  return std::visit(
      [](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Constant>) {
          return "constant(eps=" + format_number(m.eps) + ")";
        } else if constexpr (std::is_same_v<M, Drude>) {
          return "drude(omega_p=" + format_number(m.omega_p) + ", gamma=" + format_number(m.gamma) + ")";
        } else if constexpr (std::is_same_v<M, Plasma>) {
          return "plasma(omega_p=" + format_number(m.omega_p) + ")";
        } else {
          std::string s = "lorentz(";
          for (std::size_t i = 0; i < m.oscillators.size(); ++i) {
            const auto& o = m.oscillators[i];
            if (i) s += "; ";
            s += format_number(o.strength) + " " + format_number(o.omega) + " " + format_number(o.gamma);
          }
          return s + ")";
        }
      },
      model_);
}

}  // namespace casimir
