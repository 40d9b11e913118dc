#pragma once

// Classical static stress tensors and volume force densities in linear
// magnetodielectrics, plus the condenser liquid-rise comparison.
//
//   RW: T_ik = eps0 E_i E_k + B_i B_k / mu0 - 1/2 delta_ik (eps0 E^2 + B^2 / mu0)
//   AM: T_ik = E_i D_k + H_i B_k - 1/2 delta_ik (E.D + H.B)
//
//   f_RW = (rho - div P) E + J x B + (curl M) x B
//   f_AM = rho E + J x B - (eps0/2) E^2 grad eps - (mu0/2) H^2 grad mu

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/diagnostics.hpp"
#include "casimir/errors.hpp"
#include "casimir/spectral_engine.hpp"

namespace casimir {

using Vec3 = std::array<double, 3>;
using Tensor3 = std::array<std::array<double, 3>, 3>;

enum class StressKind { rw, am };

inline const char* to_string(StressKind kind) { return kind == StressKind::rw ? "RW" : "AM"; }

inline double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

inline Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

inline Vec3 scaled(const Vec3& v, double s) { return {v[0] * s, v[1] * s, v[2] * s}; }

/// Homogeneous field region. D and H are derived on demand.
struct UniformFieldRegion {
  Vec3 E{};  // V/m
  Vec3 B{};  // T
  double eps = 1.0;
  double mu = 1.0;

  void validate() const {
    for (int i = 0; i < 3; ++i)
      if (!std::isfinite(E[i]) || !std::isfinite(B[i])) throw ParameterError("field components must be finite");
    if (!(eps >= 1.0) || !std::isfinite(eps)) throw ParameterError("region permittivity must be finite and >= 1");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("region permeability must be finite and positive");
  }

  Vec3 D() const { return scaled(E, constants::eps0 * eps); }
  Vec3 H() const { return scaled(B, 1.0 / (constants::mu0 * mu)); }
};

inline Tensor3 stress_tensor(StressKind kind, const UniformFieldRegion& region) {
  region.validate();
  // Left/right factors of the electric and magnetic dyads.
  Vec3 e_left = region.E, e_right, m_left, m_right = region.B;
  if (kind == StressKind::rw) {
    e_right = scaled(region.E, constants::eps0);
    m_left = scaled(region.B, 1.0 / constants::mu0);
  } else {
    e_right = region.D();
    m_left = region.H();
  }
  const double energy = 0.5 * (dot(e_left, e_right) + dot(m_left, m_right));
  Tensor3 t{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      // Average the two orderings so the result is symmetric bit for bit.
      const double ik = e_left[i] * e_right[k] + m_left[i] * m_right[k];
      const double ki = e_left[k] * e_right[i] + m_left[k] * m_right[i];
      t[i][k] = 0.5 * (ik + ki) - (i == k ? energy : 0.0);
    }
  return t;
}

/// Fields on a regular grid with equal spacing along x, y, z. Cell (i, j, k)
/// is stored at index (k * ny + j) * nx + i.
struct DiscreteFieldState {
  std::size_t nx = 1, ny = 1, nz = 1;
  double spacing = 1.0;  // m
  std::vector<Vec3> E, B, P, M, J;
  std::vector<double> rho_charge, eps, mu;

  static DiscreteFieldState uniform(std::size_t nx, std::size_t ny, std::size_t nz, double spacing) {
    DiscreteFieldState s;
    s.nx = nx;
    s.ny = ny;
    s.nz = nz;
    s.spacing = spacing;
    const std::size_t n = nx * ny * nz;
    s.E.assign(n, Vec3{});
    s.B.assign(n, Vec3{});
    s.P.assign(n, Vec3{});
    s.M.assign(n, Vec3{});
    s.J.assign(n, Vec3{});
    s.rho_charge.assign(n, 0.0);
    s.eps.assign(n, 1.0);
    s.mu.assign(n, 1.0);
    return s;
  }

  std::size_t size() const { return nx * ny * nz; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (k * ny + j) * nx + i; }
  std::array<std::size_t, 3> dims() const { return {nx, ny, nz}; }

  void validate() const {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ParameterError("grid spacing must be positive");
    if (nx == 0 || ny == 0 || nz == 0) throw ParameterError("grid dimensions must be >= 1");
    const std::size_t n = size();
    if (E.size() != n || B.size() != n || P.size() != n || M.size() != n || J.size() != n || rho_charge.size() != n ||
        eps.size() != n || mu.size() != n)
      throw ParameterError("field arrays do not match the grid size");
    for (std::size_t c = 0; c < n; ++c) {
      for (int d = 0; d < 3; ++d)
        if (!std::isfinite(E[c][d]) || !std::isfinite(B[c][d]) || !std::isfinite(P[c][d]) ||
            !std::isfinite(M[c][d]) || !std::isfinite(J[c][d]))
          throw ParameterError("field values must be finite");
      if (!std::isfinite(rho_charge[c]) || !std::isfinite(eps[c]) || !std::isfinite(mu[c]))
        throw ParameterError("field values must be finite");
    }
  }
};

/// P = eps0 (eps - 1) E, the linear-medium polarization.
inline Vec3 linear_polarization(double eps, const Vec3& E) { return scaled(E, constants::eps0 * (eps - 1.0)); }

inline void fill_linear_polarization(DiscreteFieldState& state) {
  for (std::size_t c = 0; c < state.size(); ++c) state.P[c] = linear_polarization(state.eps[c], state.E[c]);
}

namespace detail {

inline void check_differentiable(const DiscreteFieldState& s) {
  for (std::size_t n : s.dims())
    if (n == 2) throw ParameterError("force density needs >= 3 cells along every differentiated direction");
}

/// d/d(axis) of value(cell) at (i, j, k): central differences inside,
/// second-order one-sided at the edges. Axes with one cell are not
/// differentiated.
template <class Get>
double derivative(const DiscreteFieldState& s, std::size_t axis, std::size_t i, std::size_t j, std::size_t k,
                  Get&& value) {
  const auto dims = s.dims();
  const std::size_t n = dims[axis];
  if (n == 1) return 0.0;
  std::array<std::size_t, 3> at{i, j, k};
  const std::size_t p = at[axis];
  auto sample = [&](std::size_t q) {
    auto idx = at;
    idx[axis] = q;
    return value(s.index(idx[0], idx[1], idx[2]));
  };
  const double h2 = 2.0 * s.spacing;
  if (p == 0) return (-3.0 * sample(0) + 4.0 * sample(1) - sample(2)) / h2;
  if (p == n - 1) return (3.0 * sample(n - 1) - 4.0 * sample(n - 2) + sample(n - 3)) / h2;
  return (sample(p + 1) - sample(p - 1)) / h2;
}

}  // namespace detail

/// Static volume force density per cell [N/m^3].
inline std::vector<Vec3> force_density(StressKind kind, const DiscreteFieldState& s, unsigned threads = 1) {
  s.validate();
  detail::check_differentiable(s);
  std::vector<Vec3> out(s.size());
  const double eps0 = constants::eps0, mu0 = constants::mu0;

  parallel_for(s.nz, threads, [&](std::size_t k) {
    for (std::size_t j = 0; j < s.ny; ++j)
      for (std::size_t i = 0; i < s.nx; ++i) {
        const std::size_t c = s.index(i, j, k);
        const Vec3& E = s.E[c];
        const Vec3& B = s.B[c];
        Vec3 f = cross(s.J[c], B);
        auto d = [&](std::size_t axis, auto&& get) { return detail::derivative(s, axis, i, j, k, get); };

        if (kind == StressKind::rw) {
          double div_p = 0.0;
          for (std::size_t ax = 0; ax < 3; ++ax) div_p += d(ax, [&](std::size_t q) { return s.P[q][ax]; });
          auto dm = [&](std::size_t ax, std::size_t comp) { return d(ax, [&](std::size_t q) { return s.M[q][comp]; }); };
          const Vec3 curl_m{dm(1, 2) - dm(2, 1), dm(2, 0) - dm(0, 2), dm(0, 1) - dm(1, 0)};
          const Vec3 magnetic = cross(curl_m, B);
          const double charge = s.rho_charge[c] - div_p;
          for (int ax = 0; ax < 3; ++ax) f[ax] += charge * E[ax] + magnetic[ax];
        } else {
          const double e2 = dot(E, E);
          const Vec3 H = scaled(B, 1.0 / (mu0 * s.mu[c]));
          const double h2 = dot(H, H);
          for (std::size_t ax = 0; ax < 3; ++ax) {
            const double grad_eps = e2 != 0.0 ? d(ax, [&](std::size_t q) { return s.eps[q]; }) : 0.0;
            const double grad_mu = h2 != 0.0 ? d(ax, [&](std::size_t q) { return s.mu[q]; }) : 0.0;
            f[ax] += s.rho_charge[c] * E[ax] - 0.5 * eps0 * e2 * grad_eps - 0.5 * mu0 * h2 * grad_mu;
          }
        }
        out[c] = f;
      }
  });
  return out;
}

/// n . (T_above - T_below) . n for a surface with unit normal n pointing
/// from `below` into `above`. Warns when tangential E is discontinuous.
inline double surface_stress_jump(StressKind kind, const UniformFieldRegion& below, const UniformFieldRegion& above,
                                  const Vec3& normal) {
  below.validate();
  above.validate();
  const double norm = std::sqrt(dot(normal, normal));
  if (!(std::abs(norm - 1.0) <= 1e-12)) throw ParameterError("surface normal must be a unit vector");

  const Vec3 jump{above.E[0] - below.E[0], above.E[1] - below.E[1], above.E[2] - below.E[2]};
  const Vec3 tangential = cross(normal, jump);
  const double scale = std::max(std::sqrt(dot(above.E, above.E)), std::sqrt(dot(below.E, below.E)));
  if (std::sqrt(dot(tangential, tangential)) > 1e-12 * scale)
    warn("tangential electric field is not continuous across the surface");

  auto normal_component = [&](const Tensor3& t) {
    double v = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) v += normal[i] * t[i][k] * normal[k];
    return v;
  };
  return normal_component(stress_tensor(kind, above)) - normal_component(stress_tensor(kind, below));
}

struct LiquidRiseSpec {
  double eps = 80.0;
  double E = 1e6;           // V/m, horizontal field magnitude
  double rho_mass = 1000.0;  // kg/m^3
  double g = 9.81;           // m/s^2

  void validate() const {
    if (!(eps >= 1.0) || !std::isfinite(eps)) throw ParameterError("liquid permittivity must be finite and >= 1");
    if (!(E >= 0.0) || !std::isfinite(E)) throw ParameterError("field magnitude must be finite and >= 0");
    if (!(rho_mass > 0.0) || !std::isfinite(rho_mass)) throw ParameterError("mass density must be positive");
    if (!(g > 0.0) || !std::isfinite(g)) throw ParameterError("gravitational acceleration must be positive");
  }

  /// Liquid below, vacuum above, horizontal field along x.
  UniformFieldRegion liquid() const { return {{E, 0.0, 0.0}, {}, eps, 1.0}; }
  UniformFieldRegion vacuum() const { return {{E, 0.0, 0.0}, {}, 1.0, 1.0}; }
};

/// Surface stress jump (AM) at the free surface divided by rho_mass g, i.e.
/// h = eps0 (eps - 1) E^2 / (2 rho_mass g).
inline double liquid_rise_height(const LiquidRiseSpec& spec) {
  spec.validate();
  const double jump = surface_stress_jump(StressKind::am, spec.liquid(), spec.vacuum(), {0.0, 0.0, 1.0});
  return jump / (spec.rho_mass * spec.g);
}

// Columnar text format, one cell per line after the header:
//   # grid nx ny nz spacing
//   # i j k Ex Ey Ez Bx By Bz Px Py Pz Mx My Mz rho Jx Jy Jz eps mu
// Lines starting with '#' other than the grid line are comments.

inline constexpr const char* field_state_columns =
    "i j k Ex Ey Ez Bx By Bz Px Py Pz Mx My Mz rho Jx Jy Jz eps mu";

inline void write_field_state(std::ostream& os, const DiscreteFieldState& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", s.spacing);
  os << "# grid " << s.nx << ' ' << s.ny << ' ' << s.nz << ' ' << buf << '\n';
  os << "# " << field_state_columns << '\n';
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, " %.16e", v);
    os << buf;
  };
  for (std::size_t k = 0; k < s.nz; ++k)
    for (std::size_t j = 0; j < s.ny; ++j)
      for (std::size_t i = 0; i < s.nx; ++i) {
        const std::size_t c = s.index(i, j, k);
        os << i << ' ' << j << ' ' << k;
        for (const auto* v : {&s.E[c], &s.B[c], &s.P[c], &s.M[c]})
          for (double x : *v) put(x);
        put(s.rho_charge[c]);
        for (double x : s.J[c]) put(x);
        put(s.eps[c]);
        put(s.mu[c]);
        os << '\n';
      }
}

inline DiscreteFieldState read_field_state(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  DiscreteFieldState s;
  bool have_grid = false;
  std::vector<bool> seen;
  auto fail = [&](const std::string& msg) {
    throw ParameterError("field state line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    if (line[line.find_first_not_of(" \t")] == '#') {
      std::string hash, word;
      ls >> hash >> word;
      if (word != "grid") continue;
      std::size_t nx = 0, ny = 0, nz = 0;
      double h = 0.0;
      if (!(ls >> nx >> ny >> nz >> h)) fail("malformed grid line");
      if (have_grid) fail("duplicate grid line");
      s = DiscreteFieldState::uniform(nx, ny, nz, h);
      seen.assign(s.size(), false);
      have_grid = true;
      continue;
    }
    if (!have_grid) fail("data before the '# grid' line");
    std::size_t i, j, k;
    double v[21 - 3];
    if (!(ls >> i >> j >> k)) fail("expected cell indices");
    for (double& x : v)
      if (!(ls >> x)) fail("expected 21 columns");
    std::string extra;
    if (ls >> extra) fail("too many columns");
    if (i >= s.nx || j >= s.ny || k >= s.nz) fail("cell index outside the grid");
    const std::size_t c = s.index(i, j, k);
    if (seen[c]) fail("duplicate cell");
    seen[c] = true;
    s.E[c] = {v[0], v[1], v[2]};
    s.B[c] = {v[3], v[4], v[5]};
    s.P[c] = {v[6], v[7], v[8]};
    s.M[c] = {v[9], v[10], v[11]};
    s.rho_charge[c] = v[12];
    s.J[c] = {v[13], v[14], v[15]};
    s.eps[c] = v[16];
    s.mu[c] = v[17];
  }
  if (!have_grid) throw ParameterError("field state: missing '# grid' line");
  for (bool b : seen)
    if (!b) throw ParameterError("field state: not every cell is present");
  s.validate();
  return s;
}

}  // namespace casimir
