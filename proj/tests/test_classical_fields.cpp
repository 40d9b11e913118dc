#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/classical_fields.hpp"
#include "casimir/constants.hpp"
#include "casimir/diagnostics.hpp"

using namespace casimir;

namespace {

constexpr double eps0 = constants::eps0;

UniformFieldRegion region(Vec3 E, Vec3 B, double eps, double mu) { return {E, B, eps, mu}; }

// eps(z) column along z with a horizontal uniform field E0 x-hat.
template <class Profile>
DiscreteFieldState eps_column(std::size_t n, double length, double E0, Profile&& eps_of_z) {
  auto s = DiscreteFieldState::uniform(1, 1, n, length / static_cast<double>(n - 1));
  for (std::size_t k = 0; k < n; ++k) {
    s.eps[k] = eps_of_z(s.spacing * static_cast<double>(k));
    s.E[k] = {E0, 0.0, 0.0};
  }
  fill_linear_polarization(s);
  return s;
}

struct CaptureWarnings {
  std::vector<std::string> seen;
  WarningHandler previous;
  CaptureWarnings() {
    previous = set_warning_handler([this](const std::string& m) { seen.push_back(m); });
  }
  ~CaptureWarnings() { set_warning_handler(previous); }
};

}  // namespace

TEST(StressTensor, HorizontalFieldHandValues) {
  const double E0 = 3e5;
  const auto t = stress_tensor(StressKind::rw, region({E0, 0, 0}, {}, 4.0, 1.0));
  EXPECT_DOUBLE_EQ(t[0][0], 0.5 * eps0 * E0 * E0);
  EXPECT_DOUBLE_EQ(t[1][1], -0.5 * eps0 * E0 * E0);
  EXPECT_DOUBLE_EQ(t[2][2], -0.5 * eps0 * E0 * E0);
  EXPECT_EQ(t[0][1], 0.0);
  const auto am = stress_tensor(StressKind::am, region({E0, 0, 0}, {}, 4.0, 1.0));
  EXPECT_DOUBLE_EQ(am[0][0], 0.5 * 4.0 * eps0 * E0 * E0);
  EXPECT_DOUBLE_EQ(am[2][2], -0.5 * 4.0 * eps0 * E0 * E0);
}

TEST(StressTensor, MagneticPart) {
  const double B0 = 0.2;
  const auto t = stress_tensor(StressKind::am, region({}, {0, 0, B0}, 1.0, 3.0));
  EXPECT_DOUBLE_EQ(t[2][2], 0.5 * B0 * B0 / (constants::mu0 * 3.0));
  EXPECT_DOUBLE_EQ(t[0][0], -0.5 * B0 * B0 / (constants::mu0 * 3.0));
}

TEST(StressTensor, ZeroFieldsGiveZero) {
  for (auto kind : {StressKind::rw, StressKind::am}) {
    const auto t = stress_tensor(kind, region({}, {}, 5.0, 2.0));
    for (const auto& row : t)
      for (double v : row) EXPECT_EQ(v, 0.0);
  }
}

TEST(StressTensor, VacuumTensorsAreIdentical) {
  const std::vector<std::pair<Vec3, Vec3>> fields{
      {{1e5, -2e4, 3e3}, {0.1, 0.02, -0.3}}, {{0, 7e6, 0}, {1.5, 0, 0}}, {{-1.0, 2.0, 3.0}, {4e-6, -5e-6, 6e-6}}};
  for (const auto& [E, B] : fields) {
    const auto rw = stress_tensor(StressKind::rw, region(E, B, 1.0, 1.0));
    const auto am = stress_tensor(StressKind::am, region(E, B, 1.0, 1.0));
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) EXPECT_EQ(rw[i][k], am[i][k]);
  }
}

TEST(StressTensor, Symmetric) {
  for (auto kind : {StressKind::rw, StressKind::am}) {
    const auto t = stress_tensor(kind, region({1.3e4, -7e3, 2.2e4}, {0.3, 0.7, -0.1}, 2.7, 1.9));
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) EXPECT_EQ(t[i][k], t[k][i]);
  }
}

TEST(StressTensor, RejectsInvalidRegion) {
  EXPECT_THROW(stress_tensor(StressKind::am, region({}, {}, 0.5, 1.0)), ParameterError);
  EXPECT_THROW(stress_tensor(StressKind::am, region({}, {}, 1.0, 0.0)), ParameterError);
  EXPECT_THROW(stress_tensor(StressKind::am, region({NAN, 0, 0}, {}, 1.0, 1.0)), ParameterError);
}

TEST(ForceDensity, HomogeneousInteriorIsForceFree) {
  auto s = DiscreteFieldState::uniform(4, 3, 5, 1e-3);
  for (std::size_t c = 0; c < s.size(); ++c) {
    s.eps[c] = 80.0;
    s.E[c] = {1e5, 2e4, -3e4};
  }
  fill_linear_polarization(s);
  // Natural scale |P| |E| / h; one-sided edge stencils leave round-off only.
  const double scale = eps0 * 79.0 * 1e5 * 1e5 / s.spacing;
  for (const auto& f : force_density(StressKind::am, s))
    for (double v : f) EXPECT_EQ(v, 0.0);
  for (const auto& f : force_density(StressKind::rw, s))
    for (double v : f) EXPECT_LE(std::abs(v), 1e-14 * scale);
}

TEST(ForceDensity, ZeroFieldsGiveZero) {
  const auto s = DiscreteFieldState::uniform(3, 3, 3, 1.0);
  for (auto kind : {StressKind::rw, StressKind::am})
    for (const auto& f : force_density(kind, s))
      for (double v : f) EXPECT_EQ(v, 0.0);
}

TEST(ForceDensity, LinearRampHorizontalField) {
  const double E0 = 1e6, slope = 50.0;  // d eps / dz per metre
  const auto s = eps_column(11, 0.1, E0, [&](double z) { return 1.0 + slope * z; });
  const auto am = force_density(StressKind::am, s);
  const auto rw = force_density(StressKind::rw, s);
  for (std::size_t k = 0; k < s.nz; ++k) {
    EXPECT_NEAR(am[k][2], -0.5 * eps0 * E0 * E0 * slope, 1e-9 * std::abs(0.5 * eps0 * E0 * E0 * slope));
    EXPECT_EQ(am[k][0], 0.0);
    for (double v : rw[k]) EXPECT_EQ(v, 0.0);
  }
}

TEST(ForceDensity, ChargeAndCurrentTerms) {
  auto s = DiscreteFieldState::uniform(3, 3, 3, 1.0);
  for (std::size_t c = 0; c < s.size(); ++c) {
    s.rho_charge[c] = 2e-6;
    s.E[c] = {0, 0, 1e3};
    s.J[c] = {5.0, 0, 0};
    s.B[c] = {0, 0.1, 0};
  }
  for (auto kind : {StressKind::rw, StressKind::am})
    for (const auto& f : force_density(kind, s)) {
      EXPECT_NEAR(f[2], 2e-6 * 1e3 + 5.0 * 0.1, 1e-15);
      EXPECT_EQ(f[0], 0.0);
    }
}

TEST(ForceDensity, MagnetizationCurlTerm) {
  // M = (0, m0 x, 0): curl M = (0, 0, m0); with B = (B0, 0, 0), (curl M) x B = (0, m0 B0, 0).
  const double m0 = 40.0, B0 = 0.3;
  auto s = DiscreteFieldState::uniform(5, 4, 3, 0.01);
  for (std::size_t k = 0; k < s.nz; ++k)
    for (std::size_t j = 0; j < s.ny; ++j)
      for (std::size_t i = 0; i < s.nx; ++i) {
        const auto c = s.index(i, j, k);
        s.M[c] = {0.0, m0 * s.spacing * static_cast<double>(i), 0.0};
        s.B[c] = {B0, 0.0, 0.0};
      }
  for (const auto& f : force_density(StressKind::rw, s)) {
    EXPECT_NEAR(f[1], m0 * B0, 1e-12);
    EXPECT_NEAR(f[0], 0.0, 1e-12);
    EXPECT_NEAR(f[2], 0.0, 1e-12);
  }
}

TEST(ForceDensity, PermeabilityGradient) {
  const double B0 = 0.5, slope = 3.0;
  auto s = DiscreteFieldState::uniform(1, 1, 7, 0.05);
  for (std::size_t k = 0; k < s.nz; ++k) {
    s.mu[k] = 1.0 + slope * s.spacing * static_cast<double>(k);
    s.B[k] = {B0, 0.0, 0.0};
  }
  const auto f = force_density(StressKind::am, s);
  for (std::size_t k = 0; k < s.nz; ++k) {
    const double H = B0 / (constants::mu0 * s.mu[k]);
    EXPECT_NEAR(f[k][2] / (-0.5 * constants::mu0 * H * H * slope), 1.0, 1e-9);
  }
}

TEST(ForceDensity, SecondOrderConvergence) {
  const double E0 = 1e5, L = 2.0;
  auto eps_of = [](double z) { return 3.0 + std::sin(2.0 * z); };
  auto exact = [&](double z) { return -0.5 * eps0 * E0 * E0 * 2.0 * std::cos(2.0 * z); };
  std::vector<double> hs, errs;
  for (std::size_t n : {21u, 41u, 81u, 161u, 321u}) {
    const auto s = eps_column(n, L, E0, eps_of);
    const auto f = force_density(StressKind::am, s);
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(f[k][2] - exact(s.spacing * k)));
    hs.push_back(std::log(s.spacing));
    errs.push_back(std::log(err));
  }
  const std::size_t n = hs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += hs[i] / n;
    my += errs[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (hs[i] - mx) * (errs[i] - my);
    sxx += (hs[i] - mx) * (hs[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, 2.0, 0.1);
}

TEST(ForceDensity, VolumeIntegralMatchesSurfaceJump) {
  // Smooth step from eps = 1 to 80 well inside the box.
  const double E0 = 1e6, L = 1.0;
  auto eps_of = [](double z) { return 1.0 + 79.0 * 0.5 * (1.0 + std::tanh((z - 0.5) / 0.05)); };
  const auto s = eps_column(2001, L, E0, eps_of);
  const auto f = force_density(StressKind::am, s);
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < s.nz; ++k) integral += 0.5 * (f[k][2] + f[k + 1][2]) * s.spacing;
  const UniformFieldRegion below{{E0, 0, 0}, {}, eps_of(0.0), 1.0};
  const UniformFieldRegion above{{E0, 0, 0}, {}, eps_of(L), 1.0};
  const double jump = surface_stress_jump(StressKind::am, below, above, {0, 0, 1});
  EXPECT_NEAR(integral / jump, 1.0, 1e-5);
}

TEST(ForceDensity, ThreadsDoNotChangeResult) {
  const auto s = eps_column(50, 1.0, 1e5, [](double z) { return 2.0 + z * z; });
  const auto one = force_density(StressKind::am, s, 1);
  const auto many = force_density(StressKind::am, s, 8);
  EXPECT_EQ(one, many);
}

TEST(ForceDensity, RejectsTooSmallGrid) {
  auto s = DiscreteFieldState::uniform(1, 1, 2, 1.0);
  EXPECT_THROW(force_density(StressKind::am, s), ParameterError);
  s = DiscreteFieldState::uniform(1, 1, 3, 0.0);
  EXPECT_THROW(force_density(StressKind::am, s), ParameterError);
  s = DiscreteFieldState::uniform(1, 1, 3, 1.0);
  s.eps.pop_back();
  EXPECT_THROW(force_density(StressKind::am, s), ParameterError);
}

TEST(SurfaceJump, LiquidFreeSurface) {
  const LiquidRiseSpec spec;
  const double am = surface_stress_jump(StressKind::am, spec.liquid(), spec.vacuum(), {0, 0, 1});
  const double rw = surface_stress_jump(StressKind::rw, spec.liquid(), spec.vacuum(), {0, 0, 1});
  const double expected = 0.5 * eps0 * (spec.eps - 1.0) * spec.E * spec.E;
  EXPECT_NEAR(am / expected, 1.0, 1e-15);
  EXPECT_EQ(rw, 0.0);
}

TEST(SurfaceJump, IdenticalRegionsGiveZero) {
  const UniformFieldRegion r{{1e4, 2e3, 5e3}, {0.1, 0.0, 0.2}, 6.0, 2.0};
  EXPECT_EQ(surface_stress_jump(StressKind::am, r, r, {0, 0, 1}), 0.0);
  EXPECT_EQ(surface_stress_jump(StressKind::rw, r, r, {0, 1, 0}), 0.0);
}

TEST(SurfaceJump, RejectsNonUnitNormal) {
  const LiquidRiseSpec spec;
  EXPECT_THROW(surface_stress_jump(StressKind::am, spec.liquid(), spec.vacuum(), {0, 0, 2}), ParameterError);
}

TEST(SurfaceJump, WarnsOnTangentialDiscontinuity) {
  CaptureWarnings capture;
  const UniformFieldRegion below{{1e5, 0, 0}, {}, 2.0, 1.0};
  const UniformFieldRegion above{{2e5, 0, 0}, {}, 1.0, 1.0};
  surface_stress_jump(StressKind::am, below, above, {0, 0, 1});
  EXPECT_EQ(capture.seen.size(), 1u);
  const LiquidRiseSpec spec;
  surface_stress_jump(StressKind::am, spec.liquid(), spec.vacuum(), {0, 0, 1});
  EXPECT_EQ(capture.seen.size(), 1u);
}

TEST(LiquidRise, WaterInCondenser) {
  const LiquidRiseSpec spec;
  const double h = liquid_rise_height(spec);
  EXPECT_NEAR(h, 0.0357, 5e-5);
  EXPECT_NEAR(h / (eps0 * 79.0 * 1e12 / (2.0 * 1000.0 * 9.81)), 1.0, 1e-15);
}

TEST(LiquidRise, EqualsJumpOverWeightExactly) {
  for (double eps : {1.0, 2.0, 80.0})
    for (double E : {0.0, 1e4, 1e6}) {
      LiquidRiseSpec spec;
      spec.eps = eps;
      spec.E = E;
      const double jump = surface_stress_jump(StressKind::am, spec.liquid(), spec.vacuum(), {0, 0, 1});
      EXPECT_EQ(liquid_rise_height(spec), jump / (spec.rho_mass * spec.g));
    }
  LiquidRiseSpec flat;
  flat.eps = 1.0;
  EXPECT_EQ(liquid_rise_height(flat), 0.0);
  flat = {};
  flat.E = 0.0;
  EXPECT_EQ(liquid_rise_height(flat), 0.0);
}

TEST(LiquidRise, RejectsInvalidSpec) {
  LiquidRiseSpec spec;
  spec.rho_mass = 0.0;
  EXPECT_THROW(liquid_rise_height(spec), ParameterError);
  spec = {};
  spec.g = -1.0;
  EXPECT_THROW(liquid_rise_height(spec), ParameterError);
}

TEST(FieldStateIo, RoundTripIsExact) {
  auto s = DiscreteFieldState::uniform(3, 2, 4, 1.25e-3);
  for (std::size_t c = 0; c < s.size(); ++c) {
    const double x = 0.1 + static_cast<double>(c) / 7.0;
    s.E[c] = {x, -x * 1e5, 3.0};
    s.B[c] = {1e-7 * x, 0.0, -2.0};
    s.P[c] = {x * 1e-9, 0, 0};
    s.M[c] = {0, x, 0};
    s.J[c] = {0, 0, x * x};
    s.rho_charge[c] = -x;
    s.eps[c] = 1.0 + x;
    s.mu[c] = 1.0 + 2.0 * x;
  }
  std::stringstream io;
  write_field_state(io, s);
  const auto back = read_field_state(io);
  EXPECT_EQ(back.nx, s.nx);
  EXPECT_EQ(back.ny, s.ny);
  EXPECT_EQ(back.nz, s.nz);
  EXPECT_EQ(back.spacing, s.spacing);
  EXPECT_EQ(back.E, s.E);
  EXPECT_EQ(back.B, s.B);
  EXPECT_EQ(back.P, s.P);
  EXPECT_EQ(back.M, s.M);
  EXPECT_EQ(back.J, s.J);
  EXPECT_EQ(back.rho_charge, s.rho_charge);
  EXPECT_EQ(back.eps, s.eps);
  EXPECT_EQ(back.mu, s.mu);
}

TEST(FieldStateIo, RejectsMalformedInput) {
  std::stringstream missing_grid("0 0 0 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 1 1\n");
  EXPECT_THROW(read_field_state(missing_grid), std::exception);
  std::stringstream short_row("# grid 1 1 1 1.0\n0 0 0 1 2 3\n");
  EXPECT_THROW(read_field_state(short_row), std::exception);
  std::stringstream missing_cell("# grid 2 1 1 1.0\n0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 1 1\n");
  EXPECT_THROW(read_field_state(missing_cell), std::exception);
}
