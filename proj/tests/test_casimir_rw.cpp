#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "casimir/casimir_am.hpp"
#include "casimir/casimir_rw.hpp"
#include "oracles.hpp"

using namespace casimir;

namespace {

CavitySpec constant_cavity() {
  CavitySpec c;
  c.gap_width = 1e-6;
  c.temperature = 300.0;
  c.gap = PermittivityModel::constant(1.5);
  c.wall = PermittivityModel::constant(10.0);
  return c;
}

// Transparent above ~1e14 rad/s; static permittivities 1.5 and 10.
CavitySpec lorentz_cavity() {
  CavitySpec c;
  c.gap_width = 1e-6;
  c.temperature = 300.0;
  c.gap = PermittivityModel::lorentz({{0.5e28, 1e14, 0.0}});
  c.wall = PermittivityModel::lorentz({{9e28, 1e14, 0.0}});
  return c;
}

}  // namespace

TEST(RwStress, VacuumGapEqualsMinusAmPressure) {
  CavitySpec c;
  c.gap_width = 1e-6;
  c.temperature = 300.0;
  c.wall = PermittivityModel::drude(1.37e16, 5.32e13);
  const double p = am_pressure(c).pressure;
  for (double f : {0.0, 0.1, 0.5, 0.9}) {
    const auto r = rw_stress(c, f * c.gap_width);
    EXPECT_NEAR(r.value / -p, 1.0, 1e-12) << f;
    EXPECT_EQ(r.parts.second_position, 0.0);
  }
}

TEST(RwStress, IdealMirrorVacuumGap) {
  CavitySpec c;
  c.gap_width = 1e-6;
  const auto r = rw_stress(c, 0.0);
  EXPECT_NEAR(r.value / -ideal_metal_limit(1e-6, 0.0).pressure, 1.0, 1e-12);
}

TEST(RwStress, MidpointMatchesOracle) {
  const auto c = constant_cavity();
  QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  spec.abs_tol = 0.0;
  const auto r = rw_stress(c, 0.5e-6, spec);
  // Frozen from oracle::rw_stress_constant (trapezoid, 1e6 panels).
  EXPECT_NEAR(r.value / -2.070465940499485e-04, 1.0, 1e-7);
  EXPECT_NEAR(r.value, r.parts.first_bracket + r.parts.second_modes + r.parts.second_position, 1e-18);
}

TEST(RwStress, ProfileIsMirrorSymmetric) {
  const auto c = lorentz_cavity();
  std::vector<double> z;
  for (int i = 1; i < 20; ++i) z.push_back(c.gap_width * i / 20.0);
  const auto prof = rw_profile(c, z);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double lhs = prof.values[i], rhs = prof.values[z.size() - 1 - i];
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs)) << i;
  }
}

TEST(RwStress, ProfileMatchesPointwiseEvaluation) {
  const auto c = lorentz_cavity();
  const std::vector<double> z{1e-7, 3e-7, 5e-7};
  QuadratureSpec spec;
  spec.threads = 3;
  const auto prof = rw_profile(c, z, spec);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(prof.values[i], rw_stress(c, z[i]).value, 1e-14 * std::abs(prof.values[i]));
}

TEST(RwStress, InteriorIsCutoffInsensitive) {
  const auto c = lorentz_cavity();
  QuadratureSpec low, high;
  low.k_cutoff = 1e9;
  high.k_cutoff = 1e10;
  const double a = rw_pressure(c, 0.5e-6, low);
  const double b = rw_pressure(c, 0.5e-6, high);
  const double none = rw_pressure(c, 0.5e-6);
  EXPECT_LT(std::abs(a - b), 1e-6 * std::abs(none));
  EXPECT_LT(std::abs(b - none), 1e-6 * std::abs(none));
}

TEST(RwStress, EdgesExceedMidpoint) {
  auto check = [](const CavitySpec& c, double edge) {
    const auto prof = rw_profile(c, {edge, 0.5e-6, 1e-6 - edge});
    EXPECT_GT(std::abs(prof.values[0]), std::abs(prof.values[1]));
    EXPECT_GT(std::abs(prof.values[2]), std::abs(prof.values[1]));
  };
  check(constant_cavity(), 0.05e-6);
  // Transparent media only show the growth well inside the resonance length.
  check(lorentz_cavity(), 1e-10);
}

TEST(RwStress, InterfaceWithoutCutoffDiverges) {
  const auto c = constant_cavity();
  EXPECT_THROW(rw_stress(c, 0.0), DivergenceError);
  EXPECT_THROW(rw_stress(c, c.gap_width), DivergenceError);
  EXPECT_THROW(rw_stress(c, -1e-9), DomainError);
  EXPECT_THROW(rw_stress(c, 2e-6), DomainError);
  QuadratureSpec spec;
  spec.k_cutoff = 1e8;
  EXPECT_NO_THROW(rw_stress(lorentz_cavity(), 0.0, spec));
}

TEST(CutoffScan, InterfaceGrowsLinearlyWithAnalyticSlope) {
  const auto c = lorentz_cavity();
  std::vector<double> cutoffs;
  for (int i = 0; i <= 5; ++i) cutoffs.push_back(1e8 * std::pow(10.0, i / 5.0));
  const auto scan = cutoff_scan(c, 0.0, cutoffs);
  ASSERT_TRUE(scan.analytic_slope.has_value());
  EXPECT_GT(scan.correlation, 0.999999);
  EXPECT_NEAR(scan.fitted_slope / *scan.analytic_slope, 1.0, 0.01);
  EXPECT_GT(*scan.analytic_slope, 0.0);
  for (std::size_t i = 1; i < scan.values.size(); ++i) EXPECT_GT(scan.values[i], scan.values[i - 1]);
}

TEST(CutoffScan, InteriorHasNoSlope) {
  const auto c = lorentz_cavity();
  const auto scan = cutoff_scan(c, 0.5e-6, {1e8, 2e8, 5e8, 1e9});
  EXPECT_FALSE(scan.analytic_slope.has_value());
  EXPECT_LT(std::abs(scan.fitted_slope) * 1e9, 1e-6 * std::abs(scan.fitted_intercept));
}

TEST(CutoffScan, RejectsBadCutoffs) {
  const auto c = lorentz_cavity();
  EXPECT_THROW(cutoff_scan(c, 0.0, {1e8, 2e8, 3e8}), ParameterError);
  EXPECT_THROW(cutoff_scan(c, 0.0, {1e8, 3e8, 2e8, 4e8}), ParameterError);
  EXPECT_THROW(cutoff_scan(c, 0.0, {1e6, 2e8, 3e8, 4e8}), ParameterError);
}

TEST(InterfaceSlope, MatchesOracle) {
  const auto c = lorentz_cavity();
  auto chi1 = [](double z) { return 0.5e28 / (1e28 + z * z); };
  auto chi2 = [](double z) { return 9e28 / (1e28 + z * z); };
  const double expected = oracle::interface_slope(chi1, chi2, 300.0, 200000);
  EXPECT_NEAR(interface_tail_slope(c).value / expected, 1.0, 1e-9);
}

TEST(InterfaceSlope, ZeroForVacuumGap) {
  CavitySpec c;
  c.temperature = 300.0;
  c.wall = PermittivityModel::drude(1.37e16, 5.32e13);
  EXPECT_EQ(interface_tail_slope(c).value, 0.0);
}

TEST(NearInterface, InverseDistanceGrowth) {
  const auto c = lorentz_cavity();
  std::vector<double> z;
  for (int i = 0; i <= 8; ++i) z.push_back(1e-10 * std::pow(10.0, i / 4.0));
  const auto r = near_interface_growth(c, z);
  ASSERT_TRUE(r.has_divergent_part);
  EXPECT_NEAR(r.exponent, -1.0, 0.05);
  // The z-dependent part approaches -slope / (2 z).
  const double slope = interface_tail_slope(c).value;
  EXPECT_NEAR(r.z_dependent.front() * z.front() / (-0.5 * slope), 1.0, 0.02);
}

TEST(NearInterface, VacuumGapHasNoDivergentPart) {
  CavitySpec c;
  c.temperature = 300.0;
  c.wall = PermittivityModel::constant(10.0);
  const auto r = near_interface_growth(c, {1e-10, 1e-9, 1e-8});
  EXPECT_FALSE(r.has_divergent_part);
  EXPECT_TRUE(std::isnan(r.exponent));
}

TEST(NearInterface, RejectsPointsFarFromWall) {
  EXPECT_THROW(near_interface_growth(lorentz_cavity(), {1e-9, 1e-8, 5e-7}), ParameterError);
}
