#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "dqe/effective/tuning.hpp"
#include "dqe/effective/zero_field.hpp"

using namespace dqe;

namespace {

ModelParams fig3() {
  ModelParams p;
  p.mu_b = 0.05;
  p.theta = 0.426 * std::numbers::pi;
  p.dip_prefactor = 10.0;
  return p;
}

ModelParams fig6() {
  ModelParams p;
  p.mu_b = 0.001;
  p.theta = 0.292 * std::numbers::pi;
  p.dip_prefactor = 9.09;
  return p;
}

// |P0+> is the last kept index in both protocol splits
double entry(const ComplexMatrix& h, int i, int j) { return h(i, j).real(); }

}  // namespace

TEST(Elimination, NoCouplingKeepsH1) {
  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(0, 0) = 1.0;
  h(1, 1) = 2.0;
  h(2, 2) = 3.0;
  h(3, 3) = 4.0;
  h(0, 1) = h(1, 0) = 0.5;
  const EliminationSplit s = make_split(h, {0, 1}, {2, 3});
  EXPECT_EQ(max_abs(adiabatic_eliminate(s) - s.h1), 0.0);
}

TEST(Elimination, SplitMustCoverOnce) {
  const ComplexMatrix h = identity(3);
  EXPECT_THROW(make_split(h, {0, 1}, {1, 2}), ModelError);
  EXPECT_THROW(make_split(h, {0}, {1}), ModelError);
}

TEST(Elimination, SingularBlockCarriesCondition) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 1) = h(1, 0) = 1.0;  // dropped block {1, 2} is zero
  const EliminationSplit s = make_split(h, {0}, {1, 2});
  try {
    adiabatic_eliminate(s);
    FAIL() << "expected a singularity error";
  } catch (const SingularityError& e) {
    EXPECT_TRUE(std::isinf(e.condition_number) || e.condition_number > 1e8);
  }
}

TEST(Elimination, ProtocolErrorNamesParameterPoint) {
  ModelParams p = fig3();
  p.mu_b = 0.0;
  p.theta = theta_azz_zero();
  p.delta = -dipole_coeffs(p).ayy;  // P0- at zero as well
  try {
    protocol_effective_hamiltonian(Protocol::N, p);
    FAIL() << "expected a singularity error";
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("azz="), std::string::npos);
  }
}

TEST(ShiftN, ZeroFieldIsPureRamanShift) {
  ModelParams p = fig3();
  p.mu_b = 0.0;
  p.delta = -3.9;
  const DipoleCoeffs a = dipole_coeffs(p);
  const EliminationSplit s = protocol_split(Protocol::N, p);
  const ComplexMatrix he = adiabatic_eliminate(s);
  EXPECT_NEAR(entry(he, 2, 2) - (a.axx + p.delta), -p.omega_rabi * p.omega_rabi / (4 * a.azz), 1e-14);
  EXPECT_LT(max_abs((he - s.h1).topLeftCorner(2, 2)), 1e-15);
  EXPECT_NEAR(shift_delta_N(p), -1.0 / (4 * a.azz), 1e-15);
}

TEST(ShiftN, NoDriveLeavesZeemanTerm) {
  ModelParams p = fig3();
  p.omega_rabi = 0.0;
  p.mu_b = 0.3;
  p.delta = 1.1;
  const DipoleCoeffs a = dipole_coeffs(p);
  EXPECT_NEAR(shift_delta_N(p), -p.mu_b * p.mu_b / (a.ayy + p.delta), 1e-15);
}

TEST(ShiftN, MatchesEliminationAtFig3) {
  ModelParams p = fig3();
  p.delta = -0.50065648 * dipole_coeffs(p).azz;
  const ComplexMatrix he = protocol_effective_hamiltonian(Protocol::N, p);
  EXPECT_NEAR(entry(he, 2, 2) - (dipole_coeffs(p).axx + p.delta), shift_delta_N(p), 1e-12);
}

TEST(ShiftN, SingularFactorsNamed) {
  ModelParams p = fig3();
  p.theta = theta_azz_zero();
  try {
    shift_delta_N(p);
    FAIL();
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("azz"), std::string::npos);
  }
  p = fig3();
  p.delta = -dipole_coeffs(p).ayy;
  try {
    shift_delta_N(p);
    FAIL();
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("ayy + Delta"), std::string::npos);
  }
}

TEST(ShiftsP, ZeroFieldLimit) {
  ModelParams p = fig6();
  p.mu_b = 0.0;
  p.delta = 0.4;
  const ShiftsP s = shifts_P(p);
  EXPECT_EQ(s.delta_prime, 0.0);
  EXPECT_EQ(s.alpha, 0.0);
  EXPECT_NEAR(s.delta_dprime, p.omega_rabi * p.omega_rabi / (4 * dipole_coeffs(p).azz), 1e-15);
}

TEST(ShiftsP, MatchEliminationAtFig6) {
  ModelParams p = fig6();
  p.delta = 0.514267 * dipole_coeffs(p).azz;
  const DipoleCoeffs a = dipole_coeffs(p);
  const ComplexMatrix he = protocol_effective_hamiltonian(Protocol::P, p);
  const ShiftsP s = shifts_P(p);
  EXPECT_NEAR(entry(he, 1, 1) - a.azz, s.delta_prime, 1e-12);
  EXPECT_NEAR(entry(he, 1, 2) - p.omega_rabi / 2, s.alpha, 1e-12);
  EXPECT_NEAR(entry(he, 2, 2) - (a.axx + p.delta), s.delta_dprime, 1e-12);
}

TEST(ShiftsP, VanishWithField) {
  ModelParams p = fig6();
  p.delta = 0.5 * dipole_coeffs(p).azz;
  double prev_dp = 1e9, prev_a = 1e9;
  for (double mb : {1e-1, 1e-2, 1e-3, 1e-4}) {
    p.mu_b = mb;
    const ShiftsP s = shifts_P(p);
    EXPECT_LT(std::abs(s.delta_prime), prev_dp);
    EXPECT_LT(std::abs(s.alpha), prev_a);
    prev_dp = std::abs(s.delta_prime);
    prev_a = std::abs(s.alpha);
  }
  EXPECT_LT(prev_dp, 1e-7);
  EXPECT_LT(prev_a, 1e-7);
}

TEST(Shifts, ClosedFormsAgreeWithEliminationOnRandomDraws) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int n_checked = 0, p_checked = 0;
  while (n_checked < 200 || p_checked < 200) {
    ModelParams p;
    p.omega_rabi = 0.2 + 2.0 * u(rng);
    p.mu_b = 0.5 * u(rng);
    p.dip_prefactor = 1.0 + 15.0 * u(rng);
    p.theta = std::numbers::pi / 2 * u(rng);
    p.delta = -10.0 + 20.0 * u(rng);
    const DipoleCoeffs a = dipole_coeffs(p);
    const double y = a.ayy + p.delta;
    // stay away from vanishing denominators
    if (std::abs(a.azz) < 0.1 || std::abs(y) < 0.1) continue;
    if (n_checked < 200) {
      const EliminationSplit s = protocol_split(Protocol::N, p);
      if (s.h3_condition < 1e6) {
        const ComplexMatrix he = adiabatic_eliminate(s);
        EXPECT_NEAR(entry(he, 2, 2) - (a.axx + p.delta), shift_delta_N(p), 1e-10);
        ++n_checked;
      }
    }
    if (p_checked < 200) {
      const EliminationSplit s = protocol_split(Protocol::P, p);
      const double l = a.azz * y - p.omega_rabi * p.omega_rabi / 4;
      if (s.h3_condition < 1e6 && std::abs(l) > 0.1) {
        const ComplexMatrix he = adiabatic_eliminate(s);
        const ShiftsP c = shifts_P(p);
        EXPECT_NEAR(entry(he, 1, 1) - a.azz, c.delta_prime, 1e-10);
        EXPECT_NEAR(entry(he, 1, 2) - p.omega_rabi / 2, c.alpha, 1e-10);
        EXPECT_NEAR(entry(he, 2, 2) - (a.axx + p.delta), c.delta_dprime, 1e-10);
        EXPECT_LT(hermiticity_defect(he), 1e-12);
        ++p_checked;
      }
    }
  }
}

TEST(Polynomial, ArithmeticAndRoots) {
  const Polynomial x = Polynomial::linear(0.0, 1.0);
  const Polynomial p = (x - 1.0) * (x + 2.0) * (x - 3.5);
  EXPECT_EQ(p.degree(), 3);
  EXPECT_DOUBLE_EQ(p(2.0), (1.0) * (4.0) * (-1.5));
  const auto r = polynomial_roots(p);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0].real(), -2.0, 1e-12);
  EXPECT_NEAR(r[1].real(), 1.0, 1e-12);
  EXPECT_NEAR(r[2].real(), 3.5, 1e-12);
  EXPECT_DOUBLE_EQ(p.derivative()(0.0), p.coeff(1));
  EXPECT_THROW(polynomial_roots(Polynomial::constant(2.0)), NumericalError);
}

TEST(Tune, Fig3Root) {
  const TunedDetuning t = tune_detuning(Protocol::N, fig3());
  const double azz = dipole_coeffs(fig3()).azz;
  EXPECT_EQ(t.degree, 3);
  EXPECT_FALSE(t.degenerate);
  // independent oracle: bracketed root of the uncleared condition with the
  // shift taken from a numerical Schur complement
  EXPECT_NEAR(t.delta / azz, -0.500656483296502, 1e-10);
  EXPECT_NEAR(t.delta / azz, -0.49875, 0.002);
  EXPECT_LT(t.condition_residual, 1e-8);
  EXPECT_LT(t.residual, 1e-10 * std::max(1.0, std::pow(std::abs(azz), 3)));
}

TEST(Tune, Fig6Root) {
  const TunedDetuning t = tune_detuning(Protocol::P, fig6());
  const double azz = dipole_coeffs(fig6()).azz;
  EXPECT_EQ(t.degree, 4);
  EXPECT_NEAR(t.delta / azz, 0.514267035660624, 1e-10);
  EXPECT_LT(t.condition_residual, 1e-8);
  EXPECT_LT(t.residual, 1e-10 * std::max(1.0, std::pow(std::abs(azz), 3)));
}

TEST(Tune, DriveVariationKeepsLeadingCoefficient) {
  const double eps = 1e-5;
  ModelParams lo = fig3(), hi = fig3();
  lo.omega_rabi -= eps;
  hi.omega_rabi += eps;
  const Polynomial a = resonance_polynomial(Protocol::N, lo), b = resonance_polynomial(Protocol::N, hi);
  EXPECT_NEAR(b.coeff(3), a.coeff(3), 1e-12);
  EXPECT_NEAR((b.coeff(2) - a.coeff(2)) / (2 * eps), -fig3().omega_rabi, 1e-8);
}

TEST(Tune, DegenerateAzzFlagged) {
  ModelParams p = fig3();
  p.theta = theta_azz_zero();
  const TunedDetuning t = tune_detuning(Protocol::N, p);
  EXPECT_TRUE(t.degenerate);
  EXPECT_EQ(t.delta, 0.0);
}

TEST(Tune, ResidualOnTunedRootsAcrossAngles) {
  for (Protocol pr : {Protocol::N, Protocol::P}) {
    ModelParams p = pr == Protocol::N ? fig3() : fig6();
    for (double f = 0.02; f < 0.5; f += 0.02) {
      p.theta = f * std::numbers::pi;
      if (std::abs(p.theta - theta_azz_zero()) < 0.005 * std::numbers::pi) continue;
      const TunedDetuning t = tune_detuning(pr, p);
      if (t.degenerate) continue;
      p.delta = t.delta;
      EXPECT_LT(std::abs(resonance_residual(pr, p)), 1e-8) << "theta/pi = " << f;
      p.delta = 0.0;
    }
  }
}

TEST(Tune, BranchIsContinuous) {
  for (Protocol pr : {Protocol::N, Protocol::P}) {
    ModelParams p = pr == Protocol::N ? fig3() : fig6();
    double prev = std::nan("");
    for (double f = 0.15; f <= 0.45 + 1e-12; f += 0.0025) {
      p.theta = f * std::numbers::pi;
      if (std::abs(p.theta - theta_azz_zero()) < 0.005 * std::numbers::pi) {
        prev = std::nan("");
        continue;
      }
      const TunedDetuning t = tune_detuning(pr, p);
      const double offset = t.delta - half_azz_detuning(pr, p);
      if (!std::isnan(prev)) {
        EXPECT_LT(std::abs(offset - prev), 0.05) << to_string(pr) << " theta/pi = " << f;
      }
      prev = offset;
    }
  }
}

TEST(ZeroFieldEffective, MatchesEliminationOfIntermediate) {
  ModelParams p;
  p.omega_rabi = 40.0;
  p.couplings = DipoleCoeffs{-618.7, 617.7, 1.0};
  EXPECT_LT(max_abs(zero_field_effective(p) - zero_field_eliminated(p)), 1e-12);
  EXPECT_NEAR(effective_coupling(p), 1600.0 / (2 * 618.7), 1e-12);
  EXPECT_TRUE(raman_regime(p));
}

TEST(ZeroFieldEffective, NoDriveOnlyAzz) {
  ModelParams p;
  p.omega_rabi = 0.0;
  p.couplings = DipoleCoeffs{5.0, -6.0, 1.0};
  const ComplexMatrix h = zero_field_effective(p);
  EXPECT_EQ(std::abs(h(0, 1)), 0.0);
  EXPECT_EQ(std::abs(h(0, 0)), 0.0);
  EXPECT_EQ(h(1, 2).real(), 1.0);
}

TEST(ZeroFieldEffective, SignAndPreconditions) {
  ModelParams p;
  p.omega_rabi = 2.0;
  p.couplings = DipoleCoeffs{5.0, -6.0, 1.0};
  EXPECT_LT(effective_coupling(p), 0.0);
  p.couplings = DipoleCoeffs{0.0, -1.0, 1.0};
  EXPECT_THROW(zero_field_effective(p), SingularityError);
  p.couplings = DipoleCoeffs{5.0, -6.0, 1.0};
  p.mu_b = 0.1;
  EXPECT_THROW(zero_field_effective(p), ModelError);
}
