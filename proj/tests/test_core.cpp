#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "dqe/core/propagate.hpp"
#include "dqe/core/spin.hpp"

using namespace dqe;

namespace {

ComplexMatrix random_hermitian(std::mt19937& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return scale * 0.5 * (m + m.adjoint());
}

StateVector random_state(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return {v.normalized(), Basis::canonical};
}

}  // namespace

TEST(Spin, SzIsDiagonalOneZeroMinusOne) {
  const auto s = spin1_operators();
  EXPECT_EQ(s.sz(0, 0), Complex(1.0));
  EXPECT_EQ(s.sz(1, 1), Complex(0.0));
  EXPECT_EQ(s.sz(2, 2), Complex(-1.0));
  EXPECT_EQ(max_abs(s.sz - ComplexMatrix(s.sz.diagonal().asDiagonal())), 0.0);
}

TEST(Spin, CommutationRelations) {
  const auto s = spin1_operators();
  EXPECT_LT(max_abs(commutator(s.sx, s.sy) - kI * s.sz), 1e-14);
  EXPECT_LT(max_abs(commutator(s.sy, s.sz) - kI * s.sx), 1e-14);
  EXPECT_LT(max_abs(commutator(s.sz, s.sx) - kI * s.sy), 1e-14);
}

TEST(Spin, Casimir) {
  const auto s = spin1_operators();
  EXPECT_LT(max_abs(s.sx * s.sx + s.sy * s.sy + s.sz * s.sz - 2.0 * identity(3)), 1e-14);
}

TEST(Spin, PmBasisForms) {
  const auto s = spin1_operators_pm();  // ordering |+>, |0>, |->
  ComplexMatrix sx = ComplexMatrix::Zero(3, 3), sy = ComplexMatrix::Zero(3, 3), sz = ComplexMatrix::Zero(3, 3);
  sx(1, 0) = sx(0, 1) = 1.0;  // |0><+| + h.c.
  sy(1, 2) = kI;              // i|0><-| + h.c.
  sy(2, 1) = -kI;
  sz(0, 2) = sz(2, 0) = 1.0;  // |+><-| + h.c.
  EXPECT_LT(max_abs(s.sx - sx), 1e-15);
  EXPECT_LT(max_abs(s.sy - sy), 1e-15);
  EXPECT_LT(max_abs(s.sz - sz), 1e-15);
}

TEST(Kron, IdentityAndIndexConvention) {
  EXPECT_EQ(max_abs(kron(identity(3), identity(3)) - identity(9)), 0.0);
  ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(3, 3);
  a(1, 0) = 2.0;
  b(2, 1) = 5.0;
  const ComplexMatrix k = kron(a, b);
  EXPECT_EQ(k(3 * 1 + 2, 3 * 0 + 1), Complex(10.0));
  EXPECT_EQ(max_abs(k), 10.0);
}

TEST(Kron, OppositeMagnetizationsCancel) {
  const auto s = spin1_operators();
  const ComplexMatrix total = kron(s.sz, identity(3)) + kron(identity(3), s.sz);
  ComplexVector up_down = ComplexVector::Zero(9);
  up_down(3 * 0 + 2) = 1.0;  // |1> (x) |-1>
  EXPECT_LT((total * up_down).norm(), 1e-15);
  ComplexVector up_up = ComplexVector::Zero(9);
  up_up(0) = 1.0;
  EXPECT_LT((kron(s.sz, s.sz) * up_up - up_up).norm(), 1e-15);
}

TEST(PropagateStatic, ZeroHamiltonian) {
  std::mt19937 rng(1);
  const StateVector psi = random_state(rng, 9);
  const StateVector out = propagate_static(ComplexMatrix::Zero(9, 9), psi, 12.5);
  EXPECT_LT((out.amplitudes - psi.amplitudes).norm(), 1e-15);
}

TEST(PropagateStatic, DiagonalPhase) {
  const auto s = spin1_operators();
  const StateVector out = propagate_static(s.sz, basis_state(3, 0), std::numbers::pi);
  EXPECT_NEAR(std::abs(out.amplitudes(0) - std::exp(Complex(0, -std::numbers::pi))), 0.0, 1e-14);
  EXPECT_NEAR(std::norm(out.amplitudes(0)), 1.0, 1e-14);
}

TEST(PropagateStatic, TwoLevelRabiFlop) {
  const double omega = 0.7;
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 1) = h(1, 0) = omega / 2;
  for (double t : {0.3, 1.7, 2 * std::numbers::pi / omega, 9.1}) {
    const StateVector out = propagate_static(h, basis_state(2, 0), t);
    const double expected = std::pow(std::sin(omega * t / 2), 2);  // closed-form Rabi oracle
    EXPECT_NEAR(std::norm(out.amplitudes(1)), expected, 1e-13);
  }
  const StateVector flop = propagate_static(h, basis_state(2, 0), 2 * std::numbers::pi / omega);
  EXPECT_NEAR(std::norm(flop.amplitudes(0)), 1.0, 1e-13);
}

TEST(PropagateStatic, RejectsNonHermitian) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 1) = 1.0;
  try {
    propagate_static(h, basis_state(3, 0), 1.0);
    FAIL() << "expected rejection";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("max|M - M^dagger|"), std::string::npos);
  }
}

TEST(PropagateStatic, RejectsNegativeTime) {
  EXPECT_THROW(propagate_static(identity(2), basis_state(2, 0), -1.0), ModelError);
}

TEST(PropagateStatic, NormPreservedForRandomHermitian) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix h = random_hermitian(rng, 9, 3.0);
    const StateVector psi = random_state(rng, 9);
    for (double t : {0.0, 1.0, 137.0, 1e4}) EXPECT_NEAR(propagate_static(h, psi, t).norm(), 1.0, 1e-9);
  }
}

TEST(PropagateStatic, Composition) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = random_hermitian(rng, 9);
    const StateVector psi = random_state(rng, 9);
    const double t1 = 0.37 * (trial + 1), t2 = 1.9;
    const StateVector two = propagate_static(h, propagate_static(h, psi, t1), t2);
    const StateVector one = propagate_static(h, psi, t1 + t2);
    EXPECT_LT((two.amplitudes - one.amplitudes).norm(), 1e-9);
  }
}

TEST(PropagateStatic, Deterministic) {
  std::mt19937 rng(3);
  const ComplexMatrix h = random_hermitian(rng, 9);
  const StateVector psi = random_state(rng, 9);
  const StateVector a = propagate_static(h, psi, 4.2), b = propagate_static(h, psi, 4.2);
  EXPECT_EQ((a.amplitudes - b.amplitudes).norm(), 0.0);
}

TEST(PropagateTimedep, ConstantReducesToStatic) {
  std::mt19937 rng(5);
  const ComplexMatrix h = random_hermitian(rng, 9);
  const StateVector psi = random_state(rng, 9);
  const StateVector a = propagate_timedep([&](double) { return h; }, psi, 3.3, 0.01);
  const StateVector b = propagate_static(h, psi, 3.3);
  EXPECT_LT(1.0 - std::norm(b.amplitudes.dot(a.amplitudes)), 1e-8);
}

TEST(PropagateTimedep, FastDriveAveragesOut) {
  // cos(w t) sx with w >> 1 has zero average Hamiltonian; population stays put
  const auto s = spin1_operators();
  const double w = 400.0;
  const StateVector out =
      propagate_timedep([&](double t) { ComplexMatrix h = std::cos(w * t) * s.sx; return h; }, basis_state(3, 1), 5.0,
                        2 * std::numbers::pi / w / 40);
  EXPECT_GT(std::norm(out.amplitudes(1)), 1.0 - 1e-4);
}

TEST(PropagateTimedep, NormDriftAndStepHalving) {
  std::mt19937 rng(9);
  const ComplexMatrix h0 = random_hermitian(rng, 9), h1 = random_hermitian(rng, 9);
  auto h = [&](double t) { ComplexMatrix m = h0 + std::cos(3.0 * t) * h1; return m; };
  const StateVector psi = random_state(rng, 9);
  TimedepStats stats;
  const StateVector a = propagate_timedep(h, psi, 2.0, 1e-3, &stats);
  const StateVector b = propagate_timedep(h, psi, 2.0, 5e-4);
  EXPECT_LT(stats.norm_drift, 1e-8);
  EXPECT_EQ(stats.steps, 2000u);
  EXPECT_LT(1.0 - std::norm(a.amplitudes.dot(b.amplitudes)), 1e-6);
}

TEST(PropagateTimedep, RejectsBadStep) {
  EXPECT_THROW(propagate_timedep([](double) { return identity(2); }, basis_state(2, 0), 1.0, 0.0), ModelError);
}

TEST(PropagateTimedep, RejectsNonHermitianSample) {
  auto h = [](double) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
  };
  EXPECT_THROW(propagate_timedep(h, basis_state(2, 0), 1.0, 0.1), ModelError);
}

TEST(Linalg, ExpmHermitianIsUnitary) {
  std::mt19937 rng(13);
  const ComplexMatrix u = expm_hermitian(random_hermitian(rng, 9, 5.0), 2.3);
  EXPECT_LT(unitarity_defect(u), 1e-10);
}
