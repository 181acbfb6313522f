#pragma once

#include <array>
#include <cmath>

#include "dqe/core/linalg.hpp"
#include "dqe/core/spin.hpp"
#include "dqe/model/basis.hpp"
#include "dqe/model/params.hpp"

namespace dqe {

struct TwoSpinOperators {
  std::array<ComplexMatrix, 3> s1, s2;  // x, y, z on each NV
};

inline TwoSpinOperators two_spin_operators() {
  const SpinOperatorSet s = spin1_operators();
  const ComplexMatrix id = identity(3);
  TwoSpinOperators t;
  const std::array<const ComplexMatrix*, 3> single = {&s.sx, &s.sy, &s.sz};
  for (int k = 0; k < 3; ++k) {
    t.s1[k] = kron(*single[k], id);
    t.s2[k] = kron(id, *single[k]);
  }
  return t;
}

namespace detail {
inline ComplexMatrix flip_flop(char a, char b) {
  const ComplexVector x = pm_product('0', a), y = pm_product(b, '0');
  const ComplexMatrix m = x * y.adjoint();
  return m + m.adjoint();
}
}  // namespace detail

// Rotating frame of the carrier after the RWA; |00> sits at zero energy.
inline ComplexMatrix hamiltonian_rwa(const ModelParams& p) {
  p.validate();
  const TwoSpinOperators o = two_spin_operators();
  const DipoleCoeffs a = dipole_coeffs(p);
  const ComplexMatrix sz2 = o.s1[2] * o.s1[2] + o.s2[2] * o.s2[2];
  ComplexMatrix h = p.mu_b * (o.s1[2] + o.s2[2]) - p.delta * sz2 +
                    (0.5 * p.omega_rabi) * (o.s1[0] + o.s2[0]) +
                    a.axx * detail::flip_flop('+', '+') + a.ayy * detail::flip_flop('-', '-') +
                    a.azz * (o.s1[2] * o.s2[2]);
  return 0.5 * (h + h.adjoint());
}

// Lab-frame Hamiltonian split into a static part and the drive operator,
// H(t) = h_static + cos(omega t) h_drive.
struct LabHamiltonian {
  ComplexMatrix h_static;
  ComplexMatrix h_drive;
  double omega = 0.0;

  ComplexMatrix operator()(double t) const { return h_static + std::cos(omega * t) * h_drive; }
};

inline LabHamiltonian lab_hamiltonian(const ModelParams& p) {
  p.validate();
  if (!(p.omega_carrier > 0)) throw ModelError("hamiltonian_lab: omega_carrier must be set");
  const TwoSpinOperators o = two_spin_operators();
  const Eigen::Matrix3d a = dipole_tensor(p);
  const ComplexMatrix sz2 = o.s1[2] * o.s1[2] + o.s2[2] * o.s2[2];
  LabHamiltonian lab;
  lab.omega = p.omega_carrier;
  lab.h_static = (p.omega_carrier - p.delta) * sz2 + p.mu_b * (o.s1[2] + o.s2[2]);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      if (a(j, k) != 0.0) lab.h_static += a(j, k) * (o.s1[j] * o.s2[k]);
  lab.h_static = 0.5 * (lab.h_static + lab.h_static.adjoint());
  lab.h_drive = p.omega_rabi * (o.s1[0] + o.s2[0]);
  return lab;
}

inline ComplexMatrix hamiltonian_lab(const ModelParams& p, double t) { return lab_hamiltonian(p)(t); }

// H0 = omega (Sz1^2 + Sz2^2); lab states are rotated back with exp(+i H0 t).
inline ComplexMatrix rotating_frame_generator(const ModelParams& p) {
  const TwoSpinOperators o = two_spin_operators();
  return p.omega_carrier * (o.s1[2] * o.s1[2] + o.s2[2] * o.s2[2]);
}

inline ComplexMatrix hamiltonian_symmetric(const ModelParams& p) {
  return symmetric_transform().apply(hamiltonian_rwa(p));
}

// ground: |00> at zero. double_quantum: shifted by +2 delta so |P>, |N> sit at
// +-azz and |00> at 2 delta, the frame in which the elimination shifts are written.
enum class EnergyOrigin { ground, double_quantum };

inline ComplexMatrix bright_hamiltonian(const ModelParams& p, EnergyOrigin origin = EnergyOrigin::ground) {
  ComplexMatrix b = split_bright_dark(hamiltonian_symmetric(p)).bright;
  if (origin == EnergyOrigin::double_quantum) b += 2.0 * p.delta * identity(kBrightDim);
  return b;
}

// Zero-field four-level block over {|00>, |P0+>, |++>, |-->}, projected from the
// RWA Hamiltonian. At mu_b = delta = 0 this subspace is closed.
inline constexpr std::array<std::string_view, 4> kZeroFieldLabels = {"00", "P0+", "++", "--"};

inline ComplexMatrix zero_field_kets() {
  ComplexMatrix k(9, 4);
  for (int i = 0; i < 4; ++i) k.col(i) = canonical_ket(kZeroFieldLabels[static_cast<std::size_t>(i)]);
  return k;
}

inline ComplexMatrix zero_field_block(const ModelParams& p) {
  if (std::abs(p.mu_b) > 0 || std::abs(p.delta) > 0)
    throw ModelError("zero_field_block: requires mu_b = 0 and delta = 0");
  const ComplexMatrix k = zero_field_kets();
  return k.adjoint() * hamiltonian_rwa(p) * k;
}

}  // namespace dqe
