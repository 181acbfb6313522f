#pragma once

#include <array>
#include <cmath>
#include <string_view>

#include "dqe/core/linalg.hpp"

namespace dqe {

struct SpinOperatorSet {
  ComplexMatrix sx, sy, sz;
  std::array<std::string_view, 3> basis_order;
};

// Spin-1 matrices in the canonical ordering {|1>, |0>, |-1>}.
inline SpinOperatorSet spin1_operators() {
  const double r = 1.0 / std::sqrt(2.0);
  SpinOperatorSet s;
  s.sx = ComplexMatrix::Zero(3, 3);
  s.sy = ComplexMatrix::Zero(3, 3);
  s.sz = ComplexMatrix::Zero(3, 3);
  s.sx(0, 1) = s.sx(1, 0) = s.sx(1, 2) = s.sx(2, 1) = r;
  s.sy(0, 1) = Complex(0, -r);
  s.sy(1, 0) = Complex(0, r);
  s.sy(1, 2) = Complex(0, -r);
  s.sy(2, 1) = Complex(0, r);
  s.sz(0, 0) = 1.0;
  s.sz(2, 2) = -1.0;
  s.basis_order = {"+1", "0", "-1"};
  return s;
}

// Rows are the kets |+>, |0>, |-> written in canonical coordinates,
// so the matrix maps canonical amplitudes to pm amplitudes.
inline ComplexMatrix pm_change_of_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix u = ComplexMatrix::Zero(3, 3);
  u(0, 0) = r;
  u(0, 2) = r;
  u(1, 1) = 1.0;
  u(2, 0) = r;
  u(2, 2) = -r;
  return u;
}

// Same operators rewritten in the {|+>, |0>, |->} ordering:
// sx = |0><+| + h.c., sy = i|0><-| + h.c., sz = |+><-| + h.c.
inline SpinOperatorSet spin1_operators_pm() {
  const SpinOperatorSet c = spin1_operators();
  const ComplexMatrix u = pm_change_of_basis();
  SpinOperatorSet s;
  s.sx = u * c.sx * u.adjoint();
  s.sy = u * c.sy * u.adjoint();
  s.sz = u * c.sz * u.adjoint();
  s.basis_order = {"+", "0", "-"};
  return s;
}

}  // namespace dqe
