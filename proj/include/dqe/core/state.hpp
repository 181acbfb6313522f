#pragma once

#include <string>

#include "dqe/core/linalg.hpp"

namespace dqe {

// canonical: {|1>,|0>,|-1>} products, pm: {|+>,|0>,|->} products,
// symmetric: bright/dark ordering of the two-NV space
enum class Basis { canonical, pm, symmetric };

inline const char* to_string(Basis b) {
  switch (b) {
    case Basis::canonical: return "canonical";
    case Basis::pm: return "pm";
    case Basis::symmetric: return "symmetric";
  }
  return "unknown";
}

struct StateVector {
  ComplexVector amplitudes;
  Basis basis = Basis::canonical;

  Eigen::Index dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
};

inline StateVector basis_state(Eigen::Index dim, Eigen::Index index, Basis basis = Basis::canonical) {
  if (index < 0 || index >= dim) throw ModelError("basis_state: index out of range");
  StateVector s{ComplexVector::Zero(dim), basis};
  s.amplitudes(index) = 1.0;
  return s;
}

inline void require_normalized(const StateVector& psi, std::string_view what, double tol = 1e-9) {
  const double n = psi.norm();
  if (std::abs(n - 1.0) > tol)
    throw ModelError(std::string(what) + ": state is not normalized (norm " + std::to_string(n) + ")");
}

}  // namespace dqe
