#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>

#include "dqe/core/state.hpp"
#include "dqe/model/basis.hpp"

namespace dqe {

// Coordinates of a labelled two-NV ket in the given basis.
inline ComplexVector ket_in(std::string_view label, Basis basis) {
  return canonical_to(basis) * canonical_ket(label);
}

inline double population(const StateVector& psi, std::string_view label) {
  if (psi.dim() != 9) throw ModelError("population: labels are defined on the 9-dim two-NV space");
  return std::norm(ket_in(label, psi.basis).dot(psi.amplitudes));
}

inline double fidelity(const StateVector& psi, const StateVector& target) {
  if (psi.basis != target.basis) throw ModelError("fidelity: basis mismatch");
  if (psi.dim() != target.dim()) throw ModelError("fidelity: dimension mismatch");
  return std::clamp(std::norm(target.amplitudes.dot(psi.amplitudes)), 0.0, 1.0);
}

// Entropy of one NV's reduced state divided by log 2 (configurable) and clamped to [0, 1].
inline double degree_of_entanglement(const StateVector& psi, double normalization = std::numbers::ln2) {
  if (psi.dim() != 9) throw ModelError("degree_of_entanglement: expected a two-qutrit state");
  const StateVector c = to_basis(psi, Basis::canonical);
  // coefficient matrix C[a, b] with index 3a + b; rho_1 = C C^dagger
  ComplexMatrix cm(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) cm(a, b) = c.amplitudes(3 * a + b);
  const ComplexMatrix rho = cm * cm.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < 3; ++k) {
    const double l = es.eigenvalues()(k);
    if (l > 1e-300) s -= l * std::log(l);
  }
  return std::clamp(s / normalization, 0.0, 1.0);
}

// Phase of <--|psi> relative to <++|psi>, when both amplitudes exceed 0.1.
inline std::optional<double> relative_phase(const StateVector& psi) {
  const Complex app = ket_in("++", psi.basis).dot(psi.amplitudes);
  const Complex amm = ket_in("--", psi.basis).dot(psi.amplitudes);
  if (std::abs(app) <= 0.1 || std::abs(amm) <= 0.1) return std::nullopt;
  return std::arg(amm / app);
}

// (|++> + e^{i phi}|-->)/sqrt(2)
inline StateVector bell_pm_state(double phi, Basis basis = Basis::symmetric) {
  const ComplexVector v = (canonical_ket("++") + std::exp(Complex(0, phi)) * canonical_ket("--")) / std::sqrt(2.0);
  return to_basis(StateVector{v, Basis::canonical}, basis);
}

// Best overlap with (|++> + e^{i phi}|-->)/sqrt(2) over phi: (|a++| + |a--|)^2 / 2
inline double bell_fidelity(const StateVector& psi) {
  const double a = std::abs(ket_in("++", psi.basis).dot(psi.amplitudes));
  const double b = std::abs(ket_in("--", psi.basis).dot(psi.amplitudes));
  return std::clamp(0.5 * (a + b) * (a + b), 0.0, 1.0);
}

struct EntanglementReport {
  double fidelity_to_target = 0.0;
  double doe = 0.0;
  std::optional<double> relative_phase;
};

}  // namespace dqe
