#pragma once

#include <cmath>
#include <sstream>

#include "dqe/core/linalg.hpp"
#include "dqe/core/state.hpp"

namespace dqe {

// Caches the eigendecomposition of a static Hamiltonian so that many
// sample times cost one diagonal phase each.
class StaticPropagator {
 public:
  explicit StaticPropagator(const ComplexMatrix& h) {
    require_hermitian(h, "propagate_static");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  const Eigen::VectorXd& energies() const { return energies_; }
  const ComplexMatrix& eigenvectors() const { return vectors_; }

  // amplitudes of psi0 in the eigenbasis, reusable across times
  ComplexVector project(const ComplexVector& psi0) const { return vectors_.adjoint() * psi0; }

  ComplexVector evolve_projected(const ComplexVector& coeffs, double t) const {
    ComplexVector c(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
      c(k) = coeffs(k) * std::exp(Complex(0.0, -energies_(k) * t));
    return vectors_ * c;
  }

  StateVector apply(const StateVector& psi0, double t) const {
    if (t < 0) throw ModelError("propagate_static: negative time");
    if (psi0.dim() != vectors_.rows()) throw ModelError("propagate_static: dimension mismatch");
    return {evolve_projected(project(psi0.amplitudes), t), psi0.basis};
  }

 private:
  Eigen::VectorXd energies_;
  ComplexMatrix vectors_;
};

inline StateVector propagate_static(const ComplexMatrix& h, const StateVector& psi0, double t) {
  require_normalized(psi0, "propagate_static");
  return StaticPropagator(h).apply(psi0, t);
}

struct TimedepStats {
  std::size_t steps = 0;
  double dt = 0.0;
  double norm_drift = 0.0;
};

// Exponential midpoint rule: each step applies exp(-i h(t + dt/2) dt).
// The step is shrunk so an integer number of steps lands on t_final.
template <class HamiltonianFn>
StateVector propagate_timedep(HamiltonianFn&& h_of_t, const StateVector& psi0, double t_final,
                              double dt, TimedepStats* stats = nullptr) {
  if (!(dt > 0)) throw ModelError("propagate_timedep: dt must be positive");
  if (t_final < 0) throw ModelError("propagate_timedep: negative final time");
  require_normalized(psi0, "propagate_timedep");
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-12));
  const double h = steps ? t_final / static_cast<double>(steps) : 0.0;
  ComplexVector psi = psi0.amplitudes;
  for (std::size_t n = 0; n < steps; ++n) {
    const ComplexMatrix hm = h_of_t((static_cast<double>(n) + 0.5) * h);
    require_hermitian(hm, "propagate_timedep");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hm);
    ComplexVector c = es.eigenvectors().adjoint() * psi;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(Complex(0.0, -es.eigenvalues()(k) * h));
    psi = es.eigenvectors() * c;
  }
  const double drift = std::abs(psi.norm() - 1.0);
  if (stats) *stats = {steps, h, drift};
  if (drift > 1e-6) {
    std::ostringstream os;
    os << "propagate_timedep: norm drift " << drift << " after " << steps << " steps of dt = " << h
       << "; reduce the step size";
    throw NumericalError(os.str());
  }
  return {psi, psi0.basis};
}

}  // namespace dqe
