#pragma once

#include <cmath>

#include "dqe/effective/elimination.hpp"
#include "dqe/model/hamiltonian.hpp"

namespace dqe {

namespace detail {
inline void require_zero_field(const ModelParams& p, const char* who) {
  if (p.mu_b != 0.0 || p.delta != 0.0) throw ModelError(std::string(who) + ": requires mu_b = 0 and delta = 0");
}
}  // namespace detail

// Coupling between |00> and |++> after eliminating |P0+>. Each of the two
// legs carries Omega/sqrt(2), so the Raman coupling is -Omega^2/(2 axx).
inline double effective_coupling(const ModelParams& p) {
  detail::require_zero_field(p, "effective_coupling");
  const double axx = dipole_coeffs(p).axx;
  if (std::abs(axx) <= 1e-12 * std::max(1.0, std::abs(p.omega_rabi)))
    throw SingularityError("effective_coupling: axx vanishes");
  return -p.omega_rabi * p.omega_rabi / (2.0 * axx);
}

// Three-level model over {|00>, |++>, |-->}.
inline ComplexMatrix zero_field_effective(const ModelParams& p) {
  const double we = effective_coupling(p);
  const double azz = dipole_coeffs(p).azz;
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 0) = h(1, 1) = h(0, 1) = h(1, 0) = we;
  h(1, 2) = h(2, 1) = azz;
  return h;
}

// The same reduction done by matrix elimination of |P0+> from the four-level block.
inline ComplexMatrix zero_field_eliminated(const ModelParams& p) {
  detail::require_zero_field(p, "zero_field_eliminated");
  const ComplexMatrix b = zero_field_block(p);
  return adiabatic_eliminate(make_split(b, {0, 2, 3}, {1}, {"00", "P0+", "++", "--"}));
}

// Raman regime: Omega/2 < |axx| and |azz| < |Omega_eff|.
inline bool raman_regime(const ModelParams& p) {
  const DipoleCoeffs a = dipole_coeffs(p);
  return 0.5 * std::abs(p.omega_rabi) < std::abs(a.axx) && std::abs(a.azz) < std::abs(effective_coupling(p));
}

}  // namespace dqe
