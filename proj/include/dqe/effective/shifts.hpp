#pragma once

#include <cmath>
#include <string>

#include "dqe/core/error.hpp"
#include "dqe/model/params.hpp"

namespace dqe {

namespace detail {
inline void require_nonzero(double value, double scale, const char* factor) {
  if (std::abs(value) <= 1e-12 * std::max(1.0, scale))
    throw SingularityError(std::string("vanishing denominator: ") + factor);
}
}  // namespace detail

// Shift of |P0+> after eliminating {P, P+-, P0-}, exact Schur complement:
// delta = -(muB Omega)^2 (2y + azz)^2 / (azz y (4y(azz^2 - 4 muB^2) - azz Omega^2))
//         - Omega^2/(4 azz) - muB^2 / y,   y = ayy + Delta
inline double shift_delta_N(const ModelParams& p) {
  const DipoleCoeffs a = dipole_coeffs(p);
  const double w = p.omega_rabi, m = p.mu_b, y = a.ayy + p.delta;
  const double e = 4.0 * y * (a.azz * a.azz - 4.0 * m * m) - a.azz * w * w;
  const double scale = std::abs(a.azz) + std::abs(y) + w + std::abs(m);
  detail::require_nonzero(a.azz, scale, "azz");
  detail::require_nonzero(y, scale, "ayy + Delta");
  detail::require_nonzero(e, scale * scale * scale, "4(ayy+Delta)(azz^2 - 4 muB^2) - azz Omega^2");
  const double t = 2.0 * y + a.azz;
  return -(m * w) * (m * w) * t * t / (a.azz * y * e) - w * w / (4.0 * a.azz) - m * m / y;
}

struct ShiftsP {
  double delta_prime = 0;   // on |P>
  double alpha = 0;         // extra |P>-|P0+> coupling
  double delta_dprime = 0;  // on |P0+>
};

// After eliminating {P+-, P0-, N}, with L = azz y - Omega^2/4:
// delta' = -4 muB^2 y / L, alpha = muB^2 Omega / L,
// delta'' = Omega^2/(4 azz) - muB^2 / (y - Omega^2/(4 azz))
inline ShiftsP shifts_P(const ModelParams& p) {
  const DipoleCoeffs a = dipole_coeffs(p);
  const double w = p.omega_rabi, m = p.mu_b, y = a.ayy + p.delta;
  const double scale = std::abs(a.azz) + std::abs(y) + w;
  detail::require_nonzero(a.azz, scale, "azz");
  const double l = a.azz * y - w * w / 4.0;
  detail::require_nonzero(l, scale * scale, "azz(ayy+Delta) - Omega^2/4");
  const double k = y - w * w / (4.0 * a.azz);
  detail::require_nonzero(k, scale, "ayy + Delta - Omega^2/(4 azz)");
  ShiftsP s;
  s.delta_prime = -4.0 * m * m * y / l;
  s.alpha = m * m * w / l;
  s.delta_dprime = w * w / (4.0 * a.azz) - m * m / k;
  return s;
}

}  // namespace dqe
