#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "dqe/effective/elimination.hpp"
#include "dqe/effective/polynomial.hpp"
#include "dqe/effective/shifts.hpp"

namespace dqe {

struct TunedDetuning {
  double delta = 0.0;
  double residual = 0.0;            // |polynomial(delta)|
  double condition_residual = 0.0;  // uncleared resonance condition at delta
  int root_branch = -1;             // index into real_roots, ascending order
  bool degenerate = false;
  int degree = 0;
  std::vector<double> coefficients;  // highest degree first
  std::vector<std::complex<double>> roots;
  std::vector<double> real_roots;
};

inline double degeneracy_tolerance(const ModelParams& p) { return 1e-6 * std::abs(p.omega_rabi); }

// Reference detuning -azz/2 (N) or +azz/2 (P), also the untuned fallback.
inline double half_azz_detuning(Protocol protocol, const ModelParams& p) {
  const double azz = dipole_coeffs(p).azz;
  return protocol == Protocol::N ? -0.5 * azz : 0.5 * azz;
}

// Uncleared resonance condition at p.delta, zero on resonance.
// N: 2 Delta + azz - Omega^2 / (4 (axx + Delta + delta))
// P: 2 Delta - Omega^2/(2X) - azz - delta' + (Omega/2 + alpha)^2 / X,  X = axx + Delta + delta''
inline double resonance_residual(Protocol protocol, const ModelParams& p) {
  const DipoleCoeffs a = dipole_coeffs(p);
  const double w = p.omega_rabi, d = p.delta;
  if (protocol == Protocol::N) {
    const double x = a.axx + d + shift_delta_N(p);
    detail::require_nonzero(x, std::abs(a.axx) + std::abs(d), "axx + Delta + delta");
    return 2.0 * d + a.azz - w * w / (4.0 * x);
  }
  const ShiftsP s = shifts_P(p);
  const double x = a.axx + d + s.delta_dprime;
  detail::require_nonzero(x, std::abs(a.axx) + std::abs(d), "axx + Delta + delta''");
  const double h = 0.5 * w + s.alpha;
  return 2.0 * d - w * w / (2.0 * x) - a.azz - s.delta_prime + h * h / x;
}

// Resonance condition with the closed-form shifts substituted and every
// denominator cleared, as a polynomial in Delta.
// N (cubic): (2D + azz)(4(axx + D)E - M) - Omega^2 E, divided by 32 azz, with
//   E = 4(azz^2 - 4 muB^2) y - azz Omega^2,
//   M = 16 azz^2 muB^2 + 4 azz Omega^2 y - Omega^4 + 16 Omega^2 muB^2 - 64 muB^4, y = ayy + D.
// P (quartic): [(2D - azz)L + 4 muB^2 y][(axx + D + Omega^2/(4 azz))L - muB^2 azz]
//   - Omega^2 L^2/4 + Omega^2 muB^2 L + Omega^2 muB^4, divided by 2 azz^2, with L = azz y - Omega^2/4.
inline Polynomial resonance_polynomial(Protocol protocol, const ModelParams& p) {
  const DipoleCoeffs a = dipole_coeffs(p);
  const double w = p.omega_rabi, m = p.mu_b, w2 = w * w, m2 = m * m;
  const Polynomial D = Polynomial::linear(0.0, 1.0);
  const Polynomial y = D + a.ayy;
  if (protocol == Protocol::N) {
    const Polynomial e = (4.0 * (a.azz * a.azz - 4.0 * m2)) * y - a.azz * w2;
    const Polynomial mm = (4.0 * a.azz * w2) * y + (16.0 * a.azz * a.azz * m2 - w2 * w2 + 16.0 * w2 * m2 - 64.0 * m2 * m2);
    const Polynomial poly = (2.0 * D + a.azz) * ((4.0 * (D + a.axx)) * e - mm) - w2 * e;
    return (1.0 / (32.0 * a.azz)) * poly;
  }
  const Polynomial l = a.azz * y - 0.25 * w2;
  const Polynomial first = (2.0 * D - a.azz) * l + (4.0 * m2) * y;
  const Polynomial second = (D + (a.axx + w2 / (4.0 * a.azz))) * l - m2 * a.azz;
  const Polynomial poly = first * second - (0.25 * w2) * (l * l) + (w2 * m2) * l + w2 * m2 * m2;
  return (1.0 / (2.0 * a.azz * a.azz)) * poly;
}

inline TunedDetuning tune_detuning(Protocol protocol, const ModelParams& params) {
  ModelParams p = params;
  TunedDetuning out;
  const double azz = dipole_coeffs(p).azz;
  if (std::abs(azz) < degeneracy_tolerance(p)) {
    out.degenerate = true;
    out.delta = 0.0;
    return out;
  }
  const Polynomial poly = resonance_polynomial(protocol, p);
  out.degree = poly.degree();
  out.coefficients = poly.descending();
  out.roots = polynomial_roots(poly);

  const double target = half_azz_detuning(protocol, p);
  const double window = 0.5 * std::abs(azz) + 2.0 * std::abs(p.omega_rabi);
  struct Candidate {
    double x, dist, cond;
  };
  std::vector<Candidate> valid;
  for (const auto& z : out.roots) {
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
    const double x = polish_root(poly, z.real());
    out.real_roots.push_back(x);
    p.delta = x;
    double cond = std::numeric_limits<double>::infinity();
    try {
      cond = std::abs(resonance_residual(protocol, p));
    } catch (const SingularityError&) {
      continue;  // root where a cleared denominator vanishes
    }
    if (!(cond < 1e-6 * std::max(1.0, std::abs(azz)))) continue;
    valid.push_back({x, std::abs(x - target), cond});
  }
  std::sort(out.real_roots.begin(), out.real_roots.end());

  const Candidate* best = nullptr;
  for (const auto& c : valid) {
    if (c.dist > window) continue;
    if (!best) {
      best = &c;
      continue;
    }
    const double tie = 1e-12 * std::max(1.0, std::abs(azz));
    if (c.dist < best->dist - tie) best = &c;
    else if (std::abs(c.dist - best->dist) <= tie) {
      if (c.cond < best->cond || (c.cond == best->cond && std::abs(c.x) < std::abs(best->x))) best = &c;
    }
  }
  if (!best) {
    std::ostringstream os;
    os << "tune_detuning(" << to_string(protocol) << "): no real root near " << target << "; roots:";
    for (const auto& z : out.roots) os << ' ' << z.real() << (z.imag() >= 0 ? "+" : "") << z.imag() << 'i';
    throw SingularityError(os.str());
  }
  out.delta = best->x;
  out.residual = std::abs(poly(best->x));
  out.condition_residual = best->cond;
  out.root_branch = static_cast<int>(std::find(out.real_roots.begin(), out.real_roots.end(), best->x) -
                                     out.real_roots.begin());
  return out;
}

}  // namespace dqe
