#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "dqe/core/error.hpp"

namespace dqe {

struct DipoleCoeffs {
  double axx = 0, ayy = 0, azz = 0;
  bool operator==(const DipoleCoeffs&) const = default;
};

// All rates in units of the Rabi amplitude unless a preset says otherwise.
struct ModelParams {
  double omega_rabi = 1.0;
  double delta = 0.0;
  double mu_b = 0.0;
  double dip_prefactor = 0.0;
  double theta = 0.0;
  double omega_carrier = 0.0;
  // Explicit diagonal couplings; replaces the geometric ones when set.
  // The zero-field experiment is parameterized this way.
  std::optional<DipoleCoeffs> couplings;

  bool operator==(const ModelParams&) const = default;

  void validate() const {
    if (!std::isfinite(omega_rabi) || !std::isfinite(delta) || !std::isfinite(mu_b) ||
        !std::isfinite(dip_prefactor) || !std::isfinite(theta) || !std::isfinite(omega_carrier))
      throw ModelError("ModelParams: non-finite field");
    if (dip_prefactor < 0) throw ModelError("ModelParams: dip_prefactor must be >= 0");
    if (theta < 0 || theta > std::numbers::pi / 2 + 1e-12)
      throw ModelError("ModelParams: theta must lie in [0, pi/2], got " + std::to_string(theta));
  }
};

// A_jk = c (delta_jk - 3 r_j r_k) with r = (sin theta, 0, cos theta)
inline Eigen::Matrix3d dipole_tensor(const ModelParams& p) {
  if (p.couplings) {
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    a(0, 0) = p.couplings->axx;
    a(1, 1) = p.couplings->ayy;
    a(2, 2) = p.couplings->azz;
    return a;
  }
  const Eigen::Vector3d r(std::sin(p.theta), 0.0, std::cos(p.theta));
  return p.dip_prefactor * (Eigen::Matrix3d::Identity() - 3.0 * r * r.transpose());
}

inline DipoleCoeffs dipole_coeffs(const ModelParams& p) {
  if (p.couplings) return *p.couplings;
  const double s = std::sin(p.theta), c = std::cos(p.theta);
  DipoleCoeffs d;
  d.axx = p.dip_prefactor * (1.0 - 3.0 * s * s);
  d.azz = p.dip_prefactor * (1.0 - 3.0 * c * c);
  d.ayy = -(d.axx + d.azz);
  return d;
}

// theta where azz vanishes, and where axx vanishes
inline double theta_azz_zero() { return std::acos(1.0 / std::sqrt(3.0)); }
inline double theta_axx_zero() { return std::asin(1.0 / std::sqrt(3.0)); }

}  // namespace dqe
