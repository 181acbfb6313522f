#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dqe/model/params.hpp"

namespace dqe {

struct PhysicalInputs {
  double separation_nm = 0.0;
  double b_field_mT = 0.0;
  double rabi_MHz = 0.0;
  double theta = 0.0;
  bool operator==(const PhysicalInputs&) const = default;
};

namespace constants {
inline constexpr double mu0 = 1.25663706212e-6;        // vacuum permeability, N/A^2
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double gyro_hz_per_tesla = 28.0e9;    // NV electron, mu/(2 pi hbar)
inline constexpr double zero_field_splitting_hz = 2.87e9;
inline constexpr double exchange_warning_nm = 3.0;
}  // namespace constants

struct ConvertedUnits {
  ModelParams params;
  double omega_rad_s = 0.0;
  double dip_prefactor_rad_s = 0.0;
  double zeeman_rad_s = 0.0;
  std::vector<std::string> warnings;
};

// dip_prefactor = mu0 hbar gamma^2 / (4 pi r^3) in rad/s, gamma = 2 pi * 28 GHz/T,
// then every rate is divided by Omega = 2 pi * rabi_MHz * 1e6.
inline ConvertedUnits convert_units(const PhysicalInputs& in) {
  if (!(in.separation_nm > 0)) throw ModelError("convert_units: separation_nm must be positive");
  if (!(in.rabi_MHz > 0)) throw ModelError("convert_units: rabi_MHz must be positive");
  if (!(in.b_field_mT >= 0)) throw ModelError("convert_units: b_field_mT must be non-negative");
  using namespace constants;
  const double gamma = 2.0 * std::numbers::pi * gyro_hz_per_tesla;
  const double r = in.separation_nm * 1e-9;
  ConvertedUnits c;
  c.omega_rad_s = 2.0 * std::numbers::pi * in.rabi_MHz * 1e6;
  c.dip_prefactor_rad_s = mu0 / (4.0 * std::numbers::pi) * hbar * gamma * gamma / (r * r * r);
  c.zeeman_rad_s = gamma * in.b_field_mT * 1e-3;
  c.params.omega_rabi = 1.0;
  c.params.dip_prefactor = c.dip_prefactor_rad_s / c.omega_rad_s;
  c.params.mu_b = c.zeeman_rad_s / c.omega_rad_s;
  c.params.theta = in.theta;
  c.params.validate();
  if (in.separation_nm < exchange_warning_nm)
    c.warnings.push_back("separation below 3 nm: exchange interaction is no longer negligible against the dipolar coupling");
  return c;
}

}  // namespace dqe
