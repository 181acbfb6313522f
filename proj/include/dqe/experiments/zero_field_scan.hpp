#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dqe/dynamics/protocols.hpp"

namespace dqe {

struct ZeroFieldScanPoint {
  double ratio = 0.0;  // Omega_eff / azz
  double axx = 0.0;
  double depletion_time = 0.0;
  double ground_population = 1.0;
  double bell_fidelity = 0.0;
  EntanglementReport report;
  bool raman_regime = false;
};

struct ZeroFieldScan {
  std::vector<ZeroFieldScanPoint> points;
  double best_ratio = 0.0;
  ZeroFieldScanPoint best;
  std::vector<ZeroFieldScanPoint> candidates;  // the two quoted ratios, 0.1293 and 1.293
  std::string verdict;
};

inline constexpr double kQuotedRatioSmall = 0.1293;
inline constexpr double kQuotedRatioLarge = 1.293;

// Couplings realising Omega_eff = ratio * azz with Omega_eff = -Omega^2/(2 axx);
// ayy closes the traceless dipole tensor.
inline ModelParams zero_field_params(const ModelParams& base, double ratio) {
  ModelParams p = base;
  const double azz = base.couplings ? base.couplings->azz : dipole_coeffs(base).azz;
  if (ratio == 0.0 || azz == 0.0) throw SingularityError("zero_field_params: ratio and azz must be nonzero");
  DipoleCoeffs c;
  c.azz = azz;
  c.axx = -base.omega_rabi * base.omega_rabi / (2.0 * ratio * azz);
  c.ayy = -(c.axx + c.azz);
  p.couplings = c;
  p.mu_b = 0.0;
  p.delta = 0.0;
  return p;
}

inline ZeroFieldScanPoint zero_field_point(const ModelParams& base, double ratio, int n_samples = 200) {
  const ModelParams p = zero_field_params(base, ratio);
  RunOptions opt;
  opt.n_samples = n_samples;
  const ZeroFieldRun run = run_protocol_zero_field(p, opt);
  ZeroFieldScanPoint pt;
  pt.ratio = ratio;
  pt.axx = p.couplings->axx;
  pt.depletion_time = run.depletion_time;
  pt.ground_population = run.ground_population;
  pt.bell_fidelity = run.bell_fidelity;
  pt.report = run.report;
  pt.raman_regime = raman_regime(p);
  return pt;
}

// The score is the Bell-state fidelity at the |00> minimum; the clamped DoE
// saturates at 1 over a whole band of ratios and cannot single out one of them.
inline ZeroFieldScan zero_field_scan(const ModelParams& base, double ratio_lo, double ratio_hi, int n_points) {
  if (n_points < 2) throw ModelError("zero_field_scan: n_points must be >= 2");
  if (!(ratio_lo > 0) || !(ratio_hi > ratio_lo)) throw ModelError("zero_field_scan: need 0 < ratio_lo < ratio_hi");
  ZeroFieldScan s;
  // geometric grid, the two quoted ratios differ by a decade
  for (int i = 0; i < n_points; ++i) {
    const double r = ratio_lo * std::pow(ratio_hi / ratio_lo, static_cast<double>(i) / (n_points - 1));
    s.points.push_back(zero_field_point(base, r));
  }
  std::size_t ib = 0;
  for (std::size_t i = 1; i < s.points.size(); ++i)
    if (s.points[i].bell_fidelity > s.points[ib].bell_fidelity) ib = i;
  // polish between the neighbouring grid ratios
  const double lo = s.points[ib > 0 ? ib - 1 : 0].ratio, hi = s.points[std::min(ib + 1, s.points.size() - 1)].ratio;
  auto score = [&](double r) { return zero_field_point(base, r).bell_fidelity; };
  const Peak g = golden_maximize(score, lo, hi, 40);
  s.best = g.value > s.points[ib].bell_fidelity ? zero_field_point(base, g.time) : s.points[ib];
  s.best_ratio = s.best.ratio;
  s.candidates = {zero_field_point(base, kQuotedRatioSmall), zero_field_point(base, kQuotedRatioLarge)};

  const bool near_small = std::abs(s.best_ratio / kQuotedRatioSmall - 1.0) <= 0.05;
  const bool near_large = std::abs(s.best_ratio / kQuotedRatioLarge - 1.0) <= 0.05;
  if (near_small != near_large)
    s.verdict = near_large ? "1.293" : "0.1293";
  else
    s.verdict = "neither";
  return s;
}

}  // namespace dqe
