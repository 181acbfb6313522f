#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "dqe/dynamics/protocols.hpp"

namespace dqe {

struct RwaCheckPoint {
  double carrier_ratio = 0.0;
  double overlap = 0.0;
  double t_span = 0.0;
  std::size_t steps = 0;
  double dt = 0.0;
};

struct RwaValidation {
  std::vector<RwaCheckPoint> points;
  bool monotone = true;  // overlap increases with the ratio, in the order given after sorting
};

// Lab-frame propagation (counter-rotating drive and cross dipole terms kept),
// rotated back by exp(+i H0 t), against static RWA propagation from |00>.
inline RwaCheckPoint rwa_check(const ModelParams& params, double ratio, double t_span, int steps_per_period = 40) {
  if (ratio < 50) throw ModelError("rwa_validation: carrier ratio must be >= 50");
  ModelParams p = params;
  p.omega_carrier = ratio * std::abs(p.omega_rabi);
  const LabHamiltonian lab = lab_hamiltonian(p);
  const StateVector g{canonical_ket("00"), Basis::canonical};
  const double dt = 2.0 * std::numbers::pi / p.omega_carrier / steps_per_period;
  TimedepStats stats;
  const StateVector lab_final = propagate_timedep(lab, g, t_span, dt, &stats);
  const ComplexVector rotated = expm_hermitian(rotating_frame_generator(p), -t_span) * lab_final.amplitudes;
  const StateVector rwa_final = propagate_static(hamiltonian_rwa(p), g, t_span);
  RwaCheckPoint pt;
  pt.carrier_ratio = ratio;
  pt.overlap = std::norm(rwa_final.amplitudes.dot(rotated));
  pt.t_span = t_span;
  pt.steps = stats.steps;
  pt.dt = stats.dt;
  return pt;
}

// t_span = 0 uses one |00> -> |N> transfer, the predicted half-flop time.
inline RwaValidation rwa_validation(const ModelParams& params, std::vector<double> ratios, double t_span = 0.0,
                                    int steps_per_period = 40) {
  if (t_span <= 0) t_span = predicted_half_flop(Protocol::N, params);
  std::sort(ratios.begin(), ratios.end());
  RwaValidation v;
  for (double r : ratios) v.points.push_back(rwa_check(params, r, t_span, steps_per_period));
  for (std::size_t i = 1; i < v.points.size(); ++i)
    if (!(v.points[i].overlap > v.points[i - 1].overlap)) v.monotone = false;
  return v;
}

}  // namespace dqe
