#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "dqe/dynamics/protocols.hpp"

namespace dqe {

// cubic: root of the cleared resonance polynomial.
// tuned: that root refined by maximising the peak population (never below the reference).
// fixed_half_azz: untuned reference -+azz/2.
enum class Tuning { cubic, tuned, fixed_half_azz };

inline const char* to_string(Tuning t) {
  switch (t) {
    case Tuning::cubic: return "cubic";
    case Tuning::tuned: return "tuned";
    case Tuning::fixed_half_azz: return "fixed_half_azz";
  }
  return "unknown";
}

struct SweepConfig {
  Protocol protocol = Protocol::N;
  ModelParams base;
  double theta_min = 0.0;
  double theta_max = std::numbers::pi / 2;
  int n_theta = 200;
  int n_time = 2000;
  double window_factor = 4.0;
  Tuning tuning = Tuning::tuned;
  unsigned threads = 0;  // 0 uses the hardware concurrency
  bool operator==(const SweepConfig&) const = default;
};

struct SweepPoint {
  double theta = 0.0;
  DipoleCoeffs coeffs;
  double delta = 0.0;
  double delta_polynomial = 0.0;  // root of the resonance polynomial, NaN if unavailable
  double t_max = 0.0;
  std::vector<double> times;
  std::vector<double> population;
  double t_peak = 0.0;
  double p_peak = 0.0;
  double t_rise = 0.0;  // first time the population reaches 90% of p_peak
  bool degenerate_azz = false;  // |azz| < 1e-3 Omega
  bool degenerate_axx = false;  // |axx| < 1e-3 Omega
  bool tuner_degenerate = false;
  std::string error;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepPoint> points;

  std::vector<double> theta_grid() const {
    std::vector<double> v;
    for (const auto& p : points) v.push_back(p.theta);
    return v;
  }
};

inline constexpr double kDegeneracyWindow = 1e-3;

inline SweepPoint sweep_point(const SweepConfig& cfg, double theta) {
  SweepPoint pt;
  pt.theta = theta;
  ModelParams p = cfg.base;
  p.theta = theta;
  pt.coeffs = dipole_coeffs(p);
  const double w = std::abs(p.omega_rabi);
  pt.degenerate_azz = std::abs(pt.coeffs.azz) < kDegeneracyWindow * w;
  pt.degenerate_axx = std::abs(pt.coeffs.axx) < kDegeneracyWindow * w;
  pt.delta_polynomial = std::numeric_limits<double>::quiet_NaN();

  const double reference = half_azz_detuning(cfg.protocol, p);
  // the time window depends only on the reference detuning, so every tuning
  // mode samples the same grid at a given theta
  {
    ModelParams q = p;
    q.delta = reference;
    pt.t_max = cfg.window_factor * predicted_half_flop(cfg.protocol, q);
  }
  pt.times = linspace(0.0, pt.t_max, cfg.n_time);

  pt.delta = reference;
  if (cfg.tuning != Tuning::fixed_half_azz) {
    try {
      const TunedDetuning td = tune_detuning(cfg.protocol, p);
      pt.tuner_degenerate = td.degenerate;
      if (!td.degenerate) pt.delta_polynomial = td.delta;
      pt.delta = td.delta;
    } catch (const Error& e) {
      pt.error = e.what();
    }
    if (cfg.tuning == Tuning::tuned && !pt.tuner_degenerate) {
      std::vector<double> seeds;
      if (std::isfinite(pt.delta_polynomial)) seeds.push_back(pt.delta_polynomial);
      pt.delta = refine_detuning(cfg.protocol, p, pt.times, seeds).delta;
    }
  }
  p.delta = pt.delta;
  const PopulationProbe probe = bright_probe(cfg.protocol, p);
  pt.population.resize(pt.times.size());
  for (std::size_t i = 0; i < pt.times.size(); ++i) pt.population[i] = std::clamp(probe(pt.times[i]), 0.0, 1.0);
  const auto it = std::max_element(pt.population.begin(), pt.population.end());
  pt.p_peak = *it;
  pt.t_peak = pt.times[static_cast<std::size_t>(it - pt.population.begin())];
  // first crossing of 90% of the peak, bisected between grid samples
  const double level = 0.9 * pt.p_peak;
  for (std::size_t i = 0; i < pt.times.size(); ++i)
    if (pt.population[i] >= level) {
      double a = i > 0 ? pt.times[i - 1] : pt.times[i], b = pt.times[i];
      for (int k = 0; k < 60 && b - a > 0; ++k) {
        const double m = 0.5 * (a + b);
        (probe(m) >= level ? b : a) = m;
      }
      pt.t_rise = b;
      break;
    }
  return pt;
}

inline SweepResult sweep_theta(const SweepConfig& cfg) {
  if (cfg.n_theta < 2) throw ModelError("sweep_theta: n_theta must be >= 2");
  if (cfg.n_time < 2) throw ModelError("sweep_theta: n_time must be >= 2");
  SweepResult r;
  r.config = cfg;
  const auto thetas = linspace(cfg.theta_min, cfg.theta_max, cfg.n_theta);
  r.points.resize(thetas.size());
  unsigned n = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(thetas.size()));
  auto work = [&](unsigned id) {
    for (std::size_t i = id; i < thetas.size(); i += n) {
      try {
        r.points[i] = sweep_point(cfg, thetas[i]);
      } catch (const std::exception& e) {
        r.points[i].theta = thetas[i];
        r.points[i].error = e.what();
      }
    }
  };
  if (n <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < n; ++id) pool.emplace_back(work, id);
    for (auto& t : pool) t.join();
  }
  return r;
}

struct RateTrend {
  std::vector<double> theta;
  std::vector<double> t_peak;
  std::vector<double> t_rise;
  double theta_lo = 0.0, theta_hi = 0.0;
  bool increasing = true;
  std::vector<double> violations;  // theta values where t_rise decreases
};

// Checks that the transfer slows down with theta on [lo, hi], skipping
// degenerate points. The global maximum can sit on a later flop, so the
// speed is judged by the rise time to 90% of the peak.
inline RateTrend transfer_rate_trend(const SweepResult& r, double lo = 0.0, double hi = 0.3 * std::numbers::pi) {
  if (r.points.size() < 2) throw ModelError("transfer_rate_trend: need at least two theta points");
  RateTrend t;
  t.theta_lo = lo;
  t.theta_hi = hi;
  double prev = -1.0;
  for (const auto& p : r.points) {
    t.theta.push_back(p.theta);
    t.t_peak.push_back(p.t_peak);
    t.t_rise.push_back(p.t_rise);
    if (p.theta < lo || p.theta > hi || p.degenerate_azz || p.degenerate_axx || !p.error.empty()) continue;
    if (prev >= 0 && p.t_rise < prev) {
      t.increasing = false;
      t.violations.push_back(p.theta);
    }
    prev = p.t_rise;
  }
  return t;
}

}  // namespace dqe
