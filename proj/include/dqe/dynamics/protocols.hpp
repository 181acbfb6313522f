#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dqe/core/propagate.hpp"
#include "dqe/dynamics/observables.hpp"
#include "dqe/effective/tuning.hpp"
#include "dqe/effective/zero_field.hpp"

namespace dqe {

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> populations;  // populations[label][sample]
  std::vector<double> doe;
  std::string time_unit;

  const std::vector<double>& series(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return populations[i];
    throw ModelError("Trajectory: no population series for '" + std::string(label) + "'");
  }
};

struct Peak {
  double time = 0.0;
  double value = 0.0;
};

struct RunOptions {
  double t_final = 0.0;  // 0 selects window_factor times the predicted half-flop
  int n_samples = 2000;
  double window_factor = 4.0;
  bool operator==(const RunOptions&) const = default;
};

inline std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) return {a};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

inline Level target_level(Protocol protocol) { return protocol == Protocol::N ? Level::n : Level::p; }

// Golden-section maximisation of f on [a, b].
template <class F>
Peak golden_maximize(F&& f, double a, double b, int iters = 60) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && (b - a) > 1e-14 * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? Peak{x1, f1} : Peak{x2, f2};
}

// Population of a fixed ket along exp(-i h t)|psi0>, reusing one eigendecomposition.
class PopulationProbe {
 public:
  PopulationProbe(const ComplexMatrix& h, const ComplexVector& psi0, const ComplexVector& target)
      : prop_(h), coeffs_(prop_.project(psi0)), target_proj_(prop_.eigenvectors().adjoint() * target) {}

  double operator()(double t) const {
    Complex a = 0.0;
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k)
      a += std::conj(target_proj_(k)) * coeffs_(k) * std::exp(Complex(0.0, -prop_.energies()(k) * t));
    return std::norm(a);
  }

  // grid maximum, first occurrence on ties
  Peak grid_peak(const std::vector<double>& times) const {
    Peak best{times.front(), -1.0};
    for (double t : times) {
      const double v = (*this)(t);
      if (v > best.value) best = {t, v};
    }
    return best;
  }

  // grid maximum refined by golden section between the neighbouring samples
  Peak refined_peak(const std::vector<double>& times) const {
    std::size_t i = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double v = (*this)(times[k]);
      if (v > best) {
        best = v;
        i = k;
      }
    }
    const double lo = times[i > 0 ? i - 1 : i], hi = times[std::min(i + 1, times.size() - 1)];
    if (hi <= lo) return {times[i], best};
    const Peak g = golden_maximize(*this, lo, hi);
    return g.value > best ? g : Peak{times[i], best};
  }

 private:
  StaticPropagator prop_;
  ComplexVector coeffs_, target_proj_;
};

inline PopulationProbe bright_probe(Protocol protocol, const ModelParams& p) {
  const ComplexMatrix b = bright_hamiltonian(p, EnergyOrigin::ground);
  ComplexVector psi0 = ComplexVector::Zero(kBrightDim), target = ComplexVector::Zero(kBrightDim);
  psi0(index_of(Level::g00)) = 1.0;
  target(index_of(target_level(protocol))) = 1.0;
  return PopulationProbe(b, psi0, target);
}

namespace detail {
// Half period pi/gap between the two eigenvectors carrying the largest
// |<00|v><target|v>| weight.
inline double half_flop_from(const ComplexMatrix& h, int i00, int itarget) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const auto& v = es.eigenvectors();
  std::vector<std::pair<double, Eigen::Index>> w;
  for (Eigen::Index k = 0; k < v.cols(); ++k) w.push_back({std::abs(v(i00, k) * std::conj(v(itarget, k))), k});
  std::sort(w.begin(), w.end(), [](auto a, auto b) { return a.first > b.first; });
  const double gap = std::abs(es.eigenvalues()(w[0].second) - es.eigenvalues()(w[1].second));
  return gap > 0 ? std::numbers::pi / gap : std::numeric_limits<double>::infinity();
}
}  // namespace detail

inline constexpr double kMaxWindow = 1e5;

// Half-flop time of |00> -> target predicted by the three-level effective model,
// falling back to the full bright block when the dropped block is singular.
inline double predicted_half_flop(Protocol protocol, const ModelParams& p) {
  double t = 0.0;
  try {
    const ComplexMatrix h = protocol_effective_hamiltonian(protocol, p);
    t = detail::half_flop_from(h, 0, 1);
  } catch (const SingularityError&) {
    t = detail::half_flop_from(bright_hamiltonian(p), index_of(Level::g00), index_of(target_level(protocol)));
  }
  return std::min(t, kMaxWindow);
}

struct ProtocolRun {
  Protocol protocol = Protocol::N;
  ModelParams params;
  Trajectory trajectory;
  Peak target_peak;          // maximum on the sampling grid
  Peak target_peak_refined;  // golden-section refinement in time
  double intermediate_peak = 0.0;       // max |P0+> population
  double intermediate_amplitude = 0.0;  // max - min of |P0+> population up to the target peak
  double max_dark_population = 0.0;
};

inline constexpr double kDarkLeakageBound = 1e-10;

inline ProtocolRun run_protocol(Protocol protocol, const ModelParams& p, const RunOptions& opt = {}) {
  p.validate();
  if (opt.n_samples < 2) throw ModelError("run_protocol: n_samples must be >= 2");
  const double t_final =
      opt.t_final > 0 ? opt.t_final : opt.window_factor * predicted_half_flop(protocol, p);
  if (!(t_final > 0) || !std::isfinite(t_final)) throw ModelError("run_protocol: t_final must be positive");

  ProtocolRun run;
  run.protocol = protocol;
  run.params = p;
  Trajectory& tr = run.trajectory;
  tr.time_unit = "1/omega";
  tr.times = linspace(0.0, t_final, opt.n_samples);
  for (auto l : kSymmetricLabels) tr.labels.emplace_back(l);
  tr.populations.assign(9, std::vector<double>(tr.times.size()));

  const StaticPropagator prop(hamiltonian_symmetric(p));
  const ComplexVector c0 = prop.project(basis_state(9, index_of(Level::g00)).amplitudes);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    StateVector s{prop.evolve_projected(c0, tr.times[i]), Basis::symmetric};
    double dark = 0.0;
    for (int k = 0; k < 9; ++k) {
      const double pk = std::norm(s.amplitudes(k));
      tr.populations[static_cast<std::size_t>(k)][i] = pk;
      if (k >= kBrightDim) dark += pk;
    }
    run.max_dark_population = std::max(run.max_dark_population, dark);
    tr.doe.push_back(degree_of_entanglement(s));
    tr.states.push_back(std::move(s));
  }
  if (run.max_dark_population > kDarkLeakageBound)
    throw ModelError("run_protocol: dark-sector population " + std::to_string(run.max_dark_population) +
                     " from |00>; bright/dark decoupling is broken");

  const auto& target = tr.populations[static_cast<std::size_t>(index_of(target_level(protocol)))];
  const auto it = std::max_element(target.begin(), target.end());
  run.target_peak = {tr.times[static_cast<std::size_t>(it - target.begin())], *it};
  run.target_peak_refined = bright_probe(protocol, p).refined_peak(tr.times);

  const auto& inter = tr.populations[static_cast<std::size_t>(index_of(Level::p0p))];
  run.intermediate_peak = *std::max_element(inter.begin(), inter.end());
  const auto upto = inter.begin() + (it - target.begin()) + 1;
  run.intermediate_amplitude = *std::max_element(inter.begin(), upto) - *std::min_element(inter.begin(), upto);
  return run;
}

inline ProtocolRun run_protocol_N(const ModelParams& p, const RunOptions& opt = {}) {
  return run_protocol(Protocol::N, p, opt);
}
inline ProtocolRun run_protocol_P(const ModelParams& p, const RunOptions& opt = {}) {
  return run_protocol(Protocol::P, p, opt);
}

// Grid-maximum target population on [0, window] with n samples, evaluated on
// the bright block. This is the figure of merit used by sweeps.
inline Peak peak_on_grid(Protocol protocol, const ModelParams& p, const std::vector<double>& times) {
  return bright_probe(protocol, p).grid_peak(times);
}

struct RefinedDetuning {
  double delta = 0.0;
  Peak peak;
  int evaluations = 0;
};

// Maximises the grid-peak target population over Delta. The search brackets
// the reference point -+azz/2 and every supplied seed, evaluates all of them
// and a uniform grid, then polishes the best one by golden section. The
// returned value is never worse than any seed.
inline RefinedDetuning refine_detuning(Protocol protocol, const ModelParams& base, const std::vector<double>& times,
                                       const std::vector<double>& seeds, int n_grid = 41) {
  ModelParams p = base;
  RefinedDetuning best;
  best.peak.value = -1.0;
  auto eval = [&](double d) {
    p.delta = d;
    const Peak pk = peak_on_grid(protocol, p, times);
    ++best.evaluations;
    if (pk.value > best.peak.value) {
      best.peak = pk;
      best.delta = d;
    }
    return pk.value;
  };
  const double ref = half_azz_detuning(protocol, base);
  const double azz = std::abs(dipole_coeffs(base).azz);
  double lo = ref, hi = ref;
  for (double s : seeds) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  double margin = std::max(hi - lo, 0.002 * azz);
  if (margin == 0.0) margin = 1e-3 * std::abs(base.omega_rabi);
  lo -= margin;
  hi += margin;
  eval(ref);
  for (double s : seeds) eval(s);
  for (double d : linspace(lo, hi, n_grid)) eval(d);
  const double step = (hi - lo) / (n_grid - 1);
  const double centre = best.delta;
  golden_maximize(eval, centre - step, centre + step, 40);
  return best;
}

struct ZeroFieldRun {
  Trajectory trajectory;
  EntanglementReport report;
  double depletion_time = 0.0;
  double ground_population = 1.0;
  double bell_fidelity = 0.0;
  StateVector state_at_depletion;
};

inline const std::vector<std::string>& zero_field_series_labels() {
  static const std::vector<std::string> l{"00", "P0+", "++", "--"};
  return l;
}

// First local minimum of the |00> population in the three-level model.
inline double effective_depletion_time(const ModelParams& p) {
  const ComplexMatrix h3 = zero_field_effective(p);
  ComplexVector psi0 = ComplexVector::Zero(3), g = ComplexVector::Zero(3);
  psi0(0) = g(0) = 1.0;
  const PopulationProbe probe(h3, psi0, g);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h3, Eigen::EigenvaluesOnly);
  const double spread = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
  if (!(spread > 0)) return 0.0;
  const double dt = 2.0 * std::numbers::pi / spread / 200.0;
  double prev = probe(0.0), cur = probe(dt);
  for (int k = 2; k < 200000; ++k) {
    const double next = probe(k * dt);
    if (cur < prev && cur <= next) {
      auto neg = [&](double t) { return -probe(t); };
      return golden_maximize(neg, (k - 2) * dt, k * dt).time;
    }
    prev = cur;
    cur = next;
  }
  return 0.0;
}

inline ZeroFieldRun run_protocol_zero_field(const ModelParams& p, const RunOptions& opt = {}) {
  p.validate();
  if (opt.n_samples < 2) throw ModelError("run_protocol_zero_field: n_samples must be >= 2");
  const ComplexMatrix block = zero_field_block(p);
  const ComplexMatrix kets = zero_field_kets();
  ComplexVector psi0 = ComplexVector::Zero(4), g = ComplexVector::Zero(4);
  psi0(0) = g(0) = 1.0;
  const StaticPropagator prop(block);
  const ComplexVector c0 = prop.project(psi0);
  const PopulationProbe ground(block, psi0, g);

  ZeroFieldRun run;
  // |00> minimum of the four-level dynamics near the three-level estimate
  double t_star = 0.0;
  try {
    t_star = effective_depletion_time(p);
  } catch (const SingularityError&) {
    t_star = 0.0;
  }
  if (t_star > 0) {
    const auto fine = linspace(0.75 * t_star, 1.25 * t_star, 4001);
    auto neg = [&](double t) { return -ground(t); };
    std::size_t ib = 0;
    for (std::size_t i = 1; i < fine.size(); ++i)
      if (ground(fine[i]) < ground(fine[ib])) ib = i;
    const Peak m = golden_maximize(neg, fine[ib > 0 ? ib - 1 : 0], fine[std::min(ib + 1, fine.size() - 1)]);
    run.depletion_time = -m.value <= ground(fine[ib]) ? m.time : fine[ib];
  }

  const double t_final = opt.t_final > 0 ? opt.t_final : (t_star > 0 ? 2.0 * run.depletion_time : 1.0);
  Trajectory& tr = run.trajectory;
  tr.time_unit = "1/azz";
  tr.times = linspace(0.0, t_final, opt.n_samples);
  tr.labels = zero_field_series_labels();
  tr.populations.assign(4, std::vector<double>(tr.times.size()));
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const ComplexVector a = prop.evolve_projected(c0, tr.times[i]);
    for (int k = 0; k < 4; ++k) tr.populations[static_cast<std::size_t>(k)][i] = std::norm(a(k));
    StateVector s{kets * a, Basis::canonical};
    tr.doe.push_back(degree_of_entanglement(s));
    tr.states.push_back(std::move(s));
  }

  const StateVector psi{kets * prop.evolve_projected(c0, run.depletion_time), Basis::canonical};
  run.state_at_depletion = psi;
  run.ground_population = population(psi, "00");
  run.bell_fidelity = bell_fidelity(psi);
  run.report.doe = degree_of_entanglement(psi);
  run.report.fidelity_to_target = fidelity(psi, bell_pm_state(-std::numbers::pi / 4, Basis::canonical));
  run.report.relative_phase = relative_phase(psi);
  return run;
}

}  // namespace dqe
