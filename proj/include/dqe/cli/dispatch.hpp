#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dqe/cli/config.hpp"
#include "dqe/experiments/io.hpp"

namespace dqe {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitSingular = 3,
  kExitIo = 4,
  kExitNumerical = 5,
  kExitModel = 6,
};

inline int exit_code_for(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return kExitConfig;
    case ErrorCategory::singular: return kExitSingular;
    case ErrorCategory::io: return kExitIo;
    case ErrorCategory::numerical: return kExitNumerical;
    case ErrorCategory::model: return kExitModel;
  }
  return kExitOther;
}

inline constexpr const char* kOutputDirEnv = "DQE_OUTPUT_DIR";

inline std::string output_extension(OutputFormat f) { return f == OutputFormat::json ? ".json" : ".csv"; }

// Relative paths land in $DQE_OUTPUT_DIR when it is set.
inline std::filesystem::path resolve_output_path(const DispatchPlan& plan) {
  std::filesystem::path out =
      plan.output.empty() ? std::filesystem::path("dqe_" + std::string(to_string(plan.command)) + output_extension(plan.format))
                          : std::filesystem::path(plan.output);
  if (out.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) out = std::filesystem::path(dir) / out;
  }
  return out;
}

inline std::filesystem::path sibling_path(const std::filesystem::path& p, const std::string& suffix) {
  return p.parent_path() / (p.stem().string() + suffix + p.extension().string());
}

struct ResolvedDetuning {
  double delta = 0.0;
  double reference = 0.0;
  double window = 0.0;
  std::optional<TunedDetuning> polynomial;
  std::optional<double> refined;
};

inline constexpr int kRefineSamples = 2000;

inline ResolvedDetuning resolve_detuning(const DispatchPlan& plan) {
  ModelParams p = plan.params;
  ResolvedDetuning r;
  r.reference = half_azz_detuning(plan.protocol, p);
  {
    ModelParams q = p;
    q.delta = r.reference;
    r.window = plan.run.t_final > 0 ? plan.run.t_final : plan.run.window_factor * predicted_half_flop(plan.protocol, q);
  }
  switch (plan.detuning) {
    case DetuningMode::explicit_value: r.delta = p.delta; break;
    case DetuningMode::fixed: r.delta = r.reference; break;
    case DetuningMode::cubic:
    case DetuningMode::tuned: {
      r.polynomial = tune_detuning(plan.protocol, p);
      r.delta = r.polynomial->delta;
      if (plan.detuning == DetuningMode::tuned && !r.polynomial->degenerate) {
        // fixed search grid so the tuned value does not depend on the output sampling
        const auto times = linspace(0.0, r.window, std::max(plan.run.n_samples, kRefineSamples));
        r.refined = refine_detuning(plan.protocol, p, times, {r.polynomial->delta}).delta;
        r.delta = *r.refined;
      }
      break;
    }
  }
  return r;
}

inline const char* to_string(DetuningMode m) {
  switch (m) {
    case DetuningMode::tuned: return "tuned";
    case DetuningMode::cubic: return "cubic";
    case DetuningMode::fixed: return "fixed";
    case DetuningMode::explicit_value: return "explicit";
  }
  return "unknown";
}

struct DispatchResult {
  std::string summary;
  std::vector<std::string> files;
};

namespace detail {

inline Metadata base_metadata(const DispatchPlan& plan, const RunConfig& provenance) {
  Metadata m;
  m.add("tool", "dqe");
  m.add("version", kVersion);
  m.add("command", std::string(to_string(plan.command)));
  m.add("preset", plan.preset.empty() ? std::string("none") : plan.preset);
  for (const auto& [k, v] : provenance.values) m.add("config." + k, v);
  return m;
}

inline std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

inline void emit(const std::filesystem::path& path, const Metadata& meta, const Table& table, OutputFormat format,
                 DispatchResult& res) {
  std::ostringstream os;
  if (format == OutputFormat::json) write_json(os, meta, table_json(table));
  else write_csv(os, meta, table);
  write_file(path.string(), os.str());
  res.files.push_back(path.string());
}

inline void add_detuning_meta(Metadata& m, const DispatchPlan& plan, const ResolvedDetuning& d, double azz) {
  m.add("protocol", to_string(plan.protocol));
  m.add("detuning_mode", to_string(plan.detuning));
  m.add("delta_used", d.delta);
  m.add("delta_used_over_azz", d.delta / azz);
  m.add("delta_reference", d.reference);
  if (d.polynomial) {
    m.add("delta_polynomial", d.polynomial->delta);
    m.add("delta_polynomial_over_azz", d.polynomial->delta / azz);
    m.add("polynomial_degree", d.polynomial->degree);
    m.add("polynomial_residual", d.polynomial->residual);
    m.add("condition_residual", d.polynomial->condition_residual);
    m.add("tuner_degenerate", d.polynomial->degenerate);
  }
  if (auto c = caption_delta_over_azz(plan.preset)) m.add("caption_delta_over_azz", *c);
  m.add("window", d.window);
}

}  // namespace detail

inline DispatchResult dispatch(const DispatchPlan& plan, const RunConfig& provenance, std::ostream& out,
                               std::ostream& err) {
  DispatchResult res;
  const auto path = resolve_output_path(plan);
  if (path.has_parent_path() && !std::filesystem::exists(path.parent_path()))
    throw IoError("output directory '" + path.parent_path().string() + "' does not exist");
  Metadata meta = detail::base_metadata(plan, provenance);
  std::ostringstream summary;

  switch (plan.command) {
    case Command::units: {
      const ConvertedUnits u = convert_units(*plan.physical);
      for (const auto& w : u.warnings) err << "warning: " << w << '\n';
      meta.add("separation_nm", plan.physical->separation_nm);
      meta.add("b_field_mT", plan.physical->b_field_mT);
      meta.add("rabi_MHz", plan.physical->rabi_MHz);
      meta.add("zero_field_splitting_hz", constants::zero_field_splitting_hz);
      Table t;
      t.columns = {"quantity", "value"};
      t.add_row({"omega_rad_s", format_double(u.omega_rad_s)});
      t.add_row({"dip_prefactor_rad_s", format_double(u.dip_prefactor_rad_s)});
      t.add_row({"dip_prefactor_hz", format_double(u.dip_prefactor_rad_s / (2.0 * std::numbers::pi))});
      t.add_row({"zeeman_rad_s", format_double(u.zeeman_rad_s)});
      t.add_row({"mu_b", format_double(u.params.mu_b)});
      t.add_row({"dip_prefactor", format_double(u.params.dip_prefactor)});
      t.add_row({"theta", format_double(u.params.theta)});
      add_params(meta, u.params);
      detail::emit(path, meta, t, plan.format, res);
      summary << "units: dip_prefactor = " << detail::fmt(u.params.dip_prefactor) << " Omega, mu_b = "
              << detail::fmt(u.params.mu_b) << " Omega";
      break;
    }
    case Command::tune: {
      const ResolvedDetuning d = resolve_detuning(plan);
      ModelParams p = plan.params;
      p.delta = d.delta;
      const double azz = dipole_coeffs(p).azz;
      add_params(meta, p);
      detail::add_detuning_meta(meta, plan, d, azz);
      Table t;
      t.columns = {"root_index", "re", "im"};
      if (d.polynomial)
        for (std::size_t i = 0; i < d.polynomial->roots.size(); ++i)
          t.add_row({std::to_string(i), format_double(d.polynomial->roots[i].real()),
                     format_double(d.polynomial->roots[i].imag())});
      detail::emit(path, meta, t, plan.format, res);
      const double shown = d.polynomial ? d.polynomial->delta : d.delta;
      summary << "tune " << to_string(plan.protocol) << ": delta/azz = "
              << (azz != 0.0 ? detail::fmt(shown / azz, 8) : std::string("undefined")) << " (delta = "
              << detail::fmt(shown, 8) << ")";
      if (d.polynomial)
        summary << ", degree " << d.polynomial->degree << ", residual " << detail::fmt(d.polynomial->condition_residual, 3)
                << (d.polynomial->degenerate ? ", degenerate azz" : "");
      if (d.refined && azz != 0.0) summary << "; population-optimal delta/azz = " << detail::fmt(*d.refined / azz, 8);
      break;
    }
    case Command::transfer_n:
    case Command::transfer_p: {
      const ResolvedDetuning d = resolve_detuning(plan);
      ModelParams p = plan.params;
      p.delta = d.delta;
      RunOptions opt = plan.run;
      opt.t_final = d.window;
      const ProtocolRun run = run_protocol(plan.protocol, p, opt);
      const double azz = dipole_coeffs(p).azz;
      add_params(meta, p);
      detail::add_detuning_meta(meta, plan, d, azz);
      meta.add("t_peak", run.target_peak.time);
      meta.add("p_peak", run.target_peak.value);
      meta.add("t_peak_refined", run.target_peak_refined.time);
      meta.add("p_peak_refined", run.target_peak_refined.value);
      meta.add("intermediate_peak", run.intermediate_peak);
      meta.add("intermediate_amplitude", run.intermediate_amplitude);
      meta.add("max_dark_population", run.max_dark_population);
      meta.add("time_unit", run.trajectory.time_unit);
      detail::emit(path, meta, trajectory_table(run.trajectory), plan.format, res);
      summary << "transfer-" << (plan.protocol == Protocol::N ? "n" : "p") << ": max fidelity "
              << detail::fmt(run.target_peak_refined.value, 8) << " at t = " << detail::fmt(run.target_peak_refined.time)
              << ", delta/azz = " << detail::fmt(d.delta / azz, 8);
      break;
    }
    case Command::zero_field: {
      ModelParams base = plan.params;
      base.mu_b = 0.0;
      base.delta = 0.0;
      // explicit or geometric couplings with a nonzero axx run as given; otherwise
      // axx is derived from the requested or scanned Omega_eff/azz ratio
      if (!base.couplings && base.dip_prefactor > 0) base.couplings = dipole_coeffs(base);
      if (!base.couplings) base.couplings = DipoleCoeffs{0.0, -1.0, 1.0};
      std::optional<ZeroFieldScan> scan;
      ModelParams p = base;
      const bool literal = !plan.ratio && base.couplings->axx != 0.0;
      if (plan.ratio) {
        p = zero_field_params(base, *plan.ratio);
      } else if (!literal) {
        scan = zero_field_scan(base, plan.ratio_min, plan.ratio_max, plan.n_ratio);
        p = zero_field_params(base, scan->best_ratio);
      }
      const ZeroFieldRun run = run_protocol_zero_field(p, plan.run);
      add_params(meta, p);
      meta.add("omega_eff", effective_coupling(p));
      meta.add("omega_eff_over_azz", effective_coupling(p) / dipole_coeffs(p).azz);
      meta.add("depletion_time", run.depletion_time);
      meta.add("pop_00", run.ground_population);
      meta.add("doe", run.report.doe);
      meta.add("fidelity_psi", run.report.fidelity_to_target);
      meta.add("bell_fidelity", run.bell_fidelity);
      meta.add("relative_phase", run.report.relative_phase ? *run.report.relative_phase : std::nan(""));
      meta.add("raman_regime", raman_regime(p));
      meta.add("time_unit", run.trajectory.time_unit);
      if (scan) {
        meta.add("best_ratio", scan->best_ratio);
        meta.add("ratio_verdict", scan->verdict);
        for (const auto& c : scan->candidates) {
          const std::string k = "candidate_" + format_double(c.ratio);
          meta.add(k + ".pop_00", c.ground_population);
          meta.add(k + ".doe", c.report.doe);
          meta.add(k + ".bell_fidelity", c.bell_fidelity);
        }
      }
      detail::emit(path, meta, trajectory_table(run.trajectory), plan.format, res);
      if (scan) {
        Metadata sm = detail::base_metadata(plan, provenance);
        add_params(sm, base);
        sm.add("best_ratio", scan->best_ratio);
        sm.add("ratio_verdict", scan->verdict);
        std::vector<ZeroFieldScanPoint> rows = scan->points;
        rows.insert(rows.end(), scan->candidates.begin(), scan->candidates.end());
        detail::emit(sibling_path(path, "_scan"), sm, zero_field_scan_table(rows), plan.format, res);
      }
      summary << "zero-field: DoE " << detail::fmt(run.report.doe) << ", pop_00 " << detail::fmt(run.ground_population)
              << ", phase " << (run.report.relative_phase ? detail::fmt(*run.report.relative_phase) : "n/a")
              << " at t = " << detail::fmt(run.depletion_time);
      if (scan) summary << "; best ratio " << detail::fmt(scan->best_ratio) << " (" << scan->verdict << ")";
      break;
    }
    case Command::sweep: {
      const SweepResult r = sweep_theta(plan.sweep);
      add_params(meta, plan.sweep.base);
      add_sweep_meta(meta, r);
      if (plan.format == OutputFormat::json) {
        std::ostringstream os;
        write_json(os, meta, sweep_json(r));
        write_file(path.string(), os.str());
        res.files.push_back(path.string());
      } else {
        detail::emit(path, meta, sweep_grid_table(r), plan.format, res);
        detail::emit(sibling_path(path, "_max"), meta, sweep_max_table(r), plan.format, res);
      }
      double lo = 1.0, hi = 0.0;
      int flagged = 0;
      for (const auto& pt : r.points) {
        lo = std::min(lo, pt.p_peak);
        hi = std::max(hi, pt.p_peak);
        flagged += pt.degenerate_azz || pt.degenerate_axx;
      }
      summary << "sweep " << to_string(plan.sweep.protocol) << " (" << to_string(plan.sweep.tuning) << "): "
              << r.points.size() << " angles, p_peak in [" << detail::fmt(lo) << ", " << detail::fmt(hi) << "], "
              << flagged << " flagged degenerate";
      break;
    }
    case Command::rwa_check: {
      DispatchPlan q = plan;
      q.protocol = Protocol::N;
      const ResolvedDetuning d = resolve_detuning(q);
      ModelParams p = plan.params;
      p.delta = d.delta;
      const RwaValidation v = rwa_validation(p, plan.carrier_ratios, plan.t_span, plan.steps_per_period);
      add_params(meta, p);
      detail::add_detuning_meta(meta, q, d, dipole_coeffs(p).azz);
      meta.add("monotone", v.monotone);
      detail::emit(path, meta, rwa_table(v), plan.format, res);
      summary << "rwa-check:";
      for (const auto& pt : v.points) summary << " " << detail::fmt(pt.carrier_ratio) << "->" << detail::fmt(pt.overlap, 8);
      summary << (v.monotone ? " (monotone)" : " (not monotone)");
      break;
    }
  }
  res.summary = summary.str();
  out << res.summary << '\n';
  return res;
}

}  // namespace dqe
