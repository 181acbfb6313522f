#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <sstream>

#include "dqe/experiments/io.hpp"

using namespace dqe;

namespace {

constexpr double kPi = std::numbers::pi;

SweepConfig n_sweep(Tuning tuning, int n_theta, double lo, double hi) {
  SweepConfig c;
  c.protocol = Protocol::N;
  c.base.mu_b = 0.05;
  c.base.dip_prefactor = 10.0;
  c.theta_min = lo;
  c.theta_max = hi;
  c.n_theta = n_theta;
  c.n_time = 400;
  c.tuning = tuning;
  c.threads = 2;
  return c;
}

std::string sweep_csv(const SweepResult& r) {
  Metadata m;
  add_sweep_meta(m, r);
  std::ostringstream os;
  write_csv(os, m, sweep_grid_table(r));
  write_csv(os, m, sweep_max_table(r));
  return os.str();
}

ModelParams fig9_base() {
  ModelParams p;
  p.omega_rabi = 40.0;
  p.couplings = DipoleCoeffs{0.0, -1.0, 1.0};
  return p;
}

}  // namespace

TEST(Sweep, MaxCurveConsistentAndCellsInRange) {
  const SweepResult r = sweep_theta(n_sweep(Tuning::tuned, 7, 0.0, kPi / 2));
  ASSERT_EQ(r.points.size(), 7u);
  for (const auto& p : r.points) {
    ASSERT_TRUE(p.error.empty()) << p.error;
    ASSERT_EQ(p.population.size(), 400u);
    double mx = 0.0;
    for (double v : p.population) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      mx = std::max(mx, v);
    }
    EXPECT_EQ(p.p_peak, mx);
    EXPECT_LE(p.t_rise, p.t_peak);
  }
  EXPECT_DOUBLE_EQ(r.points.front().theta, 0.0);
  EXPECT_DOUBLE_EQ(r.points.back().theta, kPi / 2);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  SweepConfig c = n_sweep(Tuning::tuned, 6, 0.1 * kPi, 0.45 * kPi);
  const std::string a = sweep_csv(sweep_theta(c));
  const std::string b = sweep_csv(sweep_theta(c));
  c.threads = 1;
  const std::string serial = sweep_csv(sweep_theta(c));
  EXPECT_EQ(a, b);
  // thread count is not part of the output
  EXPECT_EQ(a, serial);
}

TEST(Sweep, DegenerateAngleFlaggedNotSkipped) {
  SweepConfig c = n_sweep(Tuning::tuned, 3, theta_azz_zero() - 0.01, theta_azz_zero() + 0.01);
  const SweepResult r = sweep_theta(c);
  ASSERT_EQ(r.points.size(), 3u);
  EXPECT_TRUE(r.points[1].degenerate_azz);
  EXPECT_TRUE(r.points[1].tuner_degenerate);
  EXPECT_FALSE(r.points[0].degenerate_azz);
  EXPECT_GT(r.points[1].p_peak, 0.0);
}

TEST(Sweep, TunedDominatesFixed) {
  for (Protocol pr : {Protocol::N, Protocol::P}) {
    SweepConfig c = n_sweep(Tuning::tuned, 12, 0.02 * kPi, 0.49 * kPi);
    c.protocol = pr;
    if (pr == Protocol::P) {
      c.base.mu_b = 0.001;
      c.base.dip_prefactor = 9.091;
    }
    const SweepResult tuned = sweep_theta(c);
    c.tuning = Tuning::fixed_half_azz;
    const SweepResult fixed = sweep_theta(c);
    for (std::size_t i = 0; i < tuned.points.size(); ++i) {
      const auto& t = tuned.points[i];
      if (t.degenerate_azz || t.degenerate_axx) continue;
      EXPECT_DOUBLE_EQ(t.t_max, fixed.points[i].t_max);
      EXPECT_GE(t.p_peak, fixed.points[i].p_peak - 1e-6) << to_string(pr) << " theta/pi = " << t.theta / kPi;
    }
  }
}

TEST(Sweep, FixedModeUsesHalfAzz) {
  const SweepResult r = sweep_theta(n_sweep(Tuning::fixed_half_azz, 3, 0.1 * kPi, 0.4 * kPi));
  for (const auto& p : r.points) EXPECT_DOUBLE_EQ(p.delta, -0.5 * p.coeffs.azz);
}

TEST(Sweep, RejectsTooFewPoints) {
  EXPECT_THROW(sweep_theta(n_sweep(Tuning::tuned, 1, 0.0, 1.0)), ModelError);
}

TEST(Trend, SlowerAsThetaGrows) {
  SweepConfig c = n_sweep(Tuning::tuned, 2, 0.05 * kPi, 0.25 * kPi);
  c.n_time = 2000;
  const SweepResult r = sweep_theta(c);
  const RateTrend t = transfer_rate_trend(r);
  EXPECT_LT(t.t_rise[0], t.t_rise[1]);
  EXPECT_LT(r.points[0].t_peak, r.points[1].t_peak);
}

TEST(Trend, ZeroAngleIsFastest) {
  SweepConfig c = n_sweep(Tuning::tuned, 13, 0.0, 0.3 * kPi);
  c.n_time = 2000;
  const RateTrend t = transfer_rate_trend(sweep_theta(c));
  // below ~0.04 pi the rise time is flat to within 1%
  const double fastest = *std::min_element(t.t_rise.begin(), t.t_rise.end());
  EXPECT_LT(t.t_rise[0], 1.01 * fastest);
  for (std::size_t i = 1; i < t.t_rise.size(); ++i)
    if (t.theta[i] >= 0.05 * kPi - 1e-12) {
      EXPECT_LT(t.t_rise[0], t.t_rise[i]) << t.theta[i] / kPi;
    }
}

TEST(Trend, NeedsTwoPoints) {
  SweepResult r;
  r.points.resize(1);
  EXPECT_THROW(transfer_rate_trend(r), ModelError);
}

TEST(ZeroFieldScan, AdjudicatesQuotedRatio) {
  const ZeroFieldScan s = zero_field_scan(fig9_base(), 0.05, 2.0, 60);
  ASSERT_EQ(s.candidates.size(), 2u);
  EXPECT_NEAR(s.best_ratio / kQuotedRatioLarge, 1.0, 0.05);
  EXPECT_EQ(s.verdict, "1.293");
  EXPECT_GE(s.best.report.doe, 0.99);
  EXPECT_LE(s.best.ground_population, 0.01);
  EXPECT_GT(s.candidates[1].bell_fidelity, s.candidates[0].bell_fidelity);
  for (const auto& p : s.points) {
    EXPECT_GE(p.report.doe, 0.0);
    EXPECT_LE(p.report.doe, 1.0);
  }
}

TEST(ZeroFieldScan, VanishingCouplingGivesNoTransfer) {
  ModelParams p = zero_field_params(fig9_base(), 1e-6);
  RunOptions o;
  o.t_final = 50.0;
  o.n_samples = 500;
  const ZeroFieldRun r = run_protocol_zero_field(p, o);
  for (std::size_t i = 0; i < r.trajectory.times.size(); ++i) {
    EXPECT_GT(r.trajectory.series("00")[i], 0.99);
    EXPECT_LT(r.trajectory.doe[i], 0.05);
  }
}

TEST(ZeroFieldScan, ParameterisationAndErrors) {
  const ModelParams p = zero_field_params(fig9_base(), 1.293);
  EXPECT_NEAR(effective_coupling(p), 1.293, 1e-12);
  EXPECT_NEAR(p.couplings->axx + p.couplings->ayy + p.couplings->azz, 0.0, 1e-12);
  EXPECT_THROW(zero_field_scan(fig9_base(), 0.5, 0.1, 10), ModelError);
  EXPECT_THROW(zero_field_params(fig9_base(), 0.0), SingularityError);
}

TEST(Rwa, SingleSpinRabiBound) {
  ModelParams p;
  p.dip_prefactor = 0.0;
  for (double ratio : {50.0, 100.0, 200.0}) {
    const RwaCheckPoint pt = rwa_check(p, ratio, 10.0);
    EXPECT_GT(pt.overlap, 1.0 - 10.0 / (ratio * ratio)) << "ratio " << ratio;
  }
}

TEST(Rwa, ShortSpanAgreesAtFig3) {
  ModelParams p;
  p.mu_b = 0.05;
  p.theta = 0.426 * kPi;
  p.dip_prefactor = 10.0;
  p.delta = tune_detuning(Protocol::N, p).delta;
  const RwaCheckPoint pt = rwa_check(p, 500.0, 1.0);
  EXPECT_GT(pt.overlap, 0.99);
  EXPECT_GT(pt.steps, 0u);
}

TEST(Rwa, RejectsLowRatio) {
  EXPECT_THROW(rwa_check(ModelParams{}, 10.0, 1.0), ModelError);
}

TEST(Io, CsvRoundTrip) {
  Metadata m;
  m.add("tool", "dqe");
  m.add("theta", 0.426 * kPi);
  Table t;
  t.columns = {"a", "b,c", "note"};
  t.add_row({format_double(0.1), format_double(-1e-300), "say \"hi\""});
  t.add_row({"nan", "inf", ""});
  std::ostringstream os;
  write_csv(os, m, t);
  std::istringstream is(os.str());
  const CsvDocument d = read_csv(is);
  EXPECT_EQ(d.meta.entries, m.entries);
  EXPECT_EQ(d.table.columns, t.columns);
  EXPECT_EQ(d.table.rows, t.rows);
  EXPECT_EQ(std::stod(*d.meta.find("theta")), 0.426 * kPi);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -4.209330144122121, 1e-300, 6.02e23}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Io, TrajectoryCsvColumns) {
  ModelParams p;
  p.mu_b = 0.05;
  p.theta = 0.426 * kPi;
  p.dip_prefactor = 10.0;
  RunOptions o;
  o.n_samples = 10;
  const ProtocolRun r = run_protocol_N(p, o);
  const Table t = trajectory_table(r.trajectory);
  ASSERT_EQ(t.columns.size(), 11u);
  EXPECT_EQ(t.columns.front(), "t");
  EXPECT_EQ(t.columns[1], "pop_00");
  EXPECT_EQ(t.columns.back(), "doe");
  EXPECT_EQ(t.rows.size(), 10u);
}

TEST(Io, SweepJsonParses) {
  const SweepResult r = sweep_theta(n_sweep(Tuning::tuned, 3, 0.1 * kPi, 0.4 * kPi));
  Metadata m;
  m.add("tool", "dqe");
  add_sweep_meta(m, r);
  std::ostringstream os;
  write_json(os, m, sweep_json(r));
  const auto j = nlohmann::json::parse(os.str());
  EXPECT_EQ(j["meta"]["protocol"], "N");
  EXPECT_EQ(j["meta"]["tuning"], "tuned");
  ASSERT_EQ(j["data"]["rows"].size(), 3u);
  EXPECT_EQ(j["data"]["rows"][1]["population"].size(), 400u);
  EXPECT_DOUBLE_EQ(j["data"]["max_curve"]["p_peak"][1].get<double>(), r.points[1].p_peak);
  EXPECT_TRUE(j["data"]["max_curve"]["error"][0].is_string());
}

TEST(Io, WriteFileFailsOnBadPath) {
  EXPECT_THROW(write_file("/nonexistent-dir/x.csv", "x"), IoError);
}
