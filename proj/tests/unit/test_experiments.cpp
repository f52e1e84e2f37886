#include "pme/experiments.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pme/error.hpp"
#include "test_util.hpp"

using namespace pme;
using namespace pme::experiments;
using model::GateModel;

namespace {

ExperimentConfig standard_config(std::vector<SweepPoint> sweep, int samples, std::uint64_t seed = 1) {
  ExperimentConfig c{pme::testing::standard_params(1, 1)};
  c.sweep = std::move(sweep);
  c.n_samples = samples;
  c.seed = seed;
  return c;
}

bool same_numbers(const ExperimentRecord& a, const ExperimentRecord& b) {
  return a.num_qubits == b.num_qubits && a.rounds == b.rounds && a.seed == b.seed && a.sigma == b.sigma &&
         a.sigma_stderr == b.sigma_stderr && a.epsilon_numeric == b.epsilon_numeric &&
         a.epsilon_analytic == b.epsilon_analytic && a.purity == b.purity && a.phase_wraps == b.phase_wraps;
}

}  // namespace

TEST(SampleDetunings, ZeroWidth) {
  for (double d : sample_detunings(5, 0, 4, 0.0).deltas) EXPECT_EQ(d, 0.0);
}

TEST(SampleDetunings, MomentsOfManyDraws) {
  const int n = 100000;
  const double sg = 0.3;
  double sum = 0.0, sum2 = 0.0;
  for (int l = 0; l < n; ++l) {
    const double d = sample_detunings(42, static_cast<std::uint64_t>(l), 1, sg).deltas[0];
    sum += d;
    sum2 += d * d;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  EXPECT_LT(std::abs(mean), 4.0 * sg / std::sqrt(n));
  EXPECT_NEAR(sd / sg, 1.0, 0.02);
}

TEST(SampleDetunings, CounterBased) {
  const auto a = sample_detunings(7, 3, 4, 1.0);
  const auto b = sample_detunings(7, 3, 4, 1.0);
  EXPECT_EQ(a.deltas, b.deltas);
  // Qubit j of a sample does not depend on how many qubits were drawn.
  EXPECT_EQ(sample_detunings(7, 3, 1, 1.0).deltas[0], a.deltas[0]);
  EXPECT_NE(sample_detunings(8, 3, 1, 1.0).deltas[0], a.deltas[0]);
}

TEST(SampleDetunings, EngineOverload) {
  std::mt19937_64 e1(3), e2(3);
  EXPECT_EQ(sample_detunings(e1, 3, 0.5).deltas, sample_detunings(e2, 3, 0.5).deltas);
}

TEST(ChooseT, SqrtScaling) {
  EXPECT_DOUBLE_EQ(choose_t(1, TRule::kScaledBySqrtN, 160.0, 0.0), 160.0);
  EXPECT_DOUBLE_EQ(choose_t(4, TRule::kScaledBySqrtN, 160.0, 0.0), 80.0);
  EXPECT_DOUBLE_EQ(choose_t(16, TRule::kScaledBySqrtN, 160.0, 0.0), 40.0);
  EXPECT_DOUBLE_EQ(choose_t(16, TRule::kFixed, 160.0, 12.5), 12.5);
}

TEST(RmsPhaseError, PointMassOnGrid) {
  channel::OutcomeDistribution d{{0.0, 0.0, 1.0, 0.0}, 2, channel::Method::kKraus};
  EXPECT_EQ(rms_phase_error(d, -0.5), 0.0);
  EXPECT_GT(rms_phase_error(d, -0.49), 0.0);
  channel::OutcomeDistribution spread{{0.5, 0.5, 0.0, 0.0}, 2, channel::Method::kKraus};
  EXPECT_NEAR(rms_phase_error(spread, 0.0), std::sqrt(0.5 * 0.0625), 1e-15);
}

TEST(VarianceExperiment, ExactGatesOnGridContributeZero) {
  const auto p = pme::testing::standard_params(1, 5).with_gates(GateModel::kExact);
  const double delta = -2.0 * std::numbers::pi * 5.0 / 32.0 / p.t();
  const model::DetuningSample s{{delta}};
  const auto bits = pme::testing::zeros(1);
  EXPECT_NEAR(rms_phase_error(channel::outcome_distribution(s, p, bits), channel::encoded_phase(s, bits, p)), 0.0,
              1e-7);
}

TEST(VarianceExperiment, ReproducibleAndThreadIndependent) {
  auto c = standard_config({{1, 3}, {2, 4}}, 30, 9);
  const auto a = variance_experiment(c);
  const auto b = variance_experiment(c);
  c.threads = 3;
  const auto t = variance_experiment(c);
  ASSERT_EQ(a.size(), 2U);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(same_numbers(a[i], b[i]));
    EXPECT_TRUE(same_numbers(a[i], t[i]));
    EXPECT_GE(a[i].sigma, 0.0);
  }
}

TEST(VarianceExperiment, DecreasesWithRoundsMedianOverSeeds) {
  std::vector<double> ratios;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto recs = variance_experiment(standard_config({{1, 3}, {1, 4}, {1, 5}}, 20, seed));
    ratios.push_back(recs[1].sigma / recs[0].sigma);
    ratios.push_back(recs[2].sigma / recs[1].sigma);
  }
  std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
  EXPECT_LE(ratios[ratios.size() / 2], 1.05);
}

TEST(VarianceExperiment, RejectsEmptySweep) {
  EXPECT_THROW(variance_experiment(standard_config({}, 10)), ValidationError);
  EXPECT_THROW(variance_experiment(standard_config({{1, 0}}, 10)), ValidationError);
  EXPECT_THROW(variance_experiment(standard_config({{1, 2}}, 0)), ValidationError);
}

TEST(ErrorExperiment, ZeroWidthGivesZeroError) {
  auto c = standard_config({{2, 4}}, 5);
  c.base = c.base.with_sigma_g(0.0);
  const auto recs = error_experiment(c);
  EXPECT_NEAR(recs[0].epsilon_numeric, 0.0, 1e-12);
  EXPECT_EQ(recs[0].epsilon_analytic, 0.0);
}

TEST(ErrorExperiment, RecordsAnalyticOverlay) {
  const auto recs = error_experiment(standard_config({{4, 6}}, 20));
  EXPECT_NEAR(recs[0].epsilon_analytic, 0.002672156180455406, 1e-15);
  EXPECT_GT(recs[0].epsilon_numeric, 0.0);
  EXPECT_LT(recs[0].epsilon_numeric, 1.0);
}

TEST(PurityExperiment, NoMeasurementLeavesMaximallyMixed) {
  const auto recs = purity_experiment(standard_config({{1, 0}, {3, 0}}, 5));
  EXPECT_DOUBLE_EQ(recs[0].purity, 0.5);
  EXPECT_DOUBLE_EQ(recs[1].purity, 0.125);
}

TEST(PurityExperiment, GrowsWithRounds) {
  const auto recs = purity_experiment(standard_config({{1, 2}, {1, 8}}, 100));
  EXPECT_GT(recs[1].purity, recs[0].purity);
  for (const auto& r : recs) {
    EXPECT_GE(r.purity, 0.5);
    EXPECT_LE(r.purity, 1.0);
  }
}

TEST(PurityExperiment, ExactGatesNearlyProjective) {
  auto c = standard_config({{1, 8}}, 100);
  c.base = c.base.with_gates(GateModel::kExact);
  EXPECT_GE(purity_experiment(c)[0].purity, 0.95);
}

TEST(PurityExperiment, QubitGuard) {
  EXPECT_THROW(purity_experiment(standard_config({{11, 1}}, 1)), ResourceError);
}
