#include "pme/channel.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "pme/error.hpp"
#include "test_util.hpp"

using namespace pme;
using namespace pme::channel;
using model::GateModel;
using model::ProtocolParams;
using pme::testing::standard_params;
using pme::testing::random_sample;
using pme::testing::zeros;

namespace {

// Detunings large enough that gate errors are visible (|delta/g| ~ 0.05).
ProtocolParams rough_params(int n, int rounds) { return ProtocolParams(1.0, 0.9, rounds, n, 0.05); }

}  // namespace

TEST(Kraus, CompletenessOnAllBasisInputs) {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 3; ++n) {
    for (int rounds = 1; rounds <= 6; rounds += 2) {
      const auto p = rough_params(n, rounds);
      const auto ops = kraus_operators(random_sample(rng, n, 0.05), p);
      ComplexMatrix sum = ComplexMatrix::Zero(ops.front().rows(), ops.front().cols());
      for (const auto& v : ops) sum += v.adjoint() * v;
      EXPECT_LT(linalg::max_abs(sum - ComplexMatrix::Identity(sum.rows(), sum.cols())), 1e-9)
          << "N=" << n << " L=" << rounds;
    }
  }
}

TEST(Kraus, DirectSumMatchesFourierRoute) {
  std::mt19937_64 rng(22);
  const auto p = rough_params(2, 4);
  const auto sample = random_sample(rng, 2, 0.05);
  const std::vector<int> bits{1, 0};
  const ComplexMatrix image = kraus_image(sample, p, bits);
  for (int m = 0; m < 16; ++m) {
    const StateVector direct = kraus_apply(m, sample, p, bits);
    EXPECT_LT(linalg::max_abs(direct - image.row(m).transpose()), 1e-13);
  }
}

TEST(Kraus, SingleRoundZeroDetuningIsDeterministic) {
  const auto p = standard_params(2, 1);
  const model::DetuningSample sample{{0.0, 0.0}};
  const auto bits = zeros(2);
  EXPECT_NEAR(kraus_apply(0, sample, p, bits).squaredNorm(), 1.0, 1e-12);
  EXPECT_NEAR(kraus_apply(1, sample, p, bits).squaredNorm(), 0.0, 1e-12);
}

TEST(Kraus, OutcomeOutOfRange) {
  const auto p = standard_params(1, 3);
  EXPECT_THROW(kraus_apply(8, {{0.0}}, p, zeros(1)), ValidationError);
  EXPECT_THROW(kraus_apply(-1, {{0.0}}, p, zeros(1)), ValidationError);
}

TEST(Kraus, DenseGuard) {
  const ProtocolParams p(1.0, 1.0, 20, 8, 0.0);
  const model::DetuningSample s{std::vector<double>(8, 0.0)};
  EXPECT_THROW(kraus_image(s, p, zeros(8)), ResourceError);
}

TEST(Distribution, ZeroDetuningConcentratesOnZero) {
  for (int n : {1, 3}) {
    const auto p = standard_params(n, 5);
    const model::DetuningSample s{std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    const auto dist = outcome_distribution(s, p, zeros(n));
    EXPECT_NEAR(dist.probs[0], 1.0, 1e-9);
    EXPECT_NEAR(dist.total(), 1.0, 1e-12);
  }
}

// Ideal QPE: with perfect gates and the encoded phase on the 2^-L grid the
// outcome is certain.
TEST(Distribution, ExactGatesOnGridGiveCertainOutcome) {
  const int rounds = 4;
  const auto p = standard_params(1, rounds).with_gates(GateModel::kExact);
  for (int target : {0, 3, 9, 15}) {
    // encoded phase -delta t / 2pi must equal target / 2^L modulo one.
    const double delta = -2.0 * std::numbers::pi * target / 16.0 / p.t();
    const model::DetuningSample s{{delta}};
    const auto dist = outcome_distribution(s, p, zeros(1));
    EXPECT_NEAR(dist.probs[static_cast<std::size_t>(target)], 1.0, 1e-12) << target;
    EXPECT_NEAR(kraus_apply(target, s, p, zeros(1)).squaredNorm(), 1.0, 1e-12);
    const double f = estimate_from_outcome(target, rounds);
    const double x = encoded_phase(s, zeros(1), p);
    EXPECT_NEAR(std::remainder(f - x, 1.0), 0.0, 1e-12);
  }
}

TEST(Distribution, ConventionFlipsTheEncodedSign) {
  const auto p = standard_params(1, 4).with_gates(GateModel::kExact);
  const auto q = p.with_convention(model::ProbeConvention::kShiftOnZero);
  const double delta = -2.0 * std::numbers::pi * 3.0 / 16.0 / p.t();
  const model::DetuningSample s{{delta}};
  EXPECT_NEAR(outcome_distribution(s, p, zeros(1)).probs[3], 1.0, 1e-12);
  EXPECT_NEAR(outcome_distribution(s, q, zeros(1)).probs[13], 1.0, 1e-12);
  EXPECT_NEAR(encoded_phase(s, zeros(1), q), -encoded_phase(s, zeros(1), p), 1e-15);
}

TEST(Distribution, ParityExactGates) {
  std::mt19937_64 rng(23);
  const auto p = standard_params(2, 5).with_gates(GateModel::kExact);
  for (int i = 0; i < 5; ++i) {
    auto s = random_sample(rng, 2, p.sigma_g());
    const auto a = outcome_distribution(s, p, zeros(2));
    for (double& d : s.deltas) d = -d;
    const auto b = outcome_distribution(s, p, zeros(2));
    for (std::size_t m = 0; m < a.probs.size(); ++m) {
      EXPECT_NEAR(a.probs[m], b.probs[(a.probs.size() - m) % a.probs.size()], 1e-12);
    }
  }
}

TEST(Distribution, ParityApproximateGates) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> x(-0.01, 0.01);
  const auto p = ProtocolParams(1.0, 2.0, 5, 2, 0.0);
  for (int i = 0; i < 5; ++i) {
    model::DetuningSample s{{x(rng), x(rng)}};
    const auto a = outcome_distribution(s, p, zeros(2));
    for (double& d : s.deltas) d = -d;
    const auto b = outcome_distribution(s, p, zeros(2));
    for (std::size_t m = 0; m < a.probs.size(); ++m) {
      EXPECT_NEAR(a.probs[m], b.probs[(a.probs.size() - m) % a.probs.size()], 1e-3);
    }
  }
}

TEST(PostMeasurement, ExactGatesAreNonDemolition) {
  std::mt19937_64 rng(25);
  const auto p = standard_params(2, 4).with_gates(GateModel::kExact);
  const auto s = random_sample(rng, 2, p.sigma_g());
  const std::vector<int> bits{0, 1};
  for (int m = 0; m < 16; ++m) {
    const auto post = post_measurement(m, s, p, bits);
    if (post.degenerate) continue;
    EXPECT_NEAR(post.fidelity, 1.0, 1e-12);
    EXPECT_NEAR(post.state.norm(), 1.0, 1e-12);
  }
}

TEST(PostMeasurement, ZeroDetuningFidelityOne) {
  const auto p = standard_params(1, 3);
  const auto post = post_measurement(0, {{0.0}}, p, zeros(1));
  EXPECT_FALSE(post.degenerate);
  EXPECT_NEAR(post.prob, 1.0, 1e-12);
  EXPECT_NEAR(post.fidelity, 1.0, 1e-12);
  EXPECT_TRUE(post_measurement(1, {{0.0}}, p, zeros(1)).degenerate);
}

TEST(Fidelity, BoundsAndConsistency) {
  std::mt19937_64 rng(26);
  const auto p = rough_params(2, 3);
  const auto s = random_sample(rng, 2, 0.05);
  const auto bits = zeros(2);
  double pf = 0.0, total = 0.0;
  for (int m = 0; m < 8; ++m) {
    const auto post = post_measurement(m, s, p, bits);
    EXPECT_GE(post.fidelity, 0.0);
    EXPECT_LE(post.fidelity, 1.0 + 1e-12);
    pf += post.prob * post.fidelity;
    total += post.prob;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  const auto avg = average_fidelity(s, p, bits);
  EXPECT_NEAR(avg.fidelity + avg.excluded_weight, pf, 1e-12);
}

TEST(ProjectionError, ZeroForExactGates) {
  std::mt19937_64 rng(27);
  const auto p = standard_params(2, 4).with_gates(GateModel::kExact);
  std::vector<model::DetuningSample> samples;
  for (int i = 0; i < 5; ++i) samples.push_back(random_sample(rng, 2, p.sigma_g()));
  EXPECT_NEAR(projection_error(samples, p, zeros(2)), 0.0, 1e-12);
}

TEST(ProjectionError, RequiresSamples) {
  EXPECT_THROW(projection_error({}, standard_params(1, 1), zeros(1)), ValidationError);
}

TEST(AnalyticError, FrozenValues) {
  // Independent numpy evaluation of the same closed form.
  EXPECT_NEAR(analytic_projection_error(standard_params(1, 6)), 0.0006414941652997673, 1e-15);
  EXPECT_NEAR(analytic_projection_error(standard_params(1, 1)), 0.00010943893729836068, 1e-16);
  EXPECT_NEAR(analytic_projection_error_total(standard_params(4, 6)), 0.002672156180455406, 1e-15);
}

TEST(AnalyticError, ZeroWidthAndMonotone) {
  EXPECT_EQ(analytic_projection_error(standard_params(1, 6).with_sigma_g(0.0)), 0.0);
  double prev = 0.0;
  for (int rounds = 1; rounds <= 12; ++rounds) {
    const double e = analytic_projection_error(standard_params(1, rounds));
    EXPECT_GE(e, prev);
    prev = e;
  }
}

// The Gaussian average of the single-qubit error, by adaptive quadrature,
// agrees with the perturbative closed form at the standard operating point.
TEST(AnalyticError, AgreesWithQuadratureAverage) {
  const auto p = standard_params(1, 6);
  const double sg = p.sigma_g();
  auto integrand = [&](double z) {
    const double eps = 1.0 - average_fidelity({{z * sg}}, p, zeros(1)).fidelity;
    return eps * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  };
  const double mean = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -8.0, 8.0, 8, 1e-10);
  const double ratio = mean / analytic_projection_error(p);
  EXPECT_GT(ratio, 0.8);
  EXPECT_LT(ratio, 1.2);
}

TEST(Purity, GramRouteMatchesDensityMatrix) {
  std::mt19937_64 rng(28);
  const auto p = rough_params(2, 3);
  const auto s = random_sample(rng, 2, 0.05);
  const auto ops = kraus_operators(s, p);
  double expected = 0.0;
  for (const auto& v : ops) {
    const ComplexMatrix rho_unnorm = v * v.adjoint() / 4.0;
    const double pm = rho_unnorm.trace().real();
    const ComplexMatrix rho = rho_unnorm / pm;
    expected += pm * (rho * rho).trace().real();
  }
  EXPECT_NEAR(purity(s, p), expected, 1e-12);
}

TEST(Purity, RangeAndExactLimit) {
  std::mt19937_64 rng(29);
  for (int n = 1; n <= 3; ++n) {
    const auto p = standard_params(n, 4);
    const double value = purity(random_sample(rng, n, p.sigma_g()), p);
    EXPECT_GE(value, std::ldexp(1.0, -n) - 1e-12);
    EXPECT_LE(value, 1.0 + 1e-12);
  }
  // Perfect gates, long record, well separated energies: nearly projective.
  const auto p = ProtocolParams(1.0, 1.0, 9, 1, 0.0, model::ProbeConvention::kShiftOnOne, GateModel::kExact);
  EXPECT_GT(purity({{0.9}}, p), 0.99);
}

TEST(Purity, WeightingPolicies) {
  const auto p = standard_params(1, 3);
  const model::DetuningSample s{{0.004}};
  const double weighted = purity(s, p, PurityWeighting::kProbability);
  const double uniform = purity(s, p, PurityWeighting::kUniform);
  EXPECT_GT(weighted, 0.5);
  EXPECT_GT(uniform, 0.5);
  EXPECT_LE(weighted, 1.0);
}

TEST(Purity, QubitGuard) {
  const ProtocolParams p(1.0, 1.0, 1, 11, 0.0);
  EXPECT_THROW(purity(model::DetuningSample{std::vector<double>(11, 0.0)}, p), ResourceError);
}

TEST(Estimator, Values) {
  EXPECT_EQ(estimate_from_outcome(0, 3), 0.0);
  EXPECT_EQ(estimate_from_outcome(7, 3), -0.125);
  EXPECT_EQ(estimate_from_outcome(4, 3), -0.5);
  EXPECT_EQ(estimate_from_outcome(3, 3), 0.375);
  EXPECT_THROW(estimate_from_outcome(8, 3), ValidationError);
}

TEST(Estimator, HalfOpenRange) {
  for (int rounds = 1; rounds <= 8; ++rounds) {
    for (int m = 0; m < (1 << rounds); ++m) {
      const double f = estimate_from_outcome(m, rounds);
      EXPECT_GE(f, -0.5);
      EXPECT_LT(f, 0.5);
    }
  }
}

TEST(Estimator, EncodedPhaseAndFrequency) {
  const auto p = standard_params(2, 3);
  const model::DetuningSample s{{0.01, -0.004}};
  const std::vector<int> bits{0, 1};
  const double expected = p.t() / std::numbers::pi * (0.01 * -0.5 + -0.004 * 0.5);
  EXPECT_NEAR(encoded_phase(s, bits, p), expected, 1e-15);
  EXPECT_NEAR(frequency_from_phase(0.25, 2.0), std::numbers::pi / 4.0, 1e-15);
}
