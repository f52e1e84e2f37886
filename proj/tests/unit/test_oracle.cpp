#include "pme/oracle.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "pme/channel.hpp"
#include "pme/error.hpp"
#include "test_util.hpp"

using namespace pme;
using namespace pme::oracle;
using model::DriveSign;
using model::ProtocolParams;
using pme::testing::random_sample;
using pme::testing::zeros;

TEST(Hamiltonian, ZeroTagWithoutDetuningVanishes) {
  const auto p = pme::testing::standard_params(2, 1);
  EXPECT_EQ(linalg::max_abs(build_hamiltonian(HamiltonianTag::kZero, {{0.0, 0.0}}, p).matrix), 0.0);
}

TEST(Hamiltonian, ProbeBlocksAreConditionalHamiltonians) {
  for (auto convention : {model::ProbeConvention::kShiftOnOne, model::ProbeConvention::kShiftOnZero}) {
    const ProtocolParams p(0.8, 1.0, 1, 1, 0.0, convention);
    const auto h = build_hamiltonian(HamiltonianTag::kPlus, {{0.0}}, p).matrix;
    for (int bit : {0, 1}) {
      const ComplexMatrix expected = model::conditional_hamiltonian(0.0, bit, DriveSign::kPlus, p);
      EXPECT_LT(linalg::max_abs(probe_block(h, bit) - expected), 1e-15);
    }
    EXPECT_LT(linalg::max_abs(h.block(0, 2, 2, 2)), 1e-15);
  }
}

TEST(Hamiltonian, ZeroTagSpectrum) {
  const auto p = pme::testing::standard_params(2, 1);
  const model::DetuningSample s{{0.3, -0.1}};
  const auto h = build_hamiltonian(HamiltonianTag::kZero, s, p).matrix;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  std::vector<double> expected;
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int probe = 0; probe < 2; ++probe) expected.push_back(0.5 * (a * 0.3 + b * -0.1));
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(solver.eigenvalues()(Eigen::Index(i)), expected[i], 1e-14);
}

// The fast path rests on this factorization: within a probe sector the
// pulse is a tensor product of single-target pulses.
TEST(Hamiltonian, SectorBlockFactorization) {
  std::mt19937_64 rng(7);
  const ProtocolParams p(1.0, 1.0, 1, 2, 0.05);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_sample(rng, 2, 0.1);
    for (auto [tag, sign] : {std::pair{HamiltonianTag::kPlus, DriveSign::kPlus},
                             std::pair{HamiltonianTag::kMinus, DriveSign::kMinus}}) {
      const auto u = linalg::expm_hermitian(build_hamiltonian(tag, s, p).matrix, p.cnot_time());
      EXPECT_TRUE(linalg::is_unitary(u, 1e-10));
      for (int bit : {0, 1}) {
        const ComplexMatrix expected =
            linalg::kron(ComplexMatrix(model::cnot_step_unitary(s.deltas[0], bit, sign, p)),
                         ComplexMatrix(model::cnot_step_unitary(s.deltas[1], bit, sign, p)));
        EXPECT_LT(linalg::max_abs(probe_block(u, bit) - expected), 1e-11);
      }
    }
  }
}

TEST(FullCircuit, MatchesKrausDistribution) {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 2; ++n) {
    for (int rounds = 1; rounds <= 4; ++rounds) {
      const ProtocolParams p(1.0, 0.9, rounds, n, 0.05);
      const auto s = random_sample(rng, n, 0.08);
      const auto bits = zeros(n);
      const auto oracle = simulate_full_circuit(s, p, bits);
      const auto fast = channel::outcome_distribution(s, p, bits);
      EXPECT_NEAR(oracle.distribution.total(), 1.0, 1e-9);
      for (std::size_t m = 0; m < fast.probs.size(); ++m) {
        EXPECT_NEAR(oracle.distribution.probs[m], fast.probs[m], 1e-9) << "N=" << n << " L=" << rounds;
        if (fast.probs[m] < 1e-12) continue;
        const auto kraus = channel::kraus_apply(static_cast<int>(m), s, p, bits);
        const double overlap = std::abs(kraus.normalized().dot(oracle.target_states[m].normalized()));
        EXPECT_GE(overlap, 1.0 - 1e-9);
      }
    }
  }
}

TEST(FullCircuit, ZeroDetuningDeterministic) {
  const auto p = pme::testing::standard_params(2, 3);
  const auto oracle = simulate_full_circuit({{0.0, 0.0}}, p, zeros(2));
  EXPECT_NEAR(oracle.distribution.probs[0], 1.0, 1e-9);
}

TEST(FullCircuit, ReversedRoundOrderIsDetected) {
  const ProtocolParams p(1.0, 0.9, 4, 1, 0.05);
  const model::DetuningSample s{{0.07}};
  const auto oracle = simulate_full_circuit(s, p, zeros(1));
  const auto wrong = channel::outcome_distribution(s, p, zeros(1), channel::RoundOrder::kShortestFirst);
  double worst = 0.0;
  for (std::size_t m = 0; m < wrong.probs.size(); ++m) {
    worst = std::max(worst, std::abs(wrong.probs[m] - oracle.distribution.probs[m]));
  }
  EXPECT_GT(worst, 1e-6);
}

TEST(FullCircuit, Guards) {
  EXPECT_THROW(simulate_full_circuit({{0, 0, 0, 0}}, pme::testing::standard_params(4, 2), zeros(4)), ResourceError);
  EXPECT_THROW(simulate_full_circuit({{0.0}}, pme::testing::standard_params(1, 7), zeros(1)), ResourceError);
  const auto exact = pme::testing::standard_params(1, 2).with_gates(model::GateModel::kExact);
  EXPECT_THROW(simulate_full_circuit({{0.0}}, exact, zeros(1)), ValidationError);
}
