#pragma once

// Single-probe semiclassical phase estimation, simulated round by round.
//
// Round k (k = 1..L) prepares the probe in |+>, applies the controlled
// evolution with duration 2^{L-k} t, rotates the probe by diag(1, phi'_k)
// and reads it out in the X basis. Outcome r of round k therefore
// projects the probe onto (<0| + (-1)^r phi'_k <1|) / sqrt(2). The rounds
// reveal the bits of m least significant first: the bit from round k is
// bit k-1 of m, so m = sum_k 2^{k-1} r_k, which is the labeling of the
// Kraus operators V_m.
//
// The target register is kept as a sum of product states (the targets never
// interact), so the state after k rounds has at most 2^k branches.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "pme/linalg.hpp"
#include "pme/model.hpp"

namespace pme::trajectory {

using linalg::Complex;
using linalg::Vec2;
using model::DetuningSample;
using model::ProtocolParams;

inline constexpr std::size_t kMaxBranches = std::size_t{1} << 14;

struct FeedbackHistory {
  std::vector<int> bits;  // bits[i] is the outcome of round i + 1
};

/// phi'_j = exp(-2 pi i sum_{k=2}^{j} m_{j-k} / 2^k), with j = bits.size() + 1.
Complex feedback_phase(const FeedbackHistory& history);

/// Outcome label m = sum_i 2^i bits[i].
int outcome_from_history(const FeedbackHistory& history);

struct Branch {
  Complex weight;
  std::vector<Vec2> factors;  // one 2-vector per target qubit
};

class BranchState {
 public:
  BranchState() = default;
  explicit BranchState(std::vector<Branch> branches) : branches_(std::move(branches)) {}

  /// Single branch |b_1 ... b_N>.
  static BranchState product(std::span<const int> bits);

  const std::vector<Branch>& branches() const { return branches_; }
  std::size_t size() const { return branches_.size(); }

  /// <psi|psi> from the branch Gram matrix.
  double norm_squared() const;

  /// Dense 2^N amplitude vector, qubit 1 most significant.
  linalg::StateVector to_dense() const;

  void scale(Complex factor);

 private:
  std::vector<Branch> branches_;
};

struct RoundResult {
  double prob_one = 0.0;
  BranchState on_zero;  // normalized post-measurement states
  BranchState on_one;
};

/// One reset / controlled evolution / rotate / measure round. Throws
/// ResourceError when the branch count would exceed kMaxBranches.
RoundResult round_step(const BranchState& state, int round, const FeedbackHistory& history,
                       const DetuningSample& sample, const ProtocolParams& params);

struct Trajectory {
  int m = 0;
  FeedbackHistory history;
};

/// Samples all L rounds with a std::mt19937_64 seeded by `seed`.
Trajectory run_trajectory(const DetuningSample& sample, const ProtocolParams& params, std::span<const int> bits,
                          std::uint64_t seed);

/// Product of the conditional round probabilities along a full outcome path.
double path_probability(const FeedbackHistory& path, const DetuningSample& sample, const ProtocolParams& params,
                        std::span<const int> bits);

}  // namespace pme::trajectory
