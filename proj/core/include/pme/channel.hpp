#pragma once

// The energy-measurement channel on the target register.
//
// For outcome m in [0, 2^L) the Kraus operator is
//
//   V_m = 2^{-L} sum_{s in {0,1}^L} exp(-2 pi i m S(s) / 2^L) (x)_j prod_k U^{(j)}_{s_k, 2^{L-k} t}
//
// with S(s) = sum_k 2^{L-k} s_k. The 2^{-L} prefactor makes
// sum_m V_m^dag V_m = 1. Round k = 1 (longest evolution) acts first.
//
// Because the targets do not interact, every branch s maps a product input
// to a product state; V_m|b> is accumulated branch-wise into the dense
// 2^N vector.

#include <span>
#include <vector>

#include "pme/linalg.hpp"
#include "pme/model.hpp"

namespace pme::channel {

using linalg::ComplexMatrix;
using linalg::StateVector;
using model::DetuningSample;
using model::ProtocolParams;

// kShortestFirst reverses the time order of the rounds. It exists only so
// the self-check can demonstrate that the oracle comparison is order
// sensitive.
enum class RoundOrder { kLongestFirst, kShortestFirst };

enum class Method { kKraus, kTrajectory, kOracle };

const char* to_string(Method method);

struct OutcomeDistribution {
  std::vector<double> probs;  // indexed by m
  int rounds = 0;
  Method method = Method::kKraus;

  double total() const;
};

struct PostMeasurement {
  int m = 0;
  double prob = 0.0;
  StateVector state;  // normalized unless degenerate
  double fidelity = 0.0;
  bool degenerate = false;
};

struct FidelityResult {
  double fidelity = 0.0;         // sum_m P_m F_m over non-degenerate outcomes
  double excluded_weight = 0.0;  // sum of P_m below the degeneracy threshold
};

enum class PurityWeighting { kProbability, kUniform };

inline constexpr double kDegenerateProb = 1e-14;
inline constexpr int kMaxDenseExponent = 26;  // 2^{N+L} amplitudes per image
inline constexpr int kMaxPurityQubits = 10;

/// Composite basis index of a bit string, qubit 1 most significant.
std::size_t basis_index(std::span<const int> bits);

/// Per-qubit 2x2 products prod_k U_{s_k, 2^{L-k} t} for every branch S.
std::vector<linalg::Mat2> branch_products(double delta, const ProtocolParams& params,
                                          RoundOrder order = RoundOrder::kLongestFirst);

/// V_m|bits>, unnormalized, computed by direct branch summation.
StateVector kraus_apply(int m, const DetuningSample& sample, const ProtocolParams& params,
                        std::span<const int> bits, RoundOrder order = RoundOrder::kLongestFirst);

/// All V_m|bits> at once: row m of the 2^L x 2^N result is V_m|bits>.
/// The sum over branches is a discrete Fourier transform over S.
ComplexMatrix kraus_image(const DetuningSample& sample, const ProtocolParams& params, std::span<const int> bits,
                          RoundOrder order = RoundOrder::kLongestFirst);

/// Full V_m matrices (2^N x 2^N) for every m.
std::vector<ComplexMatrix> kraus_operators(const DetuningSample& sample, const ProtocolParams& params,
                                           RoundOrder order = RoundOrder::kLongestFirst);

OutcomeDistribution outcome_distribution(const DetuningSample& sample, const ProtocolParams& params,
                                         std::span<const int> bits,
                                         RoundOrder order = RoundOrder::kLongestFirst);

PostMeasurement post_measurement(int m, const DetuningSample& sample, const ProtocolParams& params,
                                 std::span<const int> bits);

/// sum_m P_m F_m for one detuning sample; P_m F_m = |<b|V_m|b>|^2.
FidelityResult average_fidelity(const DetuningSample& sample, const ProtocolParams& params,
                                std::span<const int> bits);

/// 1 - (1/N_r) sum_l sum_m P_m^(l) F_m^(l).
double projection_error(std::span<const DetuningSample> samples, const ProtocolParams& params,
                        std::span<const int> bits);

/// Perturbative single-qubit projection error
///   sum_{n<L} 3 (64 + 3 pi^2 + e^{-x_n/2} (64 - 3 pi^2)(1 - x_n)) / (256 (g / sigma_g)^2),
/// x_n = sigma_g^2 (2^n t)^2. Zero when sigma_g = 0.
double analytic_projection_error(const ProtocolParams& params);

/// N times the single-qubit value.
double analytic_projection_error_total(const ProtocolParams& params);

/// Average Tr rho_m^2 of the post-measurement states for a maximally mixed
/// input, using the Gram matrix G = V_m^dag V_m: Tr rho_m^2 = ||G||_F^2 / (Tr G)^2.
double purity(const DetuningSample& sample, const ProtocolParams& params,
              PurityWeighting weighting = PurityWeighting::kProbability);

double purity(std::span<const DetuningSample> samples, const ProtocolParams& params,
              PurityWeighting weighting = PurityWeighting::kProbability);

/// Unwrapped phase estimate f_m in [-1/2, 1/2): m / 2^L, minus one when
/// m / 2^L >= 1/2.
double estimate_from_outcome(int m, int rounds);

/// Phase (in cycles) that the protocol writes onto the probe for the given
/// initial bits: (t / pi) sum_j delta_j (b_j - 1/2) under kShiftOnOne, and
/// its negative under kShiftOnZero.
double encoded_phase(const DetuningSample& sample, std::span<const int> bits, const ProtocolParams& params);

/// Angular frequency 2 pi f / t corresponding to a phase estimate.
double frequency_from_phase(double f, double t);

}  // namespace pme::channel
