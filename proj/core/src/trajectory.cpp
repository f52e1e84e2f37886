#include "pme/trajectory.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pme/error.hpp"
#include "pme/random.hpp"

namespace pme::trajectory {

Complex feedback_phase(const FeedbackHistory& history) {
  const std::size_t j = history.bits.size() + 1;
  double cycles = 0.0;
  for (std::size_t k = 2; k <= j; ++k) cycles += history.bits[j - k] * std::ldexp(1.0, -static_cast<int>(k));
  return std::polar(1.0, -2.0 * std::numbers::pi * cycles);
}

int outcome_from_history(const FeedbackHistory& history) {
  int m = 0;
  for (std::size_t i = 0; i < history.bits.size(); ++i) m |= history.bits[i] << i;
  return m;
}

BranchState BranchState::product(std::span<const int> bits) {
  Branch b{Complex(1.0), {}};
  b.factors.reserve(bits.size());
  for (int bit : bits) b.factors.push_back(bit == 0 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0));
  return BranchState({std::move(b)});
}

double BranchState::norm_squared() const {
  double sum = 0.0;
  for (std::size_t a = 0; a < branches_.size(); ++a) {
    const auto& ba = branches_[a];
    sum += std::norm(ba.weight) * [&] {
      double p = 1.0;
      for (const auto& f : ba.factors) p *= f.squaredNorm();
      return p;
    }();
    for (std::size_t b = a + 1; b < branches_.size(); ++b) {
      const auto& bb = branches_[b];
      Complex overlap = std::conj(ba.weight) * bb.weight;
      for (std::size_t j = 0; j < ba.factors.size(); ++j) overlap *= ba.factors[j].dot(bb.factors[j]);
      sum += 2.0 * overlap.real();
    }
  }
  return sum;
}

linalg::StateVector BranchState::to_dense() const {
  if (branches_.empty()) return {};
  const auto n = branches_.front().factors.size();
  linalg::StateVector out = linalg::StateVector::Zero(Eigen::Index{1} << n);
  std::vector<linalg::StateVector> parts;
  for (const auto& br : branches_) {
    parts.assign(br.factors.begin(), br.factors.end());
    out += br.weight * linalg::kron_vectors(parts);
  }
  return out;
}

void BranchState::scale(Complex factor) {
  for (auto& b : branches_) b.weight *= factor;
}

RoundResult round_step(const BranchState& state, int round, const FeedbackHistory& history,
                       const DetuningSample& sample, const ProtocolParams& params) {
  model::check_sample(sample, params);
  if (round < 1 || round > params.rounds()) {
    throw ValidationError("round_step: round " + std::to_string(round) + " outside [1, L]");
  }
  if (history.bits.size() != static_cast<std::size_t>(round - 1)) {
    throw ValidationError("round_step: history length must equal round - 1");
  }
  if (2 * state.size() > kMaxBranches) {
    throw ResourceError("round_step: branch count " + std::to_string(2 * state.size()) + " exceeds guard " +
                        std::to_string(kMaxBranches));
  }

  const double tau = std::ldexp(params.t(), params.rounds() - round);
  const auto n = sample.deltas.size();
  std::array<std::vector<linalg::Mat2>, 2> step;
  for (int s = 0; s < 2; ++s) {
    step[s].reserve(n);
    for (double d : sample.deltas) step[s].push_back(model::u_step(d, s, tau, params));
  }
  const Complex phase = feedback_phase(history);

  // Probe (|0> A_0 + |1> A_1) psi / sqrt(2) projected on
  // (<0| + (-1)^r phi' <1|) / sqrt(2) leaves (A_0 + (-1)^r phi' A_1) psi / 2.
  std::vector<Branch> zero;
  std::vector<Branch> one;
  zero.reserve(2 * state.size());
  one.reserve(2 * state.size());
  for (const auto& br : state.branches()) {
    for (int s = 0; s < 2; ++s) {
      Branch next{br.weight * 0.5, {}};
      next.factors.reserve(n);
      for (std::size_t j = 0; j < n; ++j) next.factors.push_back(step[s][j] * br.factors[j]);
      if (s == 0) {
        zero.push_back(next);
        one.push_back(std::move(next));
      } else {
        Branch flipped = next;
        next.weight *= phase;
        flipped.weight *= -phase;
        zero.push_back(std::move(next));
        one.push_back(std::move(flipped));
      }
    }
  }

  RoundResult out{0.0, BranchState(std::move(zero)), BranchState(std::move(one))};
  const double n0 = out.on_zero.norm_squared();
  const double n1 = out.on_one.norm_squared();
  out.prob_one = n1 / (n0 + n1);
  if (n0 > 0.0) out.on_zero.scale(1.0 / std::sqrt(n0));
  if (n1 > 0.0) out.on_one.scale(1.0 / std::sqrt(n1));
  return out;
}

Trajectory run_trajectory(const DetuningSample& sample, const ProtocolParams& params, std::span<const int> bits,
                          std::uint64_t seed) {
  model::check_sample(sample, params, bits);
  std::mt19937_64 engine(seed);
  Trajectory out;
  BranchState state = BranchState::product(bits);
  for (int k = 1; k <= params.rounds(); ++k) {
    RoundResult r = round_step(state, k, out.history, sample, params);
    const int bit = random::unit_uniform(engine) < r.prob_one ? 1 : 0;
    state = bit == 1 ? std::move(r.on_one) : std::move(r.on_zero);
    out.history.bits.push_back(bit);
  }
  out.m = outcome_from_history(out.history);
  return out;
}

double path_probability(const FeedbackHistory& path, const DetuningSample& sample, const ProtocolParams& params,
                        std::span<const int> bits) {
  model::check_sample(sample, params, bits);
  if (path.bits.size() != static_cast<std::size_t>(params.rounds())) {
    throw ValidationError("path_probability: path length must equal L");
  }
  BranchState state = BranchState::product(bits);
  FeedbackHistory prefix;
  double prob = 1.0;
  for (int k = 1; k <= params.rounds(); ++k) {
    RoundResult r = round_step(state, k, prefix, sample, params);
    const int bit = path.bits[static_cast<std::size_t>(k - 1)];
    prob *= bit == 1 ? r.prob_one : 1.0 - r.prob_one;
    if (prob == 0.0) return 0.0;
    state = bit == 1 ? std::move(r.on_one) : std::move(r.on_zero);
    prefix.bits.push_back(bit);
  }
  return prob;
}

}  // namespace pme::trajectory
