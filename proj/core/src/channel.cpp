#include "pme/channel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "pme/error.hpp"

namespace pme::channel {

using linalg::Complex;
using linalg::Mat2;

namespace {

void check_outcome(int m, int rounds) {
  if (m < 0 || m >= (1 << rounds)) {
    throw ValidationError("outcome m = " + std::to_string(m) + " outside [0, 2^" + std::to_string(rounds) + ")");
  }
}

void check_dense_size(int num_qubits, int rounds) {
  if (num_qubits + rounds > kMaxDenseExponent) {
    throw ResourceError("Kraus image of 2^(N+L) = 2^" + std::to_string(num_qubits + rounds) +
                        " amplitudes exceeds guard 2^" + std::to_string(kMaxDenseExponent));
  }
}

// exp(-2 pi i m S / 2^L), reducing m S modulo 2^L before scaling.
Complex fourier_weight(int m, std::size_t branch, int rounds) {
  const std::size_t mask = (std::size_t{1} << rounds) - 1;
  const auto reduced = (static_cast<std::size_t>(m) * branch) & mask;
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(reduced) / static_cast<double>(mask + 1));
}

// Dense product states, row S = (x)_j products[j][S] |bits_j>.
ComplexMatrix branch_states(const std::vector<std::vector<Mat2>>& products, std::span<const int> bits) {
  const std::size_t branches = products.front().size();
  const auto n = products.size();
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix out(static_cast<Eigen::Index>(branches), dim);
  StateVector work(dim);
  for (std::size_t s = 0; s < branches; ++s) {
    work(0) = 1.0;
    Eigen::Index filled = 1;
    for (std::size_t j = 0; j < n; ++j) {
      const auto col = products[j][s].col(bits[j]);
      // Expand in place from the back so qubit 1 stays most significant.
      for (Eigen::Index i = filled - 1; i >= 0; --i) {
        const Complex a = work(i);
        work(2 * i) = a * col(0);
        work(2 * i + 1) = a * col(1);
      }
      filled *= 2;
    }
    out.row(static_cast<Eigen::Index>(s)) = work.transpose();
  }
  return out;
}

std::vector<std::vector<Mat2>> all_products(const DetuningSample& sample, const ProtocolParams& params,
                                            RoundOrder order) {
  std::vector<std::vector<Mat2>> products;
  products.reserve(sample.deltas.size());
  for (double d : sample.deltas) products.push_back(branch_products(d, params, order));
  return products;
}

ComplexMatrix image_from_products(const std::vector<std::vector<Mat2>>& products, std::span<const int> bits,
                                  int rounds) {
  const ComplexMatrix states = branch_states(products, bits);
  const auto branches = static_cast<std::size_t>(states.rows());
  const double scale = 1.0 / static_cast<double>(branches);
  ComplexMatrix image(states.rows(), states.cols());
  Eigen::FFT<double> fft;
  std::vector<Complex> in(branches);
  std::vector<Complex> out(branches);
  for (Eigen::Index c = 0; c < states.cols(); ++c) {
    for (std::size_t s = 0; s < branches; ++s) in[s] = states(static_cast<Eigen::Index>(s), c);
    if (rounds == 0) {
      out = in;
    } else {
      fft.fwd(out, in);
    }
    for (std::size_t mm = 0; mm < branches; ++mm) image(static_cast<Eigen::Index>(mm), c) = out[mm] * scale;
  }
  return image;
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::kKraus:
      return "kraus";
    case Method::kTrajectory:
      return "trajectory";
    case Method::kOracle:
      return "oracle";
  }
  return "unknown";
}

double OutcomeDistribution::total() const {
  double sum = 0.0;
  for (double p : probs) sum += p;
  return sum;
}

std::size_t basis_index(std::span<const int> bits) {
  std::size_t idx = 0;
  for (int b : bits) idx = (idx << 1) | static_cast<std::size_t>(b);
  return idx;
}

std::vector<Mat2> branch_products(double delta, const ProtocolParams& params, RoundOrder order) {
  const int rounds = params.rounds();
  std::vector<std::array<Mat2, 2>> steps(static_cast<std::size_t>(rounds));
  for (int k = 1; k <= rounds; ++k) {
    const double tau = std::ldexp(params.t(), rounds - k);
    for (int s = 0; s < 2; ++s) steps[static_cast<std::size_t>(k - 1)][s] = model::u_step(delta, s, tau, params);
  }
  const std::size_t branches = std::size_t{1} << rounds;
  std::vector<Mat2> out(branches);
  for (std::size_t branch = 0; branch < branches; ++branch) {
    Mat2 acc = Mat2::Identity();
    for (int i = 0; i < rounds; ++i) {
      const int k = order == RoundOrder::kLongestFirst ? i + 1 : rounds - i;
      const auto bit = (branch >> (rounds - k)) & 1U;
      acc = steps[static_cast<std::size_t>(k - 1)][bit] * acc;
    }
    out[branch] = acc;
  }
  return out;
}

StateVector kraus_apply(int m, const DetuningSample& sample, const ProtocolParams& params, std::span<const int> bits,
                        RoundOrder order) {
  model::check_sample(sample, params, bits);
  check_outcome(m, params.rounds());
  check_dense_size(params.num_qubits(), 0);
  const auto products = all_products(sample, params, order);
  const ComplexMatrix states = branch_states(products, bits);
  StateVector out = StateVector::Zero(states.cols());
  for (Eigen::Index s = 0; s < states.rows(); ++s) {
    out += fourier_weight(m, static_cast<std::size_t>(s), params.rounds()) * states.row(s).transpose();
  }
  return out / static_cast<double>(states.rows());
}

ComplexMatrix kraus_image(const DetuningSample& sample, const ProtocolParams& params, std::span<const int> bits,
                          RoundOrder order) {
  model::check_sample(sample, params, bits);
  check_dense_size(params.num_qubits(), params.rounds());
  return image_from_products(all_products(sample, params, order), bits, params.rounds());
}

std::vector<ComplexMatrix> kraus_operators(const DetuningSample& sample, const ProtocolParams& params,
                                           RoundOrder order) {
  model::check_sample(sample, params);
  const int n = params.num_qubits();
  if (n > kMaxPurityQubits) {
    throw ResourceError("kraus_operators: N = " + std::to_string(n) + " exceeds guard " +
                        std::to_string(kMaxPurityQubits));
  }
  check_dense_size(2 * n, params.rounds());
  const auto products = all_products(sample, params, order);
  const Eigen::Index dim = Eigen::Index{1} << n;
  const std::size_t outcomes = std::size_t{1} << params.rounds();
  std::vector<ComplexMatrix> ops(outcomes, ComplexMatrix::Zero(dim, dim));
  std::vector<int> bits(static_cast<std::size_t>(n));
  for (Eigen::Index b = 0; b < dim; ++b) {
    for (int j = 0; j < n; ++j) bits[static_cast<std::size_t>(j)] = static_cast<int>((b >> (n - 1 - j)) & 1);
    const ComplexMatrix image = image_from_products(products, bits, params.rounds());
    for (std::size_t m = 0; m < outcomes; ++m) ops[m].col(b) = image.row(static_cast<Eigen::Index>(m)).transpose();
  }
  return ops;
}

OutcomeDistribution outcome_distribution(const DetuningSample& sample, const ProtocolParams& params,
                                         std::span<const int> bits, RoundOrder order) {
  const ComplexMatrix image = kraus_image(sample, params, bits, order);
  OutcomeDistribution dist;
  dist.rounds = params.rounds();
  dist.method = Method::kKraus;
  dist.probs.resize(static_cast<std::size_t>(image.rows()));
  for (Eigen::Index m = 0; m < image.rows(); ++m) dist.probs[static_cast<std::size_t>(m)] = image.row(m).squaredNorm();
  return dist;
}

PostMeasurement post_measurement(int m, const DetuningSample& sample, const ProtocolParams& params,
                                 std::span<const int> bits) {
  PostMeasurement out;
  out.m = m;
  out.state = kraus_apply(m, sample, params, bits);
  out.prob = out.state.squaredNorm();
  if (out.prob <= kDegenerateProb) {
    out.degenerate = true;
    return out;
  }
  out.state /= std::sqrt(out.prob);
  const Complex overlap = out.state(static_cast<Eigen::Index>(basis_index(bits)));
  out.fidelity = std::norm(overlap);
  return out;
}

FidelityResult average_fidelity(const DetuningSample& sample, const ProtocolParams& params,
                                std::span<const int> bits) {
  const ComplexMatrix image = kraus_image(sample, params, bits);
  const auto b = static_cast<Eigen::Index>(basis_index(bits));
  FidelityResult out;
  for (Eigen::Index m = 0; m < image.rows(); ++m) {
    const double p = image.row(m).squaredNorm();
    if (p <= kDegenerateProb) {
      out.excluded_weight += p;
      continue;
    }
    out.fidelity += std::norm(image(m, b));
  }
  return out;
}

double projection_error(std::span<const DetuningSample> samples, const ProtocolParams& params,
                        std::span<const int> bits) {
  if (samples.empty()) throw ValidationError("projection_error: need at least one sample");
  double sum = 0.0;
  for (const auto& s : samples) sum += average_fidelity(s, params, bits).fidelity;
  return 1.0 - sum / static_cast<double>(samples.size());
}

double analytic_projection_error(const ProtocolParams& params) {
  const double sg = params.sigma_g();
  if (sg == 0.0) return 0.0;
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  const double ratio = params.g() / sg;
  double sum = 0.0;
  for (int n = 0; n < params.rounds(); ++n) {
    const double x = sg * sg * std::pow(std::ldexp(params.t(), n), 2);
    sum += 3.0 * (64.0 + 3.0 * pi2 + std::exp(-0.5 * x) * (64.0 - 3.0 * pi2) * (1.0 - x)) / (256.0 * ratio * ratio);
  }
  return sum;
}

double analytic_projection_error_total(const ProtocolParams& params) {
  return params.num_qubits() * analytic_projection_error(params);
}

double purity(const DetuningSample& sample, const ProtocolParams& params, PurityWeighting weighting) {
  const auto ops = kraus_operators(sample, params);
  const double dim = static_cast<double>(ops.front().rows());
  double weighted = 0.0;
  double weight_sum = 0.0;
  for (const auto& v : ops) {
    const ComplexMatrix gram = v.adjoint() * v;
    const double trace = gram.trace().real();
    const double p = trace / dim;
    if (p <= kDegenerateProb) continue;
    const double tr_rho2 = gram.squaredNorm() / (trace * trace);
    const double w = weighting == PurityWeighting::kProbability ? p : 1.0;
    weighted += w * tr_rho2;
    weight_sum += w;
  }
  return weighted / weight_sum;
}

double purity(std::span<const DetuningSample> samples, const ProtocolParams& params, PurityWeighting weighting) {
  if (samples.empty()) throw ValidationError("purity: need at least one sample");
  double sum = 0.0;
  for (const auto& s : samples) sum += purity(s, params, weighting);
  return sum / static_cast<double>(samples.size());
}

double estimate_from_outcome(int m, int rounds) {
  if (rounds < 0 || rounds > 30) throw ValidationError("estimate_from_outcome: rounds out of range");
  check_outcome(m, rounds);
  const double x = std::ldexp(static_cast<double>(m), -rounds);
  return x >= 0.5 ? x - 1.0 : x;
}

double encoded_phase(const DetuningSample& sample, std::span<const int> bits, const ProtocolParams& params) {
  model::check_sample(sample, params, bits);
  double energy = 0.0;
  for (std::size_t j = 0; j < sample.deltas.size(); ++j) energy += sample.deltas[j] * (bits[j] - 0.5);
  const double phase = params.t() / std::numbers::pi * energy;
  return params.convention() == model::ProbeConvention::kShiftOnOne ? phase : -phase;
}

double frequency_from_phase(double f, double t) { return 2.0 * std::numbers::pi * f / t; }

}  // namespace pme::channel
