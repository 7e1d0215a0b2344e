#include "qest/simulator.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "qest/error.hpp"
#include "qest/matrix.hpp"
#include "qest/rng.hpp"

namespace qest {

namespace {

void check_width(const Circuit& c) {
  if (c.width > kMaxSimWidth)
    throw GuardError("simulator: width " + std::to_string(c.width) +
                     " exceeds statevector guard of " +
                     std::to_string(kMaxSimWidth));
}

void check_same_width(const ProbabilityDistribution& p,
                      const ProbabilityDistribution& q) {
  if (p.width != q.width || p.probs.size() != q.probs.size())
    throw Error("distribution width mismatch");
}

std::size_t sample_outcome(const Eigen::VectorXcd& psi, Rng& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  const auto dim = static_cast<std::size_t>(psi.size());
  for (std::size_t i = 0; i < dim; ++i) {
    acc += std::norm(psi[i]);
    if (u < acc) return i;
  }
  return dim - 1;  // u landed in the normalization round-off tail
}

}  // namespace

ProbabilityDistribution ideal_distribution(const Circuit& c) {
  check_width(c);
  validate(c);
  const auto dim = static_cast<std::size_t>(1) << c.width;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  psi[0] = 1.0;
  for (const Gate& g : c.gates) apply_gate_state(psi, g, c.width);

  ProbabilityDistribution dist;
  dist.width = c.width;
  dist.probs.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) dist.probs[i] = std::norm(psi[i]);
  return dist;
}

ProbabilityDistribution noisy_distribution(const Circuit& c,
                                           const NoiseModel& nm,
                                           std::size_t shots,
                                           std::uint64_t seed) {
  check_width(c);
  validate(c);
  if (shots == 0) throw Error("noisy_distribution: shots must be > 0");
  const auto dim = static_cast<std::size_t>(1) << c.width;
  std::vector<std::uint64_t> counts(dim, 0);

  Eigen::VectorXcd psi(static_cast<Eigen::Index>(dim));
  const Rng master(seed);
  for (std::size_t shot = 0; shot < shots; ++shot) {
    Rng rng = master.derive(0x7261 /* trajectory */, shot);
    psi.setZero();
    psi[0] = 1.0;
    for (const Gate& g : c.gates) {
      apply_gate_state(psi, g, c.width);
      const double p = g.kind == GateKind::CNOT ? nm.p2 : nm.p1;
      if (p <= 0.0) continue;
      for (std::uint32_t q : g.qubits) {
        if (rng.next_double() < p) {
          const int pauli = 1 + static_cast<int>(rng.next_index(3));
          apply_1q_state(psi, mat_pauli(pauli), q, c.width);
        }
      }
    }
    std::size_t outcome = sample_outcome(psi, rng);
    if (nm.readout_flip > 0.0) {
      for (std::uint32_t q = 0; q < c.width; ++q) {
        if (rng.next_double() < nm.readout_flip)
          outcome ^= std::size_t(1) << (c.width - 1 - q);
      }
    }
    ++counts[outcome];
  }

  ProbabilityDistribution dist;
  dist.width = c.width;
  dist.probs.resize(dim);
  for (std::size_t i = 0; i < dim; ++i)
    dist.probs[i] =
        static_cast<double>(counts[i]) / static_cast<double>(shots);
  return dist;
}

double tvd(const ProbabilityDistribution& p,
           const ProbabilityDistribution& q) {
  check_same_width(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.probs.size(); ++i)
    sum += std::abs(p.probs[i] - q.probs[i]);
  return 0.5 * sum;
}

double jsd(const ProbabilityDistribution& p,
           const ProbabilityDistribution& q) {
  check_same_width(p, q);
  double divergence = 0.0;  // (D(p||m) + D(q||m)) with base-2 logs
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    const double m = 0.5 * (p.probs[i] + q.probs[i]);
    if (p.probs[i] > 0.0) divergence += p.probs[i] * std::log2(p.probs[i] / m);
    if (q.probs[i] > 0.0) divergence += q.probs[i] * std::log2(q.probs[i] / m);
  }
  if (divergence <= 0.0) return 0.0;
  const double v = std::sqrt(0.5 * divergence);
  return v > 1.0 ? 1.0 : v;
}

ProbabilityDistribution average_distributions(
    const std::vector<ProbabilityDistribution>& members) {
  if (members.empty()) throw Error("average_distributions: empty set");
  ProbabilityDistribution out;
  out.width = members.front().width;
  out.probs.assign(members.front().probs.size(), 0.0);
  for (const auto& m : members) {
    check_same_width(out, m);
    for (std::size_t i = 0; i < out.probs.size(); ++i)
      out.probs[i] += m.probs[i];
  }
  for (double& v : out.probs) v /= static_cast<double>(members.size());
  return out;
}

}  // namespace qest
