#pragma once

#include <cstdint>
#include <vector>

#include "qest/circuit.hpp"

namespace qest {

/// Statevector guard: distributions are exact up to this width.
inline constexpr std::uint32_t kMaxSimWidth = 20;

struct ProbabilityDistribution {
  std::uint32_t width = 1;
  std::vector<double> probs;  // 2^width entries, basis order
};

struct NoiseModel {
  double p1 = 0.0;            // depolarizing probability after 1q gates
  double p2 = 0.0;            // per qubit of a CNOT
  double readout_flip = 0.0;  // per-qubit measurement bit flip

  bool is_zero() const { return p1 == 0.0 && p2 == 0.0 && readout_flip == 0.0; }
};

/// Exact |<k|U|0..0>|^2 for every basis state k (no sampling).
ProbabilityDistribution ideal_distribution(const Circuit& c);

/// Monte-Carlo Pauli-insertion trajectories: after each gate, each affected
/// qubit independently receives a uniformly random non-identity Pauli with
/// probability p1 (1q gates) or p2 (CNOT); one measurement per shot with
/// readout flips. Deterministic given seed.
ProbabilityDistribution noisy_distribution(const Circuit& c,
                                           const NoiseModel& nm,
                                           std::size_t shots,
                                           std::uint64_t seed);

/// Total variation distance (1/2) sum |p - q|.
double tvd(const ProbabilityDistribution& p, const ProbabilityDistribution& q);

/// Jensen-Shannon divergence, base-2 logs so the value lies in [0, 1]:
/// sqrt((D(p||m) + D(q||m)) / 2) with m the pointwise mean.
double jsd(const ProbabilityDistribution& p, const ProbabilityDistribution& q);

/// Unweighted mean of member distributions.
ProbabilityDistribution average_distributions(
    const std::vector<ProbabilityDistribution>& members);

}  // namespace qest
