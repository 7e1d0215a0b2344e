#pragma once

#include <optional>
#include <vector>

#include "qest/matrix.hpp"
#include "qest/partition.hpp"
#include "qest/synthesis.hpp"

namespace qest {

struct BoundReport {
  double epsilon_sum = 0.0;
  std::optional<double> actual;  // absent when width exceeds the dense guard
  bool satisfied = true;         // actual absent, or actual <= sum + slack
  std::optional<double> ratio;   // actual / epsilon_sum when both meaningful
};

/// Numerical slack on the inequality: round-off accumulated by matrix
/// products at N <= 4096; the theorem is exact in exact arithmetic.
inline constexpr double kBoundSlack = 1e-9;

/// Sum of per-block process distances; requires exactly one solution per
/// block of a K-block partition, in block order.
double epsilon_upper_bound(const std::vector<SynthesisSolution>& solutions);

/// Compare the actual full-circuit HS distance against the block-sum bound.
/// The actual-distance leg is skipped (actual absent, satisfied true) when
/// the source width exceeds the dense guard.
BoundReport verify_bound(const Circuit& source, const Partition& partition,
                         const std::vector<SynthesisSolution>& assembly);

/// True iff hs(u1 x I, u1p x I) <= hs(u1, u1p) + 1e-12 with n_extra identity
/// qubits appended (equality expected).
bool extension_lemma_check(const Unitary& u1, const Unitary& u1p,
                           std::uint32_t n_extra);

struct CertificationRow {
  std::size_t instance = 0;
  std::size_t blocks = 0;
  double epsilon_sum = 0.0;
  double actual = 0.0;
  double ratio = 0.0;
  bool satisfied = false;
};

/// Randomized certification: random circuits partitioned into `min_blocks`..
/// `max_blocks` blocks, each block perturbed, actual full-circuit distance
/// compared against the epsilon sum. Deterministic given seed.
std::vector<CertificationRow> certify_bound_random(std::size_t instances,
                                                   std::uint32_t min_qubits,
                                                   std::uint32_t max_qubits,
                                                   std::size_t min_blocks,
                                                   std::size_t max_blocks,
                                                   std::uint64_t seed);

}  // namespace qest
