#pragma once

#include <cstdint>
#include <vector>

#include "qest/matrix.hpp"
#include "qest/synthesis.hpp"

namespace qest {

/// Per-block synthesis output: the block's target unitary and the candidate
/// approximations to choose among.
struct BlockSolutions {
  Unitary target;
  std::vector<SynthesisSolution> solutions;
};

/// One full-circuit assembly: one solution index per block.
struct CandidateAssembly {
  std::vector<std::size_t> choice;
  std::size_t cnots = 0;
  double epsilon_sum = 0.0;
};

struct ApproximationSet {
  std::vector<CandidateAssembly> selected;
  // Pairwise block-fraction similarity scores between selected members.
  std::vector<std::vector<double>> similarity;
  double eps_threshold = 0.0;
};

struct AnnealConfig {
  double initial_temperature = 1.0;
  double cooling = 0.95;
  std::size_t steps = 2000;
  std::size_t reanneal_every = 500;
};

/// Two approximations a, b of original o count as similar when
/// hs(a,b) <= max(hs(a,o), hs(o,b)) — same region of the epsilon ball.
bool similar(const Unitary& a, const Unitary& b, const Unitary& o);

/// Precomputed per-block distances so selection never touches full-circuit
/// unitaries.
class SolutionSpace {
public:
  SolutionSpace(std::vector<BlockSolutions> blocks, std::size_t baseline_cnots);

  std::size_t block_count() const { return blocks_.size(); }
  std::size_t options(std::size_t k) const {
    return blocks_[k].solutions.size();
  }
  std::size_t baseline_cnots() const { return baseline_cnots_; }
  const std::vector<BlockSolutions>& blocks() const { return blocks_; }

  CandidateAssembly assemble(const std::vector<std::size_t>& choice) const;
  /// similar() verdict for solutions i, j of block k against the block target.
  bool blocks_similar(std::size_t k, std::size_t i, std::size_t j) const;
  /// Fraction of blocks on which the two assemblies are similar.
  double member_similarity(const CandidateAssembly& a,
                           const CandidateAssembly& b) const;

private:
  std::vector<BlockSolutions> blocks_;
  std::size_t baseline_cnots_;
  // per block: pairwise similar() verdicts, flattened s*n+t
  std::vector<std::vector<char>> similar_;
};

/// Mean over selected members of the fraction of blocks similar to cand.
double block_similarity_score(const CandidateAssembly& cand,
                              const std::vector<CandidateAssembly>& selected,
                              const SolutionSpace& space);

/// The annealing objective: 1.0 when the epsilon bound is breached, the
/// normalized CNOT count for the first pick, otherwise the equal-weight mix
/// of similarity score and normalized CNOT count.
double objective(const CandidateAssembly& cand,
                 const std::vector<CandidateAssembly>& selected,
                 const SolutionSpace& space, double eps_threshold);

/// Repeat M rounds of simulated annealing over choice vectors, appending the
/// best feasible, not-yet-selected assembly each round. Deterministic given
/// seed. Members always satisfy epsilon_sum <= eps_threshold; rounds that
/// find nothing below objective 1.0 append nothing.
ApproximationSet select_approximations(const SolutionSpace& space,
                                       std::size_t num_approximations,
                                       double eps_threshold,
                                       const AnnealConfig& cfg,
                                       std::uint64_t seed);

}  // namespace qest
