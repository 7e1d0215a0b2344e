#pragma once

// Test-side fixtures and oracles shared by the unit and acceptance suites.

#include <algorithm>
#include <vector>

#include "qest/matrix.hpp"
#include "qest/rng.hpp"
#include "qest/selector.hpp"

namespace qest::testing {

/// A synthetic solution space: small honest 2-qubit blocks with computed
/// epsilons and CNOT counts; assembly count capped at `max_assemblies`.
struct SpaceFixture {
  SolutionSpace space;
  double eps_threshold;
};

inline SpaceFixture random_space(Rng& rng, std::size_t max_assemblies = 1024) {
  const std::size_t num_blocks = 2 + rng.next_index(3);
  std::vector<BlockSolutions> blocks;
  std::size_t assemblies = 1;
  std::size_t baseline = 0;
  double min_eps_sum = 0.0;
  for (std::size_t k = 0; k < num_blocks; ++k) {
    BlockSolutions bs;
    Circuit target_circuit = random_circuit(rng, 2, 4 + rng.next_index(6));
    bs.target = unitary_of(target_circuit);
    std::size_t options = 2 + rng.next_index(3);
    while (assemblies * options > max_assemblies && options > 2) --options;
    if (assemblies * options > max_assemblies) options = 2;
    assemblies *= options;
    double best_eps = 2.0;
    std::size_t max_cnots = 0;
    for (std::size_t i = 0; i < options; ++i) {
      SynthesisSolution sol;
      sol.block_index = k;
      sol.circuit = random_circuit(rng, 2, 1 + rng.next_index(8));
      sol.epsilon = hs_distance(unitary_of(sol.circuit), bs.target);
      sol.cnots = cnot_count(sol.circuit);
      best_eps = std::min(best_eps, sol.epsilon);
      max_cnots = std::max(max_cnots, sol.cnots);
      bs.solutions.push_back(std::move(sol));
    }
    min_eps_sum += best_eps;
    baseline += max_cnots;
    blocks.push_back(std::move(bs));
  }
  // Threshold keeps the greedy-min assembly feasible with some slack; the
  // baseline occasionally sits below the max so pruning gets exercised.
  const std::size_t baseline_cut = rng.next_index(2);
  SpaceFixture fx{
      SolutionSpace(std::move(blocks),
                    std::max<std::size_t>(1, baseline - baseline_cut)),
      min_eps_sum + 0.05 + 0.3 * rng.next_double()};
  return fx;
}

struct BruteResult {
  bool found = false;
  double objective = 1.0;
  std::size_t cnots = 0;
  std::vector<std::size_t> choice;
};

/// Exhaustive scan of every choice vector (Algorithm-1 semantics), with the
/// same pre-objective pruning and tie-breaking the selector commits to:
/// lower objective, then lower cnots, then lexicographic choice.
inline BruteResult brute_force_best(
    const SolutionSpace& space, const std::vector<CandidateAssembly>& selected,
    double eps_threshold) {
  BruteResult best;
  std::vector<std::size_t> choice(space.block_count(), 0);
  while (true) {
    const CandidateAssembly cand = space.assemble(choice);
    const bool pruned = space.baseline_cnots() > 0 &&
                        cand.cnots > space.baseline_cnots();
    const bool duplicate =
        std::any_of(selected.begin(), selected.end(),
                    [&](const CandidateAssembly& s) { return s.choice == choice; });
    if (!pruned && !duplicate) {
      const double obj = objective(cand, selected, space, eps_threshold);
      if (obj < 1.0) {
        const bool take =
            !best.found || obj < best.objective ||
            (obj == best.objective &&
             (cand.cnots < best.cnots ||
              (cand.cnots == best.cnots && choice < best.choice)));
        if (take) {
          best.found = true;
          best.objective = obj;
          best.cnots = cand.cnots;
          best.choice = choice;
        }
      }
    }
    std::size_t k = 0;
    while (k < choice.size()) {
      if (++choice[k] < space.options(k)) break;
      choice[k] = 0;
      ++k;
    }
    if (k == choice.size()) break;
  }
  return best;
}

}  // namespace qest::testing
