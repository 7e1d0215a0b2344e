#include "qest/selector.hpp"

#include <algorithm>
#include <cmath>

#include "qest/error.hpp"
#include "qest/rng.hpp"

namespace qest {

bool similar(const Unitary& a, const Unitary& b, const Unitary& o) {
  const double d_ab = hs_distance(a, b);
  return d_ab <= std::max(hs_distance(a, o), hs_distance(o, b));
}

SolutionSpace::SolutionSpace(std::vector<BlockSolutions> blocks,
                             std::size_t baseline_cnots)
    : blocks_(std::move(blocks)), baseline_cnots_(baseline_cnots) {
  if (blocks_.empty()) throw Error("SolutionSpace: no blocks");
  similar_.resize(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& bs = blocks_[k];
    if (bs.solutions.empty())
      throw Error("SolutionSpace: block " + std::to_string(k) +
                  " has no solutions");
    const std::size_t count = bs.solutions.size();
    std::vector<Unitary> units(count);
    std::vector<double> to_target(count);
    for (std::size_t i = 0; i < count; ++i) {
      units[i] = unitary_of(bs.solutions[i].circuit);
      to_target[i] = hs_distance(units[i], bs.target);
    }
    auto& flags = similar_[k];
    flags.assign(count * count, 0);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i; j < count; ++j) {
        const double d = hs_distance(units[i], units[j]);
        const char same = d <= std::max(to_target[i], to_target[j]) ? 1 : 0;
        flags[i * count + j] = same;
        flags[j * count + i] = same;
      }
    }
  }
}

CandidateAssembly SolutionSpace::assemble(
    const std::vector<std::size_t>& choice) const {
  if (choice.size() != blocks_.size())
    throw Error("assemble: choice vector length mismatch");
  CandidateAssembly cand;
  cand.choice = choice;
  for (std::size_t k = 0; k < choice.size(); ++k) {
    if (choice[k] >= blocks_[k].solutions.size())
      throw Error("assemble: choice index out of range");
    const auto& sol = blocks_[k].solutions[choice[k]];
    cand.cnots += sol.cnots;
    cand.epsilon_sum += sol.epsilon;
  }
  return cand;
}

bool SolutionSpace::blocks_similar(std::size_t k, std::size_t i,
                                   std::size_t j) const {
  return similar_[k][i * blocks_[k].solutions.size() + j] != 0;
}

double SolutionSpace::member_similarity(const CandidateAssembly& a,
                                        const CandidateAssembly& b) const {
  std::size_t hits = 0;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_similar(k, a.choice[k], b.choice[k])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(blocks_.size());
}

double block_similarity_score(const CandidateAssembly& cand,
                              const std::vector<CandidateAssembly>& selected,
                              const SolutionSpace& space) {
  if (selected.empty()) return 0.0;
  double m = 0.0;
  for (const auto& s : selected) m += space.member_similarity(cand, s);
  return m / static_cast<double>(selected.size());
}

namespace {

double cnot_norm(const CandidateAssembly& cand, std::size_t baseline) {
  if (baseline > 0)
    return static_cast<double>(cand.cnots) / static_cast<double>(baseline);
  return cand.cnots == 0 ? 0.0 : 1.0;
}

}  // namespace

double objective(const CandidateAssembly& cand,
                 const std::vector<CandidateAssembly>& selected,
                 const SolutionSpace& space, double eps_threshold) {
  if (cand.epsilon_sum > eps_threshold) return 1.0;
  const double c_norm = cnot_norm(cand, space.baseline_cnots());
  if (selected.empty()) return c_norm;
  const double m = block_similarity_score(cand, selected, space);
  return 0.5 * m + 0.5 * c_norm;
}

namespace {

struct ScoredChoice {
  std::vector<std::size_t> choice;
  double score = 1.0;
  std::size_t cnots = 0;
  bool valid = false;
};

// Tie-break: lower objective, then lower cnots, then lexicographic choice.
bool better(const ScoredChoice& a, const ScoredChoice& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.score != b.score) return a.score < b.score;
  if (a.cnots != b.cnots) return a.cnots < b.cnots;
  return a.choice < b.choice;
}

class RoundSearch {
public:
  RoundSearch(const SolutionSpace& space,
              const std::vector<CandidateAssembly>& selected,
              double eps_threshold)
      : space_(space), selected_(selected), eps_(eps_threshold) {}

  // Candidates above the baseline CNOT count are pruned before the
  // objective; duplicates of already selected members can never be appended.
  double score(const std::vector<std::size_t>& choice,
               CandidateAssembly* out = nullptr) const {
    CandidateAssembly cand = space_.assemble(choice);
    double s;
    if (space_.baseline_cnots() > 0 && cand.cnots > space_.baseline_cnots())
      s = 1.0;
    else
      s = objective(cand, selected_, space_, eps_);
    if (out) *out = std::move(cand);
    return s;
  }

  bool is_duplicate(const std::vector<std::size_t>& choice) const {
    return std::any_of(
        selected_.begin(), selected_.end(),
        [&](const CandidateAssembly& s) { return s.choice == choice; });
  }

  void offer(const std::vector<std::size_t>& choice, double s,
             std::size_t cnots) {
    if (s >= 1.0 || is_duplicate(choice)) return;
    ScoredChoice sc{choice, s, cnots, true};
    if (better(sc, best_)) best_ = std::move(sc);
  }

  const ScoredChoice& best() const { return best_; }

private:
  const SolutionSpace& space_;
  const std::vector<CandidateAssembly>& selected_;
  double eps_;
  ScoredChoice best_;
};

}  // namespace

ApproximationSet select_approximations(const SolutionSpace& space,
                                       std::size_t num_approximations,
                                       double eps_threshold,
                                       const AnnealConfig& cfg,
                                       std::uint64_t seed) {
  const std::size_t num_blocks = space.block_count();
  ApproximationSet result;
  result.eps_threshold = eps_threshold;

  for (std::size_t round = 0; round < num_approximations; ++round) {
    Rng rng = Rng(seed).derive(0x5e1ec7, round);
    RoundSearch search(space, result.selected, eps_threshold);

    std::vector<std::size_t> cur(num_blocks);
    for (std::size_t k = 0; k < num_blocks; ++k)
      cur[k] = rng.next_index(space.options(k));
    CandidateAssembly cand;
    double cur_score = search.score(cur, &cand);
    search.offer(cur, cur_score, cand.cnots);

    double temp = cfg.initial_temperature;
    for (std::size_t step = 0; step < cfg.steps; ++step) {
      if (cfg.reanneal_every > 0 && step > 0 &&
          step % cfg.reanneal_every == 0) {
        temp = cfg.initial_temperature;  // reanneal
      }
      // Visiting distribution widens with temperature: redraw more
      // coordinates when hot, a single one when cold.
      const double hot = std::min(1.0, temp);
      const auto extra = static_cast<std::size_t>(
          std::floor(hot * static_cast<double>(num_blocks - 1) *
                     rng.next_double()));
      std::vector<std::size_t> prop = cur;
      for (std::size_t i = 0; i < 1 + extra; ++i) {
        const std::size_t k = rng.next_index(num_blocks);
        prop[k] = rng.next_index(space.options(k));
      }
      CandidateAssembly pcand;
      const double prop_score = search.score(prop, &pcand);
      search.offer(prop, prop_score, pcand.cnots);

      const double delta = prop_score - cur_score;
      if (delta <= 0.0 ||
          rng.next_double() < std::exp(-delta / std::max(temp, 1e-12))) {
        cur = std::move(prop);
        cur_score = prop_score;
      }
      temp *= cfg.cooling;
    }

    // Local polish: coordinate descent sweeps from the annealing optimum.
    if (search.best().valid) {
      bool improved = true;
      while (improved) {
        improved = false;
        ScoredChoice base = search.best();
        for (std::size_t k = 0; k < num_blocks; ++k) {
          for (std::size_t j = 0; j < space.options(k); ++j) {
            if (j == base.choice[k]) continue;
            std::vector<std::size_t> trial = base.choice;
            trial[k] = j;
            CandidateAssembly tcand;
            const double s = search.score(trial, &tcand);
            search.offer(trial, s, tcand.cnots);
          }
        }
        if (better(search.best(), base)) improved = true;
      }
    }

    if (search.best().valid) {
      result.selected.push_back(space.assemble(search.best().choice));
    }
  }

  const std::size_t count = result.selected.size();
  result.similarity.assign(count, std::vector<double>(count, 0.0));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      result.similarity[i][j] =
          space.member_similarity(result.selected[i], result.selected[j]);
    }
  }
  return result;
}

}  // namespace qest
