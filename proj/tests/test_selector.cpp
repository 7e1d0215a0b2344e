#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qest/matrix.hpp"
#include "qest/rng.hpp"
#include "qest/selector.hpp"

using namespace qest;

namespace {

// Ten one-qubit blocks around an identity target with an RZ(+d)/RZ(-d)
// solution pair: same index = similar, opposite index = dissimilar.
std::vector<BlockSolutions> rz_pair_blocks(std::size_t count, double delta,
                                           std::size_t fake_cnots) {
  std::vector<BlockSolutions> blocks;
  for (std::size_t k = 0; k < count; ++k) {
    BlockSolutions bs;
    bs.target = Unitary::Identity(2, 2);
    for (int sign : {+1, -1}) {
      SynthesisSolution s;
      s.block_index = k;
      s.circuit = Circuit{1, {Gate::rz(0, sign * delta)}};
      s.epsilon = hs_distance(unitary_of(s.circuit), bs.target);
      s.cnots = fake_cnots;  // synthetic count, objective math only
      bs.solutions.push_back(std::move(s));
    }
    blocks.push_back(std::move(bs));
  }
  return blocks;
}

}  // namespace

TEST_CASE("similar verdicts") {
  const Unitary o = Unitary::Identity(2, 2);
  CHECK(similar(o, o, o));

  const Unitary b = unitary_of(Circuit{1, {Gate::rz(0, 0.4)}});
  CHECK(similar(o, b, o));  // a == o degenerate case

  const Unitary plus = unitary_of(Circuit{1, {Gate::rz(0, 0.2)}});
  const Unitary minus = unitary_of(Circuit{1, {Gate::rz(0, -0.2)}});
  CHECK_FALSE(similar(plus, minus, o));  // opposite sides of the ball
  CHECK(similar(minus, plus, o) == similar(plus, minus, o));  // symmetry
}

TEST_CASE("block similarity score counts similar block fractions") {
  SolutionSpace space(rz_pair_blocks(10, 0.2, 0), 10);
  CandidateAssembly member = space.assemble(std::vector<std::size_t>(10, 0));

  SUBCASE("identical member contributes 1.0") {
    CHECK(block_similarity_score(member, {member}, space) == 1.0);
  }
  SUBCASE("three similar blocks out of ten score 0.3") {
    std::vector<std::size_t> choice(10, 1);
    choice[0] = choice[1] = choice[2] = 0;
    const CandidateAssembly cand = space.assemble(choice);
    CHECK(block_similarity_score(cand, {member}, space) ==
          doctest::Approx(0.3).epsilon(1e-15));
  }
  SUBCASE("fully dissimilar scores 0.0") {
    const CandidateAssembly cand =
        space.assemble(std::vector<std::size_t>(10, 1));
    CHECK(block_similarity_score(cand, {member}, space) == 0.0);
  }
}

TEST_CASE("objective follows the annealing branches") {
  SolutionSpace space(rz_pair_blocks(10, 0.2, 3), 100);  // 30 cnots total

  std::vector<std::size_t> base(10, 0);
  const CandidateAssembly first = space.assemble(base);

  SUBCASE("threshold breach returns 1.0") {
    CHECK(objective(first, {}, space, first.epsilon_sum / 2) == 1.0);
  }
  SUBCASE("first sample returns the normalized cnot count") {
    CHECK(objective(first, {}, space, 2.0) ==
          doctest::Approx(0.30).epsilon(1e-15));
  }
  SUBCASE("equal-weight mix of similarity and cnot count") {
    std::vector<std::size_t> choice(10, 1);
    choice[0] = choice[1] = choice[2] = 0;  // m = 0.3, c_norm = 0.3
    const CandidateAssembly cand = space.assemble(choice);
    CHECK(objective(cand, {first}, space, 2.0) ==
          doctest::Approx(0.30).epsilon(1e-15));
  }
}

TEST_CASE("single assembly space selects the unique vector") {
  std::vector<BlockSolutions> blocks = rz_pair_blocks(3, 0.2, 0);
  for (auto& b : blocks) b.solutions.resize(1);
  SolutionSpace space(std::move(blocks), 1);
  const ApproximationSet set =
      select_approximations(space, 1, 1.0, AnnealConfig{}, 5);
  REQUIRE(set.selected.size() == 1);
  CHECK(set.selected[0].choice == std::vector<std::size_t>(3, 0));
}

TEST_CASE("selection is deterministic and respects the epsilon threshold") {
  Rng rng(606);
  const auto fx = testing::random_space(rng);
  const ApproximationSet a =
      select_approximations(fx.space, 4, fx.eps_threshold, AnnealConfig{}, 9);
  const ApproximationSet b =
      select_approximations(fx.space, 4, fx.eps_threshold, AnnealConfig{}, 9);
  REQUIRE(a.selected.size() == b.selected.size());
  for (std::size_t i = 0; i < a.selected.size(); ++i) {
    CHECK(a.selected[i].choice == b.selected[i].choice);
    CHECK(a.selected[i].epsilon_sum <= fx.eps_threshold);
    for (std::size_t j = 0; j < i; ++j) {
      CHECK(a.selected[i].choice != a.selected[j].choice);  // distinct members
    }
  }
}

TEST_CASE("annealing matches the exhaustive oracle on small spaces") {
  Rng rng(707);
  for (int trial = 0; trial < 5; ++trial) {
    const auto fx = testing::random_space(rng);
    const ApproximationSet set = select_approximations(
        fx.space, 2, fx.eps_threshold, AnnealConfig{}, 1000 + trial);

    const auto brute_first = testing::brute_force_best(fx.space, {}, fx.eps_threshold);
    if (!brute_first.found) {
      CHECK(set.selected.empty());
      continue;
    }
    REQUIRE(!set.selected.empty());
    const double got_first =
        objective(set.selected[0], {}, fx.space, fx.eps_threshold);
    CHECK(got_first == brute_first.objective);

    const auto brute_second = testing::brute_force_best(
        fx.space, {set.selected[0]}, fx.eps_threshold);
    if (!brute_second.found) {
      CHECK(set.selected.size() == 1);
      continue;
    }
    REQUIRE(set.selected.size() == 2);
    const double got_second = objective(set.selected[1], {set.selected[0]},
                                        fx.space, fx.eps_threshold);
    CHECK(got_second == brute_second.objective);
  }
}

TEST_CASE("second pick beats a duplicate of the first") {
  SolutionSpace space(rz_pair_blocks(4, 0.2, 1), 8);
  const double threshold = 2.0;
  const ApproximationSet set =
      select_approximations(space, 2, threshold, AnnealConfig{}, 77);
  REQUIRE(set.selected.size() == 2);
  const double second = objective(set.selected[1], {set.selected[0]}, space,
                                  threshold);
  const double duplicate = objective(set.selected[0], {set.selected[0]}, space,
                                     threshold);
  CHECK(second <= duplicate);
  CHECK(set.similarity[0][1] == set.similarity[1][0]);
}
