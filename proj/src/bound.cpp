#include "qest/bound.hpp"

#include <algorithm>

#include "qest/error.hpp"
#include "qest/rng.hpp"

namespace qest {

double epsilon_upper_bound(const std::vector<SynthesisSolution>& solutions) {
  double sum = 0.0;
  for (std::size_t k = 0; k < solutions.size(); ++k) {
    if (solutions[k].block_index != k)
      throw Error("epsilon_upper_bound: missing or out-of-order block " +
                  std::to_string(k));
    sum += solutions[k].epsilon;
  }
  return sum;
}

BoundReport verify_bound(const Circuit& source, const Partition& partition,
                         const std::vector<SynthesisSolution>& assembly) {
  if (assembly.size() != partition.blocks.size())
    throw Error("verify_bound: need exactly one solution per block");
  BoundReport report;
  report.epsilon_sum = epsilon_upper_bound(assembly);

  if (source.width > kMaxUnitaryWidth) return report;

  std::vector<std::optional<Circuit>> replacements;
  replacements.reserve(assembly.size());
  for (const auto& sol : assembly) replacements.emplace_back(sol.circuit);
  const Circuit approx = reassemble(partition, replacements);

  const double actual = hs_distance(unitary_of(source), unitary_of(approx));
  report.actual = actual;
  report.satisfied = actual <= report.epsilon_sum + kBoundSlack;
  if (report.epsilon_sum > 0.0) report.ratio = actual / report.epsilon_sum;
  return report;
}

bool extension_lemma_check(const Unitary& u1, const Unitary& u1p,
                           std::uint32_t n_extra) {
  if (u1.rows() != u1p.rows()) throw Error("extension_lemma_check: dim mismatch");
  std::uint32_t k = 0;
  while ((Eigen::Index(1) << k) < u1.rows()) ++k;
  const std::uint32_t n = k + n_extra;

  std::vector<std::uint32_t> front(k);
  for (std::uint32_t i = 0; i < k; ++i) front[i] = i;
  const double small = hs_distance(u1, u1p);
  const double big =
      hs_distance(extend_to_full(u1, front, n), extend_to_full(u1p, front, n));
  return big <= small + 1e-12;
}

namespace {

// Jitter every angle and append a few extra near-identity rotations, so the
// perturbed block stays a nontrivial but close approximation.
Circuit perturb_block(const Circuit& sub, Rng& rng) {
  Circuit out = sub;
  for (Gate& g : out.gates) {
    for (double& a : g.params) a += 0.4 * (rng.next_double() - 0.5);
  }
  const std::size_t extra = rng.next_index(3);
  for (std::size_t i = 0; i < extra; ++i) {
    const auto q = static_cast<std::uint32_t>(rng.next_index(out.width));
    out.add(Gate::u3(q, 0.2 * (rng.next_double() - 0.5),
                     0.2 * (rng.next_double() - 0.5),
                     0.2 * (rng.next_double() - 0.5)));
  }
  return out;
}

}  // namespace

std::vector<CertificationRow> certify_bound_random(std::size_t instances,
                                                   std::uint32_t min_qubits,
                                                   std::uint32_t max_qubits,
                                                   std::size_t min_blocks,
                                                   std::size_t max_blocks,
                                                   std::uint64_t seed) {
  if (min_qubits < 3 || max_qubits < min_qubits || min_blocks < 1 ||
      max_blocks < min_blocks)
    throw Error("certify_bound_random: bad instance shape");
  std::vector<CertificationRow> rows;
  rows.reserve(instances);
  for (std::size_t inst = 0; inst < instances; ++inst) {
    Partition partition;
    Circuit source;
    bool found = false;
    for (std::uint64_t attempt = 0; attempt < 64 && !found; ++attempt) {
      Rng rng = Rng(seed).derive(inst, attempt);
      const auto width = static_cast<std::uint32_t>(
          min_qubits + rng.next_index(max_qubits - min_qubits + 1));
      const std::uint32_t mbs = 2 + static_cast<std::uint32_t>(
                                        rng.next_index(width - 2 + 1));
      const std::size_t gates = 6 + rng.next_index(14);
      source = random_circuit(rng, width, gates);
      partition = scan_partition(source, std::max(2u, mbs));
      found = partition.blocks.size() >= min_blocks &&
              partition.blocks.size() <= max_blocks;
    }
    if (!found)
      throw Error("certify_bound_random: could not hit requested block count");

    Rng prng = Rng(seed).derive(0x9e47, inst);
    std::vector<SynthesisSolution> assembly;
    for (const Block& b : partition.blocks) {
      SynthesisSolution sol;
      sol.block_index = b.index;
      sol.circuit = perturb_block(b.sub, prng);
      sol.epsilon = hs_distance(unitary_of(b.sub), unitary_of(sol.circuit));
      sol.cnots = cnot_count(sol.circuit);
      assembly.push_back(std::move(sol));
    }
    const BoundReport report = verify_bound(source, partition, assembly);

    CertificationRow row;
    row.instance = inst;
    row.blocks = partition.blocks.size();
    row.epsilon_sum = report.epsilon_sum;
    row.actual = report.actual.value_or(0.0);
    row.ratio = report.ratio.value_or(0.0);
    row.satisfied = report.satisfied;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qest
