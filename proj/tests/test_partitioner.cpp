#include <doctest.h>

#include <algorithm>
#include <map>

#include "qest/error.hpp"
#include "qest/matrix.hpp"
#include "qest/partition.hpp"
#include "qest/rng.hpp"

using namespace qest;

namespace {

// Multiset of gates, order-insensitive fingerprint for conservation checks.
std::multimap<std::string, Gate> gate_multiset(const Circuit& c) {
  std::multimap<std::string, Gate> out;
  for (const Gate& g : c.gates) {
    std::string key = gate_name(g.kind);
    for (auto q : g.qubits) key += "," + std::to_string(q);
    for (auto p : g.params) key += ";" + std::to_string(p);
    out.emplace(std::move(key), g);
  }
  return out;
}

}  // namespace

TEST_CASE("two-block shape splits on the qubit-set boundary") {
  // front gates act on {0,1,2}, rear gates on {1,2,3}
  Circuit c(4);
  c.add(Gate::h(0));
  c.add(Gate::cnot(0, 1));
  c.add(Gate::cnot(1, 2));
  c.add(Gate::rz(2, 0.3));
  c.add(Gate::cnot(3, 2));
  c.add(Gate::cnot(1, 2));
  c.add(Gate::rx(3, 0.7));

  const Partition p = scan_partition(c, 3);
  REQUIRE(p.blocks.size() == 2);
  CHECK(p.blocks[0].qubits == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(p.blocks[1].qubits == std::vector<std::uint32_t>{1, 2, 3});
}

TEST_CASE("everything fits in one block") {
  Circuit c(4);
  c.add(Gate::cnot(0, 1));
  c.add(Gate::h(1));
  c.add(Gate::cnot(1, 0));
  const Partition p = scan_partition(c, 4);
  REQUIRE(p.blocks.size() == 1);
  CHECK(p.blocks[0].qubits == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("reassemble with no replacements is gate-for-gate identical") {
  Rng rng(1001);
  for (int trial = 0; trial < 20; ++trial) {
    const Circuit c = random_circuit(rng, 5, 25);
    const Partition p = scan_partition(c, 3);
    CHECK(reassemble(p) == c);
  }
}

TEST_CASE("reassembly unitary equality on 100 random 5-qubit circuits") {
  Rng rng(1002);
  for (int trial = 0; trial < 100; ++trial) {
    const Circuit c = random_circuit(rng, 5, 5 + rng.next_index(30));
    const Partition p = scan_partition(c, 3);
    const Circuit back = reassemble(p);
    CHECK(hs_distance(unitary_of(c), unitary_of(back)) <= 1e-9);

    // gate conservation as a multiset
    const auto a = gate_multiset(c);
    const auto b = gate_multiset(back);
    CHECK(a.size() == b.size());
    for (const auto& [key, gate] : a) CHECK(b.count(key) == a.count(key));
  }
}

TEST_CASE("no cross-block cnots and block size limits hold") {
  Rng rng(1003);
  for (int trial = 0; trial < 30; ++trial) {
    const Circuit c = random_circuit(rng, 6, 40);
    const std::uint32_t mbs = 2 + static_cast<std::uint32_t>(rng.next_index(3));
    const Partition p = scan_partition(c, mbs);
    std::size_t gates_seen = 0;
    for (const Block& b : p.blocks) {
      CHECK(b.qubits.size() <= mbs);
      CHECK(std::is_sorted(b.qubits.begin(), b.qubits.end()));
      CHECK(b.sub.width == b.qubits.size());
      for (const Gate& g : b.sub.gates) {
        ++gates_seen;
        for (auto q : g.qubits) CHECK(q < b.sub.width);
      }
    }
    CHECK(gates_seen == c.gates.size());
  }
}

TEST_CASE("replacing a block with its own copy leaves the unitary unchanged") {
  Rng rng(1004);
  const Circuit c = random_circuit(rng, 4, 20);
  const Partition p = scan_partition(c, 2);
  REQUIRE(p.blocks.size() >= 1);
  std::vector<std::optional<Circuit>> repl(p.blocks.size());
  repl[0] = p.blocks[0].sub;
  const Circuit back = reassemble(p, repl);
  CHECK(hs_distance(unitary_of(c), unitary_of(back)) <= 1e-12);
}

TEST_CASE("replacement cnot additivity") {
  Rng rng(1005);
  const Circuit c = random_circuit(rng, 5, 30);
  const Partition p = scan_partition(c, 3);
  std::vector<std::optional<Circuit>> repl;
  std::size_t expected = 0;
  for (const Block& b : p.blocks) {
    Rng sub = rng.derive(b.index);
    Circuit replacement = random_circuit(sub, b.sub.width, 6);
    expected += cnot_count(replacement);
    repl.emplace_back(std::move(replacement));
  }
  CHECK(cnot_count(reassemble(p, repl)) == expected);
}

TEST_CASE("replacement width mismatch is an error") {
  Circuit c(3);
  c.add(Gate::cnot(0, 1));
  const Partition p = scan_partition(c, 2);
  std::vector<std::optional<Circuit>> repl(1);
  repl[0] = Circuit{3, {}};
  CHECK_THROWS_AS(reassemble(p, repl), Error);
}

TEST_CASE("partition is deterministic and K is stable") {
  Rng rng(1006);
  const Circuit c = random_circuit(rng, 6, 35);
  const Partition a = scan_partition(c, 3);
  const Partition b = scan_partition(c, 3);
  REQUIRE(a.blocks.size() == b.blocks.size());
  for (std::size_t k = 0; k < a.blocks.size(); ++k) {
    CHECK(a.blocks[k].qubits == b.blocks[k].qubits);
    CHECK(a.blocks[k].sub == b.blocks[k].sub);
  }
}

TEST_CASE("max_block_size below two is rejected") {
  Circuit c(2);
  c.add(Gate::cnot(0, 1));
  CHECK_THROWS_AS(scan_partition(c, 1), Error);
}
