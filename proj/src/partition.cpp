#include "qest/partition.hpp"

#include <algorithm>
#include <set>

#include "qest/error.hpp"

namespace qest {

namespace {

Block make_block(std::size_t index, const std::set<std::uint32_t>& active,
                 std::vector<Gate> pending) {
  Block b;
  b.index = index;
  b.qubits.assign(active.begin(), active.end());
  b.sub.width = static_cast<std::uint32_t>(b.qubits.size());
  for (Gate& g : pending) {
    for (std::uint32_t& q : g.qubits) {
      auto it = std::lower_bound(b.qubits.begin(), b.qubits.end(), q);
      q = static_cast<std::uint32_t>(it - b.qubits.begin());
    }
    b.sub.add(std::move(g));
  }
  return b;
}

}  // namespace

Partition scan_partition(const Circuit& c, std::uint32_t max_block_size) {
  validate(c);
  if (max_block_size < 2) throw Error("scan_partition: max_block_size must be >= 2");

  Partition p;
  p.source_width = c.width;

  std::set<std::uint32_t> active;
  std::vector<Gate> pending;

  auto close_block = [&]() {
    if (pending.empty()) return;
    p.blocks.push_back(make_block(p.blocks.size(), active, std::move(pending)));
    pending.clear();
    active.clear();
  };

  for (const Gate& g : c.gates) {
    if (g.qubits.size() > max_block_size)
      throw Error("scan_partition: gate arity exceeds max_block_size");
    std::set<std::uint32_t> grown = active;
    grown.insert(g.qubits.begin(), g.qubits.end());
    if (grown.size() > max_block_size) {
      close_block();
      active.insert(g.qubits.begin(), g.qubits.end());
    } else {
      active = std::move(grown);
    }
    pending.push_back(g);
  }
  close_block();
  return p;
}

Circuit reassemble(const Partition& p,
                   const std::vector<std::optional<Circuit>>& replacements) {
  Circuit out(p.source_width);
  for (const Block& b : p.blocks) {
    const Circuit* sub = &b.sub;
    if (b.index < replacements.size() && replacements[b.index]) {
      sub = &*replacements[b.index];
      if (sub->width != b.qubits.size())
        throw Error("reassemble: replacement width mismatch for block " +
                    std::to_string(b.index));
    }
    for (Gate g : sub->gates) {
      for (std::uint32_t& q : g.qubits) q = b.to_global(q);
      out.add(std::move(g));
    }
  }
  validate(out);
  return out;
}

}  // namespace qest
