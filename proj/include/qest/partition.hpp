#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qest/circuit.hpp"

namespace qest {

/// Time-contiguous sub-circuit on at most max_block_size qubits.
/// qubits holds the global indices in ascending order; local qubit i of
/// `sub` corresponds to qubits[i].
struct Block {
  std::size_t index = 0;
  std::vector<std::uint32_t> qubits;
  Circuit sub;

  std::uint32_t to_global(std::uint32_t local) const { return qubits[local]; }
};

struct Partition {
  std::uint32_t source_width = 1;
  std::vector<Block> blocks;
};

/// Greedy left-to-right scan: fold each gate into the current block when its
/// qubits fit within the grown active set without exceeding max_block_size,
/// otherwise close the block and seed a new one with that gate.
/// Throws Error when a gate's arity exceeds max_block_size.
Partition scan_partition(const Circuit& c, std::uint32_t max_block_size);

/// Concatenate the blocks in order, mapped back to global qubits.
/// replacements[k] (when present) substitutes block k's sub-circuit and must
/// have width |qubits_k|.
Circuit reassemble(
    const Partition& p,
    const std::vector<std::optional<Circuit>>& replacements = {});

}  // namespace qest
