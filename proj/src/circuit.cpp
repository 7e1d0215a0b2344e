#include "qest/circuit.hpp"

#include <algorithm>

#include "qest/error.hpp"
#include "qest/rng.hpp"

namespace qest {

int gate_arity(GateKind kind) { return kind == GateKind::CNOT ? 2 : 1; }

int gate_param_count(GateKind kind) {
  switch (kind) {
    case GateKind::U3:
      return 3;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      return 1;
    default:
      return 0;
  }
}

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::U3:
      return "u3";
    case GateKind::RX:
      return "rx";
    case GateKind::RY:
      return "ry";
    case GateKind::RZ:
      return "rz";
    case GateKind::H:
      return "h";
    case GateKind::X:
      return "x";
    case GateKind::CNOT:
      return "cx";
  }
  return "?";
}

void validate(const Circuit& c) {
  if (c.width < 1) throw Error("circuit width must be >= 1");
  for (const Gate& g : c.gates) {
    if (static_cast<int>(g.qubits.size()) != gate_arity(g.kind))
      throw Error("gate " + gate_name(g.kind) + " has wrong qubit count");
    if (static_cast<int>(g.params.size()) != gate_param_count(g.kind))
      throw Error("gate " + gate_name(g.kind) + " has wrong parameter count");
    for (std::uint32_t q : g.qubits) {
      if (q >= c.width)
        throw Error("gate " + gate_name(g.kind) + " references qubit " +
                    std::to_string(q) + " outside width " +
                    std::to_string(c.width));
    }
    if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1])
      throw Error("gate " + gate_name(g.kind) + " operands must be distinct");
  }
}

std::size_t cnot_count(const Circuit& c) {
  return static_cast<std::size_t>(
      std::count_if(c.gates.begin(), c.gates.end(),
                    [](const Gate& g) { return g.kind == GateKind::CNOT; }));
}

Circuit concat(const Circuit& a, const Circuit& b) {
  if (a.width != b.width) throw Error("concat: width mismatch");
  Circuit out = a;
  out.gates.insert(out.gates.end(), b.gates.begin(), b.gates.end());
  return out;
}

Circuit random_circuit(Rng& rng, std::uint32_t width, std::size_t gates) {
  Circuit c(width);
  for (std::size_t i = 0; i < gates; ++i) {
    const int pick = static_cast<int>(rng.next_index(width >= 2 ? 7 : 6));
    const auto q = static_cast<std::uint32_t>(rng.next_index(width));
    switch (pick) {
      case 0:
        c.add(Gate::u3(q, rng.next_angle(), rng.next_angle(), rng.next_angle()));
        break;
      case 1:
        c.add(Gate::rx(q, rng.next_angle()));
        break;
      case 2:
        c.add(Gate::ry(q, rng.next_angle()));
        break;
      case 3:
        c.add(Gate::rz(q, rng.next_angle()));
        break;
      case 4:
        c.add(Gate::h(q));
        break;
      case 5:
        c.add(Gate::x(q));
        break;
      default: {
        auto t = static_cast<std::uint32_t>(rng.next_index(width - 1));
        if (t >= q) ++t;
        c.add(Gate::cnot(q, t));
        break;
      }
    }
  }
  return c;
}

}  // namespace qest

