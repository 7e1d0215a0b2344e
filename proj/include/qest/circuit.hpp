#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace qest {

enum class GateKind { U3, RX, RY, RZ, H, X, CNOT };

/// Number of qubit operands for a gate kind (2 for CNOT, 1 otherwise).
int gate_arity(GateKind kind);
/// Number of angle parameters (3 for U3, 1 for rotations, 0 otherwise).
int gate_param_count(GateKind kind);
std::string gate_name(GateKind kind);

struct Gate {
  GateKind kind;
  std::vector<std::uint32_t> qubits;  // control first for CNOT
  std::vector<double> params;         // radians

  static Gate u3(std::uint32_t q, double theta, double phi, double lambda) {
    return {GateKind::U3, {q}, {theta, phi, lambda}};
  }
  static Gate rx(std::uint32_t q, double a) { return {GateKind::RX, {q}, {a}}; }
  static Gate ry(std::uint32_t q, double a) { return {GateKind::RY, {q}, {a}}; }
  static Gate rz(std::uint32_t q, double a) { return {GateKind::RZ, {q}, {a}}; }
  static Gate h(std::uint32_t q) { return {GateKind::H, {q}, {}}; }
  static Gate x(std::uint32_t q) { return {GateKind::X, {q}, {}}; }
  static Gate cnot(std::uint32_t control, std::uint32_t target) {
    return {GateKind::CNOT, {control, target}, {}};
  }

  bool operator==(const Gate& other) const = default;
};

/// Ordered gate list over `width` qubits, time order left to right.
struct Circuit {
  std::uint32_t width = 1;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(std::uint32_t n) : width(n) {}
  Circuit(std::uint32_t n, std::vector<Gate> gs)
      : width(n), gates(std::move(gs)) {}

  void add(Gate g) { gates.push_back(std::move(g)); }

  bool operator==(const Circuit& other) const = default;
};

/// Throws Error if any gate violates arity, parameter count, qubit range
/// or qubit distinctness.
void validate(const Circuit& c);

/// Count of CNOT gates; H/X/rotations never count.
std::size_t cnot_count(const Circuit& c);

/// Concatenation: gates of `a` followed by gates of `b`; widths must match.
Circuit concat(const Circuit& a, const Circuit& b);

class Rng;

/// Uniform mix over the supported gate set with angles in [-pi, pi);
/// CNOTs only when width >= 2.
Circuit random_circuit(Rng& rng, std::uint32_t width, std::size_t gates);

}  // namespace qest
