#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "qest/circuit.hpp"

namespace qest {

using Unitary = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Qubit ordering convention used everywhere: qubit 0 is the most significant
// bit of the basis index. The bit position of qubit q at width n is n-1-q.

/// Dense width guard for unitary materialization (4096 x 4096 ceiling).
inline constexpr std::uint32_t kMaxUnitaryWidth = 12;

Eigen::Matrix2cd mat_rx(double a);
Eigen::Matrix2cd mat_ry(double a);
Eigen::Matrix2cd mat_rz(double a);
/// U3(theta, phi, lambda) = RZ(phi) * RY(theta) * RZ(lambda).
Eigen::Matrix2cd mat_u3(double theta, double phi, double lambda);
Eigen::Matrix2cd mat_h();
Eigen::Matrix2cd mat_x();
Eigen::Matrix2cd mat_pauli(int which);  // 1 = X, 2 = Y, 3 = Z
/// 2x2 matrix of any single-qubit gate.
Eigen::Matrix2cd gate_matrix_1q(const Gate& g);

// In-place local updates. "left" means M <- G M (gate acts on row space),
// "right" means M <- M G. States are the single-column case.
void apply_1q_left(Unitary& m, const Eigen::Matrix2cd& g, std::uint32_t q,
                   std::uint32_t n);
void apply_1q_right(Unitary& m, const Eigen::Matrix2cd& g, std::uint32_t q,
                    std::uint32_t n);
void apply_cnot_left(Unitary& m, std::uint32_t control, std::uint32_t target,
                     std::uint32_t n);
void apply_cnot_right(Unitary& m, std::uint32_t control, std::uint32_t target,
                      std::uint32_t n);
void apply_gate_left(Unitary& m, const Gate& g, std::uint32_t n);
void apply_gate_right(Unitary& m, const Gate& g, std::uint32_t n);

void apply_1q_state(Eigen::VectorXcd& psi, const Eigen::Matrix2cd& g,
                    std::uint32_t q, std::uint32_t n);
void apply_cnot_state(Eigen::VectorXcd& psi, std::uint32_t control,
                      std::uint32_t target, std::uint32_t n);
void apply_gate_state(Eigen::VectorXcd& psi, const Gate& g, std::uint32_t n);

/// Full 2^n x 2^n unitary of one gate (identity on untouched qubits).
Unitary gate_unitary(const Gate& g, std::uint32_t n);

/// Right-to-left product of gate unitaries in time order.
/// Throws GuardError when c.width > kMaxUnitaryWidth.
Unitary unitary_of(const Circuit& c);

/// sqrt(1 - |Tr(U^dag V)|^2 / N^2), clamped into [0, 1].
double hs_distance(const Unitary& u, const Unitary& v);

/// Tr(U^dag V) without forming the product matrix.
Complex hs_inner(const Unitary& u, const Unitary& v);

/// Embed u (acting on block_qubits, listed most-significant first) into an
/// n-qubit identity. block_qubits must be distinct and < n.
Unitary extend_to_full(const Unitary& u,
                       const std::vector<std::uint32_t>& block_qubits,
                       std::uint32_t n);

/// max |(U^dag U - I)_ij|; unitarity holds when this is <= 1e-10.
double unitarity_defect(const Unitary& u);

}  // namespace qest
