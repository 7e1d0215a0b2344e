#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "qest/circuit.hpp"
#include "qest/matrix.hpp"

namespace qest {

/// Layered circuit template: an initial U3 on every qubit ("dressing"),
/// then per layer one CNOT on a qubit pair followed by a U3 on each of the
/// pair's qubits. Parameter vector length is 3*width + 6*layers.
struct Ansatz {
  std::uint32_t width = 1;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> layers;

  std::size_t param_count() const { return 3u * width + 6u * layers.size(); }
};

/// Instantiate the template at a concrete angle vector.
Circuit ansatz_to_circuit(const Ansatz& a, const Eigen::VectorXd& theta);

/// Synthesis cost 1 - |Tr(target^dag A(theta))|^2 / N^2. Monotone in the
/// HS distance (distance = sqrt(cost)), smooth, cheaper to evaluate.
double ansatz_cost(const Ansatz& a, const Unitary& target,
                   const Eigen::VectorXd& theta);

/// Cost plus analytic gradient w.r.t. every angle (adjoint sweep).
double ansatz_cost_grad(const Ansatz& a, const Unitary& target,
                        const Eigen::VectorXd& theta, Eigen::VectorXd& grad);

/// Quasi-Newton (L-BFGS) local minimization of the synthesis cost.
/// Deterministic given init and budget; returns best-found angles and the
/// corresponding HS distance (non-convergence is not an error).
std::pair<Eigen::VectorXd, double> optimize_angles(const Ansatz& a,
                                                   const Unitary& target,
                                                   Eigen::VectorXd theta0,
                                                   int budget = 200);

struct SynthConfig {
  std::uint32_t beam_width = 3;
  std::uint32_t m_per_depth = 2;
  std::uint32_t restarts = 4;
  std::uint32_t reroot_every = 3;  // collapse beam to best branch cadence
  double exact_tol = 1e-5;
  int opt_iters = 200;
  std::size_t max_layers = 0;  // CNOT budget, normally the block's own count
  std::uint64_t seed = 0;
  std::size_t block_index = 0;
  unsigned workers = 1;  // angle optimizations per depth run on this many threads
};

struct Provenance {
  std::uint32_t restart = 0;
  std::uint32_t layers = 0;
  std::uint64_t branch = 0;
};

struct SynthesisSolution {
  std::size_t block_index = 0;
  Circuit circuit;
  double epsilon = 0.0;  // hs_distance(unitary_of(circuit), target), recomputed
  std::size_t cnots = 0;
  Provenance provenance;
};

/// Beam search over layer placements, recording the best m_per_depth
/// instantiated circuits at every CNOT depth from 0 to max_layers, over
/// `restarts` random starts. Never empty: the depth-0 dressing is always
/// returned. Solutions are sorted by (epsilon, cnots).
std::vector<SynthesisSolution> synthesize_block(const Unitary& target,
                                                const SynthConfig& cfg);

}  // namespace qest
