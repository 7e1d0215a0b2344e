#include "qest/matrix.hpp"

#include <cmath>

#include "qest/error.hpp"

namespace qest {

namespace {
const Complex kI(0.0, 1.0);

std::uint32_t bit_mask(std::uint32_t q, std::uint32_t n) {
  return 1u << (n - 1 - q);
}
}  // namespace

Eigen::Matrix2cd mat_rx(double a) {
  double c = std::cos(a / 2), s = std::sin(a / 2);
  Eigen::Matrix2cd m;
  m << c, -kI * s, -kI * s, c;
  return m;
}

Eigen::Matrix2cd mat_ry(double a) {
  double c = std::cos(a / 2), s = std::sin(a / 2);
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return m;
}

Eigen::Matrix2cd mat_rz(double a) {
  Eigen::Matrix2cd m;
  m << std::exp(-kI * (a / 2)), 0.0, 0.0, std::exp(kI * (a / 2));
  return m;
}

Eigen::Matrix2cd mat_u3(double theta, double phi, double lambda) {
  return mat_rz(phi) * mat_ry(theta) * mat_rz(lambda);
}

Eigen::Matrix2cd mat_h() {
  double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << r, r, r, -r;
  return m;
}

Eigen::Matrix2cd mat_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd mat_pauli(int which) {
  Eigen::Matrix2cd m;
  switch (which) {
    case 1:
      return mat_x();
    case 2:
      m << 0, -kI, kI, 0;
      return m;
    case 3:
      m << 1, 0, 0, -1;
      return m;
    default:
      throw Error("pauli index must be 1, 2 or 3");
  }
}

Eigen::Matrix2cd gate_matrix_1q(const Gate& g) {
  switch (g.kind) {
    case GateKind::U3:
      return mat_u3(g.params[0], g.params[1], g.params[2]);
    case GateKind::RX:
      return mat_rx(g.params[0]);
    case GateKind::RY:
      return mat_ry(g.params[0]);
    case GateKind::RZ:
      return mat_rz(g.params[0]);
    case GateKind::H:
      return mat_h();
    case GateKind::X:
      return mat_x();
    default:
      throw Error("gate_matrix_1q: not a single-qubit gate");
  }
}

void apply_1q_left(Unitary& m, const Eigen::Matrix2cd& g, std::uint32_t q,
                   std::uint32_t n) {
  const std::uint32_t mask = bit_mask(q, n);
  const auto dim = static_cast<std::uint32_t>(m.rows());
  const Complex g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    Complex* data = m.col(col).data();
    for (std::uint32_t i = 0; i < dim; ++i) {
      if (i & mask) continue;
      const Complex a = data[i], b = data[i | mask];
      data[i] = g00 * a + g01 * b;
      data[i | mask] = g10 * a + g11 * b;
    }
  }
}

void apply_1q_right(Unitary& m, const Eigen::Matrix2cd& g, std::uint32_t q,
                    std::uint32_t n) {
  const std::uint32_t mask = bit_mask(q, n);
  const auto cols = static_cast<std::uint32_t>(m.cols());
  const auto rows = static_cast<std::uint32_t>(m.rows());
  const Complex g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
  for (std::uint32_t c = 0; c < cols; ++c) {
    if (c & mask) continue;
    Complex* lo = m.col(c).data();
    Complex* hi = m.col(c | mask).data();
    for (std::uint32_t r = 0; r < rows; ++r) {
      const Complex a = lo[r], b = hi[r];
      lo[r] = a * g00 + b * g10;
      hi[r] = a * g01 + b * g11;
    }
  }
}

void apply_cnot_left(Unitary& m, std::uint32_t control, std::uint32_t target,
                     std::uint32_t n) {
  const std::uint32_t mc = bit_mask(control, n), mt = bit_mask(target, n);
  const auto dim = static_cast<std::uint32_t>(m.rows());
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    Complex* data = m.col(col).data();
    for (std::uint32_t i = 0; i < dim; ++i) {
      if ((i & mc) && !(i & mt)) std::swap(data[i], data[i | mt]);
    }
  }
}

void apply_cnot_right(Unitary& m, std::uint32_t control, std::uint32_t target,
                      std::uint32_t n) {
  const std::uint32_t mc = bit_mask(control, n), mt = bit_mask(target, n);
  const auto dim = static_cast<std::uint32_t>(m.cols());
  for (std::uint32_t c = 0; c < dim; ++c) {
    if ((c & mc) && !(c & mt)) m.col(c).swap(m.col(c | mt));
  }
}

void apply_gate_left(Unitary& m, const Gate& g, std::uint32_t n) {
  if (g.kind == GateKind::CNOT) {
    apply_cnot_left(m, g.qubits[0], g.qubits[1], n);
  } else {
    apply_1q_left(m, gate_matrix_1q(g), g.qubits[0], n);
  }
}

void apply_gate_right(Unitary& m, const Gate& g, std::uint32_t n) {
  if (g.kind == GateKind::CNOT) {
    apply_cnot_right(m, g.qubits[0], g.qubits[1], n);
  } else {
    apply_1q_right(m, gate_matrix_1q(g), g.qubits[0], n);
  }
}

void apply_1q_state(Eigen::VectorXcd& psi, const Eigen::Matrix2cd& g,
                    std::uint32_t q, std::uint32_t n) {
  const std::uint32_t mask = bit_mask(q, n);
  const auto dim = static_cast<std::uint32_t>(psi.size());
  Complex* data = psi.data();
  const Complex g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
  for (std::uint32_t i = 0; i < dim; ++i) {
    if (i & mask) continue;
    const Complex a = data[i], b = data[i | mask];
    data[i] = g00 * a + g01 * b;
    data[i | mask] = g10 * a + g11 * b;
  }
}

void apply_cnot_state(Eigen::VectorXcd& psi, std::uint32_t control,
                      std::uint32_t target, std::uint32_t n) {
  const std::uint32_t mc = bit_mask(control, n), mt = bit_mask(target, n);
  const auto dim = static_cast<std::uint32_t>(psi.size());
  Complex* data = psi.data();
  for (std::uint32_t i = 0; i < dim; ++i) {
    if ((i & mc) && !(i & mt)) std::swap(data[i], data[i | mt]);
  }
}

void apply_gate_state(Eigen::VectorXcd& psi, const Gate& g, std::uint32_t n) {
  if (g.kind == GateKind::CNOT) {
    apply_cnot_state(psi, g.qubits[0], g.qubits[1], n);
  } else {
    apply_1q_state(psi, gate_matrix_1q(g), g.qubits[0], n);
  }
}

Unitary gate_unitary(const Gate& g, std::uint32_t n) {
  if (g.kind == GateKind::CNOT) {
    Eigen::Matrix4cd cx = Eigen::Matrix4cd::Zero();
    cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
    return extend_to_full(cx, {g.qubits[0], g.qubits[1]}, n);
  }
  return extend_to_full(gate_matrix_1q(g), {g.qubits[0]}, n);
}

Unitary unitary_of(const Circuit& c) {
  if (c.width > kMaxUnitaryWidth)
    throw GuardError("unitary_of: width " + std::to_string(c.width) +
                     " exceeds dense guard of " +
                     std::to_string(kMaxUnitaryWidth));
  validate(c);
  const auto dim = static_cast<Eigen::Index>(1) << c.width;
  Unitary u = Unitary::Identity(dim, dim);
  for (const Gate& g : c.gates) apply_gate_left(u, g, c.width);
  return u;
}

namespace {

// Compensated long-double accumulation: 1 - |Tr|^2/N^2 cancels near zero, so
// the trace needs ~1e-18 relative accuracy for distances down to ~1e-9.
std::complex<long double> hs_inner_ld(const Unitary& u, const Unitary& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw Error("hs_inner: dimension mismatch");
  std::complex<long double> sum(0, 0), comp(0, 0);
  const Complex* a = u.data();
  const Complex* b = v.data();
  const auto count = static_cast<std::size_t>(u.size());
  for (std::size_t i = 0; i < count; ++i) {
    const std::complex<long double> term =
        std::conj(std::complex<long double>(a[i])) *
        std::complex<long double>(b[i]);
    const std::complex<long double> y = term - comp;
    const std::complex<long double> t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

Complex hs_inner(const Unitary& u, const Unitary& v) {
  const std::complex<long double> t = hs_inner_ld(u, v);
  return Complex(static_cast<double>(t.real()), static_cast<double>(t.imag()));
}

double hs_distance(const Unitary& u, const Unitary& v) {
  // |Tr(U^dag V)|^2 / N^2 with N^2 evaluated as ||U||_F^2 ||V||_F^2. The two
  // agree exactly for unitary inputs, but a long gate product only holds
  // Tr(U^dag U) = N to ~1e-15, which the plain form amplifies to ~1e-8 near
  // zero; normalizing by the actual norms cancels that drift (Cauchy-Schwarz
  // keeps the ratio <= 1).
  const long double norm_u = hs_inner_ld(u, u).real();
  const long double norm_v = hs_inner_ld(v, v).real();
  const long double t2 =
      std::norm(hs_inner_ld(u, v)) / (norm_u * norm_v);
  const long double inside = 1.0L - t2;
  if (inside <= 0.0L) return 0.0;
  const double d = static_cast<double>(std::sqrt(inside));
  return d > 1.0 ? 1.0 : d;
}

Unitary extend_to_full(const Unitary& u,
                       const std::vector<std::uint32_t>& block_qubits,
                       std::uint32_t n) {
  const auto k = static_cast<std::uint32_t>(block_qubits.size());
  const auto sub_dim = static_cast<std::uint32_t>(u.rows());
  if (sub_dim != (1u << k))
    throw Error("extend_to_full: matrix dim does not match qubit count");
  std::uint32_t seen = 0;
  for (std::uint32_t q : block_qubits) {
    if (q >= n) throw Error("extend_to_full: qubit index out of range");
    if (seen & bit_mask(q, n))
      throw Error("extend_to_full: duplicate qubit index");
    seen |= bit_mask(q, n);
  }

  // spread[s]: local sub-index s placed at the global bit positions.
  const std::uint32_t full_dim = 1u << n;
  std::vector<std::uint32_t> spread(sub_dim, 0);
  for (std::uint32_t s = 0; s < sub_dim; ++s) {
    std::uint32_t g = 0;
    for (std::uint32_t j = 0; j < k; ++j) {
      if (s & (1u << (k - 1 - j))) g |= bit_mask(block_qubits[j], n);
    }
    spread[s] = g;
  }

  Unitary out = Unitary::Zero(full_dim, full_dim);
  for (std::uint32_t col = 0; col < full_dim; ++col) {
    const std::uint32_t rest = col & ~seen;
    std::uint32_t s = 0;
    for (std::uint32_t j = 0; j < k; ++j) {
      if (col & bit_mask(block_qubits[j], n)) s |= 1u << (k - 1 - j);
    }
    for (std::uint32_t r = 0; r < sub_dim; ++r) {
      out(rest | spread[r], col) = u(r, s);
    }
  }
  return out;
}

double unitarity_defect(const Unitary& u) {
  Unitary d = u.adjoint() * u;
  d -= Unitary::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

}  // namespace qest
