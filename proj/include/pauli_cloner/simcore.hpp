// Dense statevector / density-matrix simulation.
//
// Bit order: qubit 0 is the most significant bit of a basis-state index, so in
// a 3-qubit register |q0 q1 q2> has index 4*q0 + 2*q1 + q2. Every register
// layout in this library (cloner registers, program registers, injected
// amplitude vectors) follows this convention.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pauli_cloner/errors.hpp"

namespace pauli_cloner {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Kronecker product; `a` occupies the more significant qubits.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Tolerance used when validating user-supplied states and matrices.
inline double& validation_epsilon() {
  static double eps = 1e-9;
  return eps;
}

inline std::size_t dimension_of(int num_qubits) {
  return std::size_t{1} << num_qubits;
}

/// Bit mask of `qubit` inside an index over `num_qubits` qubits.
inline std::size_t qubit_mask(int num_qubits, int qubit) {
  return std::size_t{1} << (num_qubits - 1 - qubit);
}

// ---------------------------------------------------------------------------
// StateVector
// ---------------------------------------------------------------------------

class StateVector {
 public:
  /// Validates length 2^num_qubits and unit norm.
  StateVector(int num_qubits, CVector amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (num_qubits_ < 1 || num_qubits_ > 24) {
      throw ArgumentError("StateVector: num_qubits must be in [1, 24]");
    }
    if (static_cast<std::size_t>(amplitudes_.size()) != dimension_of(num_qubits_)) {
      throw ArgumentError("StateVector: amplitude count must be 2^num_qubits");
    }
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > validation_epsilon()) {
      throw ArgumentError("StateVector: amplitudes are not normalized");
    }
  }

  /// Builds from any vector, normalizing it first. Throws on a zero vector.
  static StateVector normalized(int num_qubits, CVector amplitudes) {
    const double n = amplitudes.norm();
    if (n == 0.0) throw ArgumentError("StateVector: cannot normalize the zero vector");
    return StateVector(num_qubits, amplitudes / n);
  }

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }
  double norm() const { return amplitudes_.norm(); }

  /// <this|other>
  Complex inner(const StateVector& other) const {
    if (other.num_qubits_ != num_qubits_) throw ArgumentError("inner: qubit-count mismatch");
    return amplitudes_.dot(other.amplitudes_);
  }

  StateVector tensor(const StateVector& low) const {
    CVector out(static_cast<Eigen::Index>(dimension() * low.dimension()));
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
      out.segment(i * low.amplitudes_.size(), low.amplitudes_.size()) =
          amplitudes_[i] * low.amplitudes_;
    }
    return Unchecked(num_qubits_ + low.num_qubits_, std::move(out));
  }

 private:
  struct UncheckedTag {};
  StateVector(UncheckedTag, int n, CVector a) : num_qubits_(n), amplitudes_(std::move(a)) {}
  static StateVector Unchecked(int n, CVector a) { return StateVector(UncheckedTag{}, n, std::move(a)); }

  friend StateVector evolve_unchecked(int, CVector);

  int num_qubits_;
  CVector amplitudes_;
};

/// Wraps amplitudes produced by unitary evolution of a valid state.
inline StateVector evolve_unchecked(int num_qubits, CVector amplitudes) {
  return StateVector(StateVector::UncheckedTag{}, num_qubits, std::move(amplitudes));
}

inline StateVector basis_state(int num_qubits, std::size_t index) {
  if (num_qubits < 1) throw ArgumentError("basis_state: num_qubits must be >= 1");
  if (index >= dimension_of(num_qubits)) {
    throw ArgumentError("basis_state: index " + std::to_string(index) + " out of range");
  }
  CVector a = CVector::Zero(static_cast<Eigen::Index>(dimension_of(num_qubits)));
  a[static_cast<Eigen::Index>(index)] = 1.0;
  return evolve_unchecked(num_qubits, std::move(a));
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-10), unit trace (1e-10) and PSD (eigenvalues >= -1e-9).
  DensityMatrix(int num_qubits, CMatrix matrix) : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits_));
    if (matrix_.rows() != d || matrix_.cols() != d) {
      throw ArgumentError("DensityMatrix: matrix must be 2^n x 2^n");
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
      throw ArgumentError("DensityMatrix: matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex(1.0)) > 1e-10) {
      throw ArgumentError("DensityMatrix: trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
      throw ArgumentError("DensityMatrix: matrix is not positive semidefinite");
    }
  }

  static DensityMatrix pure(const StateVector& psi) {
    return DensityMatrix(Trusted{}, psi.num_qubits(), psi.amplitudes() * psi.amplitudes().adjoint());
  }

  static DensityMatrix maximally_mixed(int num_qubits) {
    const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
    return DensityMatrix(Trusted{}, num_qubits, CMatrix::Identity(d, d) / static_cast<double>(d));
  }

  /// For matrices produced by trace-preserving maps of valid inputs.
  static DensityMatrix trusted(int num_qubits, CMatrix matrix) {
    return DensityMatrix(Trusted{}, num_qubits, std::move(matrix));
  }

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }
  Complex trace() const { return matrix_.trace(); }

  /// Tensor product with `low` placed on the less significant qubits.
  DensityMatrix tensor(const DensityMatrix& low) const {
    return trusted(num_qubits_ + low.num_qubits_, kron(matrix_, low.matrix_));
  }

 private:
  struct Trusted {};
  DensityMatrix(Trusted, int n, CMatrix m) : num_qubits_(n), matrix_(std::move(m)) {}

  int num_qubits_;
  CMatrix matrix_;
};

// ---------------------------------------------------------------------------
// Gates and circuits
// ---------------------------------------------------------------------------

enum class GateKind { H, X, Y, Z, S, Sdg, RX, RY, RZ };

struct Control {
  int qubit = 0;
  bool on_one = true;  // false: open control, fires when the qubit is |0>
};

/// Single-qubit unitary on `target`, optionally conditioned on controls.
/// CNOT is X with one control, CCNOT is X with two.
struct GateOp {
  GateKind kind = GateKind::H;
  int target = 0;
  std::vector<Control> controls;
  double angle = 0.0;  // radians, rotations only

  bool is_rotation() const {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
  }

  std::string name() const {
    static const char* const names[] = {"H", "X", "Y", "Z", "S", "Sdg", "RX", "RY", "RZ"};
    std::string base = names[static_cast<int>(kind)];
    if (kind == GateKind::X && controls.size() == 1) return "CNOT";
    if (kind == GateKind::X && controls.size() == 2) return "CCNOT";
    return std::string(controls.size(), 'C') + base;
  }

  std::array<Complex, 4> matrix() const {
    using namespace std::complex_literals;
    const double r = 1.0 / std::numbers::sqrt2;
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (kind) {
      case GateKind::H: return {r, r, r, -r};
      case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
      case GateKind::Y: return {0.0, -1i, 1i, 0.0};
      case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
      case GateKind::S: return {1.0, 0.0, 0.0, 1i};
      case GateKind::Sdg: return {1.0, 0.0, 0.0, -1i};
      case GateKind::RX: return {c, -1i * s, -1i * s, c};
      case GateKind::RY: return {c, -s, s, c};
      case GateKind::RZ: return {std::exp(-0.5i * angle), 0.0, 0.0, std::exp(0.5i * angle)};
    }
    return {1.0, 0.0, 0.0, 1.0};
  }

  GateOp inverse() const {
    GateOp g = *this;
    if (is_rotation()) g.angle = -angle;
    if (kind == GateKind::S) g.kind = GateKind::Sdg;
    if (kind == GateKind::Sdg) g.kind = GateKind::S;
    return g;
  }
};

namespace gate {
inline GateOp h(int q) { return {GateKind::H, q, {}, 0.0}; }
inline GateOp x(int q) { return {GateKind::X, q, {}, 0.0}; }
inline GateOp y(int q) { return {GateKind::Y, q, {}, 0.0}; }
inline GateOp z(int q) { return {GateKind::Z, q, {}, 0.0}; }
inline GateOp s(int q) { return {GateKind::S, q, {}, 0.0}; }
inline GateOp rx(int q, double a) { return {GateKind::RX, q, {}, a}; }
inline GateOp ry(int q, double a) { return {GateKind::RY, q, {}, a}; }
inline GateOp rz(int q, double a) { return {GateKind::RZ, q, {}, a}; }
inline GateOp cnot(int c, int t) { return {GateKind::X, t, {{c, true}}, 0.0}; }
inline GateOp ccnot(int c1, int c2, int t) { return {GateKind::X, t, {{c1, true}, {c2, true}}, 0.0}; }
inline GateOp cry(int c, int t, double a, bool on_one = true) { return {GateKind::RY, t, {{c, on_one}}, a}; }
}  // namespace gate

/// Places `amplitudes` on `qubits` (first listed = most significant), which
/// must currently be in |0...0> and unentangled with the rest.
struct Injection {
  std::vector<int> qubits;
  CVector amplitudes;
};

using Operation = std::variant<GateOp, Injection>;

class Circuit {
 public:
  explicit Circuit(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1) throw ArgumentError("Circuit: num_qubits must be >= 1");
  }

  int num_qubits() const { return num_qubits_; }
  const std::vector<Operation>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }

  Circuit& add(GateOp g) {
    std::vector<int> idx{g.target};
    for (const auto& c : g.controls) idx.push_back(c.qubit);
    check_indices(idx, "gate " + g.name());
    ops_.emplace_back(std::move(g));
    return *this;
  }

  Circuit& add(Injection inj) {
    check_indices(inj.qubits, "injection");
    if (static_cast<std::size_t>(inj.amplitudes.size()) != dimension_of(static_cast<int>(inj.qubits.size()))) {
      throw ArgumentError("Circuit: injection amplitude count must be 2^|register|");
    }
    ops_.emplace_back(std::move(inj));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (other.num_qubits_ != num_qubits_) throw ArgumentError("Circuit::append: qubit-count mismatch");
    ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
    return *this;
  }

  /// Gate list only; injections are not invertible.
  Circuit inverse() const {
    Circuit inv(num_qubits_);
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
      const auto* g = std::get_if<GateOp>(&*it);
      if (g == nullptr) throw ArgumentError("Circuit::inverse: circuit contains an injection");
      inv.ops_.emplace_back(g->inverse());
    }
    return inv;
  }

 private:
  void check_indices(const std::vector<int>& idx, const std::string& what) const {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] < 0 || idx[i] >= num_qubits_) {
        throw ArgumentError("Circuit: " + what + " uses qubit " + std::to_string(idx[i]) + " outside register");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (idx[i] == idx[j]) throw ArgumentError("Circuit: " + what + " repeats qubit " + std::to_string(idx[i]));
      }
    }
  }

  int num_qubits_;
  std::vector<Operation> ops_;
};

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

namespace detail {

inline void apply_gate(CVector& amps, int num_qubits, const GateOp& g) {
  const auto u = g.matrix();
  const std::size_t tmask = qubit_mask(num_qubits, g.target);
  std::size_t cmask = 0;
  std::size_t cval = 0;
  for (const auto& c : g.controls) {
    const std::size_t m = qubit_mask(num_qubits, c.qubit);
    cmask |= m;
    if (c.on_one) cval |= m;
  }
  const std::size_t dim = dimension_of(num_qubits);
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & tmask) != 0 || (i & cmask) != cval) continue;
    const auto i0 = static_cast<Eigen::Index>(i);
    const auto i1 = static_cast<Eigen::Index>(i | tmask);
    const Complex a0 = amps[i0];
    const Complex a1 = amps[i1];
    amps[i0] = u[0] * a0 + u[1] * a1;
    amps[i1] = u[2] * a0 + u[3] * a1;
  }
}

/// Index of the bits of `full` at `qubits` (first = most significant).
inline std::size_t gather_bits(std::size_t full, int num_qubits, std::span<const int> qubits) {
  std::size_t out = 0;
  for (int q : qubits) out = (out << 1) | ((full & qubit_mask(num_qubits, q)) ? 1u : 0u);
  return out;
}

inline void inject(CVector& amps, int num_qubits, const std::vector<int>& qubits, const CVector& values) {
  if (std::abs(values.squaredNorm() - 1.0) > validation_epsilon()) {
    throw ArgumentError("inject_state: amplitudes are not normalized");
  }
  std::size_t rmask = 0;
  for (int q : qubits) rmask |= qubit_mask(num_qubits, q);
  double leaked = 0.0;
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    if ((static_cast<std::size_t>(i) & rmask) != 0) leaked += std::norm(amps[i]);
  }
  if (leaked > validation_epsilon()) {
    throw ArgumentError("inject_state: target register is not in |0...0>");
  }
  CVector out = CVector::Zero(amps.size());
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Complex base = amps[static_cast<Eigen::Index>(ui & ~rmask)];
    if (base == Complex(0.0)) continue;
    out[i] = base * values[static_cast<Eigen::Index>(gather_bits(ui, num_qubits, qubits))];
  }
  amps = std::move(out);
}

}  // namespace detail

inline StateVector inject_state(const StateVector& state, const std::vector<int>& qubits, const CVector& amplitudes) {
  Circuit(state.num_qubits()).add(Injection{qubits, amplitudes});  // index validation
  CVector amps = state.amplitudes();
  detail::inject(amps, state.num_qubits(), qubits, amplitudes);
  return evolve_unchecked(state.num_qubits(), std::move(amps));
}

inline StateVector apply_circuit(const StateVector& state, const Circuit& circuit) {
  if (state.num_qubits() != circuit.num_qubits()) {
    throw ArgumentError("apply_circuit: state has " + std::to_string(state.num_qubits()) +
                        " qubits, circuit has " + std::to_string(circuit.num_qubits()));
  }
  CVector amps = state.amplitudes();
  const int n = state.num_qubits();
  for (const auto& op : circuit.ops()) {
    if (const auto* g = std::get_if<GateOp>(&op)) {
      detail::apply_gate(amps, n, *g);
    } else {
      const auto& inj = std::get<Injection>(op);
      detail::inject(amps, n, inj.qubits, inj.amplitudes);
    }
  }
  return evolve_unchecked(n, std::move(amps));
}

/// Dense unitary of a gate-only circuit (column k = image of |k>).
inline CMatrix circuit_unitary(const Circuit& circuit) {
  const int n = circuit.num_qubits();
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  CMatrix u(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    u.col(k) = apply_circuit(basis_state(n, static_cast<std::size_t>(k)), circuit).amplitudes();
  }
  return u;
}

namespace detail {

inline void check_keep(int num_qubits, const std::vector<int>& keep) {
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= num_qubits) throw ArgumentError("partial_trace: qubit index out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (keep[i] == keep[j]) throw ArgumentError("partial_trace: repeated qubit index");
    }
  }
}

/// Full indices of the traced-out subsystem, enumerated in ascending order.
inline std::vector<std::size_t> complement_offsets(int num_qubits, std::size_t keep_mask) {
  std::vector<std::size_t> out;
  const std::size_t dim = dimension_of(num_qubits);
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & keep_mask) == 0) out.push_back(i);
  }
  return out;
}

inline std::vector<std::size_t> keep_offsets(int num_qubits, const std::vector<int>& keep) {
  std::vector<std::size_t> out(dimension_of(static_cast<int>(keep.size())), 0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::size_t full = 0;
    for (std::size_t b = 0; b < keep.size(); ++b) {
      if ((k >> (keep.size() - 1 - b)) & 1u) full |= qubit_mask(num_qubits, keep[b]);
    }
    out[k] = full;
  }
  return out;
}

}  // namespace detail

/// Reduced state on `keep` (result qubit i = keep[i]).
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.num_qubits();
  detail::check_keep(n, keep);
  const auto kept = detail::keep_offsets(n, keep);
  std::size_t kmask = 0;
  for (int q : keep) kmask |= qubit_mask(n, q);
  const auto rest = detail::complement_offsets(n, kmask);
  const auto dk = static_cast<Eigen::Index>(kept.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  const CMatrix& m = rho.matrix();
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (std::size_t r : rest) {
        acc += m(static_cast<Eigen::Index>(kept[static_cast<std::size_t>(a)] | r),
                 static_cast<Eigen::Index>(kept[static_cast<std::size_t>(b)] | r));
      }
      out(a, b) = acc;
    }
  }
  return DensityMatrix::trusted(static_cast<int>(keep.size()), std::move(out));
}

/// partial_trace(|psi><psi|, keep) without forming the full density matrix.
inline DensityMatrix reduced_state(const StateVector& psi, const std::vector<int>& keep) {
  const int n = psi.num_qubits();
  detail::check_keep(n, keep);
  const auto kept = detail::keep_offsets(n, keep);
  std::size_t kmask = 0;
  for (int q : keep) kmask |= qubit_mask(n, q);
  const auto rest = detail::complement_offsets(n, kmask);
  const auto dk = static_cast<Eigen::Index>(kept.size());
  const auto dr = static_cast<Eigen::Index>(rest.size());
  CMatrix block(dk, dr);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index r = 0; r < dr; ++r) {
      block(a, r) = psi[kept[static_cast<std::size_t>(a)] | rest[static_cast<std::size_t>(r)]];
    }
  }
  return DensityMatrix::trusted(static_cast<int>(keep.size()), block * block.adjoint());
}

/// <psi|rho|psi>, real part.
inline double fidelity_pure(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.num_qubits() != psi.num_qubits()) {
    throw ArgumentError("fidelity_pure: dimension mismatch");
  }
  return psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real();
}

}  // namespace pauli_cloner
