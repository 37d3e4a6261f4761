// Niu-Griffiths (NG) and QID cloning circuits, end-to-end fidelity evaluation,
// and the quadratic-form fast path used by the optimizers.
//
// Register layout for an N-qubit cloner on 3N qubits:
//   reg0 = 0..N-1     Alice's input, Bob's output
//   reg1 = N..2N-1    Eve's output
//   reg2 = 2N..3N-1   ancilla
// The program occupies reg1 and reg2 (reg1 most significant).
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pauli_cloner/mub.hpp"
#include "pauli_cloner/noise.hpp"
#include "pauli_cloner/simcore.hpp"

namespace pauli_cloner {

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

/// Program state for an N-qubit cloner: 4^N amplitudes on 2N qubits.
class SoftwareState {
 public:
  explicit SoftwareState(CVector amplitudes) : amps_(std::move(amplitudes)) {
    const auto len = static_cast<std::size_t>(amps_.size());
    int n = 0;
    while ((std::size_t{1} << (2 * n)) < len) ++n;
    if (n < 1 || (std::size_t{1} << (2 * n)) != len) {
      throw ArgumentError("SoftwareState: length must be 4^N with N >= 1");
    }
    if (std::abs(amps_.squaredNorm() - 1.0) > 1e-9) throw ArgumentError("SoftwareState: amplitudes are not normalized");
    n_ = n;
  }

  static SoftwareState from_real(const std::vector<double>& a) {
    CVector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i];
    return SoftwareState(std::move(v));
  }

  /// Moduli and phases, e.g. (a,b,c,d) and (alpha,beta,gamma,delta).
  static SoftwareState from_polar(const std::vector<double>& moduli, const std::vector<double>& phases) {
    if (moduli.size() != phases.size()) throw ArgumentError("SoftwareState: moduli/phases length mismatch");
    CVector v(static_cast<Eigen::Index>(moduli.size()));
    for (std::size_t i = 0; i < moduli.size(); ++i) v[static_cast<Eigen::Index>(i)] = std::polar(moduli[i], phases[i]);
    return SoftwareState(std::move(v));
  }

  int num_qubits() const { return n_; }
  int num_register_qubits() const { return 2 * n_; }
  std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

  bool is_real(double tol = 1e-12) const {
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i].imag()) > tol) return false;
    }
    return true;
  }

  std::vector<double> real_amplitudes() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = amps_[static_cast<Eigen::Index>(i)].real();
    return out;
  }

 private:
  CVector amps_;
  int n_ = 0;
};

struct NgAngles {
  double rho = 0.0;
  double phi = 0.0;
  double theta = 0.0;
};

enum class ClonerKind { NG, QID };

inline std::string to_string(ClonerKind k) { return k == ClonerKind::NG ? "ng" : "qid"; }

/// (cos th cos rho, cos phi sin rho, sin th cos rho, sin phi sin rho)
inline SoftwareState ng_angles_to_program(const NgAngles& a) {
  return SoftwareState::from_real({std::cos(a.theta) * std::cos(a.rho), std::cos(a.phi) * std::sin(a.rho),
                                   std::sin(a.theta) * std::cos(a.rho), std::sin(a.phi) * std::sin(a.rho)});
}

/// The three-rotation program preparation on (hi, lo): RY(2 rho) on lo, then
/// RY(2 phi) on hi if lo = 1 and RY(2 theta) on hi if lo = 0.
inline Circuit ng_software_block(const NgAngles& a, int num_qubits = 3, int hi = 1, int lo = 2) {
  Circuit c(num_qubits);
  c.add(gate::ry(lo, 2.0 * a.rho));
  c.add(gate::cry(lo, hi, 2.0 * a.phi, true));
  c.add(gate::cry(lo, hi, 2.0 * a.theta, false));
  return c;
}

// ---------------------------------------------------------------------------
// Hardware
// ---------------------------------------------------------------------------

inline Circuit ng_hardware(int n) {
  if (n < 1) throw ArgumentError("ng_hardware: N must be >= 1");
  Circuit c(3 * n);
  for (int i = 0; i < n; ++i) c.add(gate::h(n + i));
  for (int i = 0; i < n; ++i) c.add(gate::cnot(i, n + i));
  for (int i = 0; i < n; ++i) c.add(gate::cnot(2 * n + i, i));
  for (int i = 0; i < n; ++i) c.add(gate::cnot(n + i, 2 * n + i));
  return c;
}

inline Circuit qid_hardware(int n) {
  Circuit c(3 * n);
  if (n == 1) {
    c.add(gate::cnot(0, 1)).add(gate::cnot(0, 2)).add(gate::cnot(1, 0)).add(gate::cnot(2, 0));
  } else if (n == 2) {
    // SUM A -> E1
    c.add(gate::cnot(1, 3)).add(gate::ccnot(0, 2, 3)).add(gate::cnot(0, 2));
    // SUM A -> E2
    c.add(gate::cnot(1, 5)).add(gate::ccnot(0, 4, 5)).add(gate::cnot(0, 4));
    // inverse shift E1 -> A, conjugated by X on A
    c.add(gate::x(0)).add(gate::x(1));
    c.add(gate::cnot(3, 1)).add(gate::ccnot(0, 2, 1)).add(gate::cnot(2, 0));
    c.add(gate::x(0)).add(gate::x(1));
    // SUM E2 -> A
    c.add(gate::cnot(5, 1)).add(gate::ccnot(0, 4, 1)).add(gate::cnot(4, 0));
  } else {
    throw UnsupportedError("QID cloner is only built for N = 1 and N = 2");
  }
  return c;
}

inline Circuit cloner_hardware(ClonerKind kind, int n) { return kind == ClonerKind::NG ? ng_hardware(n) : qid_hardware(n); }

inline std::vector<int> program_register(int n) {
  std::vector<int> r;
  for (int q = n; q < 3 * n; ++q) r.push_back(q);
  return r;
}

inline std::vector<int> bob_register(int n) {
  std::vector<int> r;
  for (int q = 0; q < n; ++q) r.push_back(q);
  return r;
}

inline std::vector<int> eve_register(int n) {
  std::vector<int> r;
  for (int q = n; q < 2 * n; ++q) r.push_back(q);
  return r;
}

namespace detail {
inline Circuit with_program(int n, const SoftwareState& program, const Circuit& hw, const char* who) {
  if (program.num_qubits() != n) {
    throw ArgumentError(std::string(who) + ": program length " + std::to_string(program.size()) +
                        " does not match 4^N for N = " + std::to_string(n));
  }
  Circuit c(3 * n);
  c.add(Injection{program_register(n), program.amplitudes()});
  c.append(hw);
  return c;
}
}  // namespace detail

inline Circuit build_ng(int n, const SoftwareState& program) {
  return detail::with_program(n, program, ng_hardware(n), "build_ng");
}

inline Circuit build_qid_1q(const SoftwareState& program) {
  return detail::with_program(1, program, qid_hardware(1), "build_qid_1q");
}

inline Circuit build_qid_2q(const SoftwareState& program) {
  return detail::with_program(2, program, qid_hardware(2), "build_qid_2q");
}

inline Circuit build_cloner(ClonerKind kind, int n, const SoftwareState& program) {
  if (kind == ClonerKind::NG) return build_ng(n, program);
  if (n == 1) return build_qid_1q(program);
  if (n == 2) return build_qid_2q(program);
  throw UnsupportedError("QID cloner is only built for N = 1 and N = 2");
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct BasisFidelity {
  std::string label;
  std::vector<double> bob;  // per state
  std::vector<double> eve;
  double bob_avg = 0.0;
  double eve_avg = 0.0;

  void finalize() {
    bob_avg = eve_avg = 0.0;
    for (double v : bob) bob_avg += v;
    for (double v : eve) eve_avg += v;
    bob_avg /= static_cast<double>(bob.size());
    eve_avg /= static_cast<double>(eve.size());
  }
};

struct FidelityReport {
  std::vector<BasisFidelity> bases;

  const BasisFidelity& basis(const std::string& label) const {
    for (const auto& b : bases) {
      if (b.label == label) return b;
    }
    throw ArgumentError("FidelityReport: no basis '" + label + "'");
  }
  bool has(const std::string& label) const {
    for (const auto& b : bases) {
      if (b.label == label) return true;
    }
    return false;
  }
  double bob(const std::string& label) const { return basis(label).bob_avg; }
  double eve(const std::string& label) const { return basis(label).eve_avg; }

  double bob_avg() const {
    double s = 0.0;
    for (const auto& b : bases) s += b.bob_avg;
    return s / static_cast<double>(bases.size());
  }
  double eve_avg() const {
    double s = 0.0;
    for (const auto& b : bases) s += b.eve_avg;
    return s / static_cast<double>(bases.size());
  }

  void add_uniform(const std::string& label, int states, double bob, double eve) {
    BasisFidelity b{label, std::vector<double>(static_cast<std::size_t>(states), bob),
                    std::vector<double>(static_cast<std::size_t>(states), eve)};
    b.finalize();
    bases.push_back(std::move(b));
  }
};

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

/// Bob and Eve fidelities for one pure input |m>, noise applied to reg0
/// before the cloner hardware, Kraus branches mixed with their weights.
inline std::pair<double, double> clone_state_fidelities(ClonerKind kind, int n, const SoftwareState& program,
                                                        const PauliChannel& channel, const StateVector& m) {
  if (m.num_qubits() != n || channel.num_qubits() != n) {
    throw ArgumentError("clone_state_fidelities: inconsistent qubit counts");
  }
  const Circuit cloner = build_cloner(kind, n, program);
  const auto bob = bob_register(n);
  const auto eve = eve_register(n);
  const StateVector blank = basis_state(2 * n, 0);
  double fb = 0.0, fe = 0.0;
  for (const auto& [p, w] : channel.terms()) {
    const StateVector out = apply_circuit(p.apply(m).tensor(blank), cloner);
    fb += w * fidelity_pure(reduced_state(out, bob), m);
    fe += w * fidelity_pure(reduced_state(out, eve), m);
  }
  return {fb, fe};
}

inline FidelityReport clone_fidelities(ClonerKind kind, int n, const SoftwareState& program,
                                       const PauliChannel& channel, const std::vector<MubBasis>& bases) {
  if (program.num_qubits() != n) throw ArgumentError("clone_fidelities: program does not match N");
  if (channel.num_qubits() != n) throw ArgumentError("clone_fidelities: channel does not match N");
  FidelityReport r;
  for (const auto& b : bases) {
    if (b.num_qubits() != n) throw ArgumentError("clone_fidelities: basis " + b.label + " does not match N");
    BasisFidelity bf{b.label, {}, {}};
    for (const auto& m : b.states) {
      const auto [fb, fe] = clone_state_fidelities(kind, n, program, channel, m);
      bf.bob.push_back(fb);
      bf.eve.push_back(fe);
    }
    bf.finalize();
    r.bases.push_back(std::move(bf));
  }
  return r;
}

inline FidelityReport clone_fidelities(ClonerKind kind, int n, const SoftwareState& program,
                                       const PauliChannel& channel) {
  return clone_fidelities(kind, n, program, channel, mubs_for(n).bases);
}

/// Two-qubit circuit, Alice on qubit 0 with ancilla |0> on qubit 1; inputs
/// |0> and |+>. Returns (F_AB, F_AE).
inline std::pair<double, double> b92_fidelities(const Circuit& circuit) {
  if (circuit.num_qubits() != 2) throw ArgumentError("b92_fidelities: circuit must act on 2 qubits");
  const auto one = single_qubit_mubs();
  const StateVector blank = basis_state(1, 0);
  double fb = 0.0, fe = 0.0;
  for (const auto* s : {&one.basis("Z").states[0], &one.basis("X").states[0]}) {
    const StateVector out = apply_circuit(s->tensor(blank), circuit);
    fb += 0.5 * fidelity_pure(reduced_state(out, {0}), *s);
    fe += 0.5 * fidelity_pure(reduced_state(out, {1}), *s);
  }
  return {fb, fe};
}

/// Named group of probe states; a group's fidelity is the mean over its states.
struct ProbeGroup {
  std::string label;
  std::vector<StateVector> states;
};

inline std::vector<ProbeGroup> probe_groups(const std::vector<MubBasis>& bases) {
  std::vector<ProbeGroup> g;
  for (const auto& b : bases) g.push_back({b.label, b.states});
  return g;
}

/// B92 probes for a cloner: groups "0" = {|0>} and "+" = {|+>}.
inline std::vector<ProbeGroup> b92_probe_groups() {
  const auto one = single_qubit_mubs();
  return {{"0", {one.basis("Z").states[0]}}, {"+", {one.basis("X").states[0]}}};
}

// ---------------------------------------------------------------------------
// Quadratic forms
// ---------------------------------------------------------------------------

namespace detail {
/// (<m| on `qubits`) applied to a full state vector; result indexed by the
/// remaining qubits in ascending order.
inline CVector contract(const CVector& full, int n, const std::vector<int>& qubits, const CVector& m) {
  const auto kept = keep_offsets(n, qubits);
  std::size_t mask = 0;
  for (int q : qubits) mask |= qubit_mask(n, q);
  const auto rest = complement_offsets(n, mask);
  CVector out = CVector::Zero(static_cast<Eigen::Index>(rest.size()));
  for (std::size_t r = 0; r < rest.size(); ++r) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      acc += std::conj(m[static_cast<Eigen::Index>(k)]) * full[static_cast<Eigen::Index>(kept[k] | rest[r])];
    }
    out[static_cast<Eigen::Index>(r)] = acc;
  }
  return out;
}
}  // namespace detail

/// For fixed hardware, channel and probe groups, every fidelity is a
/// Hermitian form in the program amplitudes: F = psi^dagger M psi.
struct FidelityForms {
  int num_qubits = 0;
  std::vector<std::string> labels;
  std::vector<CMatrix> bob;
  std::vector<CMatrix> eve;

  static double value(const CMatrix& m, const CVector& psi) { return psi.dot(m * psi).real(); }

  FidelityReport evaluate(const CVector& psi) const {
    if (static_cast<std::size_t>(psi.size()) != dimension_of(2 * num_qubits)) {
      throw ArgumentError("FidelityForms: program length mismatch");
    }
    FidelityReport r;
    for (std::size_t g = 0; g < labels.size(); ++g) r.add_uniform(labels[g], 1, value(bob[g], psi), value(eve[g], psi));
    return r;
  }
  FidelityReport evaluate(const SoftwareState& s) const { return evaluate(s.amplitudes()); }

  CMatrix bob_average() const { return average(bob); }
  CMatrix eve_average() const { return average(eve); }

 private:
  static CMatrix average(const std::vector<CMatrix>& ms) {
    CMatrix acc = CMatrix::Zero(ms.front().rows(), ms.front().cols());
    for (const auto& m : ms) acc += m;
    return acc / static_cast<double>(ms.size());
  }
};

inline FidelityForms fidelity_forms(ClonerKind kind, int n, const PauliChannel& channel,
                                    const std::vector<ProbeGroup>& groups) {
  if (channel.num_qubits() != n) throw ArgumentError("fidelity_forms: channel does not match N");
  if (groups.empty()) throw ArgumentError("fidelity_forms: no probe groups");
  const Circuit hw = cloner_hardware(kind, n);
  const int total = 3 * n;
  const auto dp = static_cast<Eigen::Index>(dimension_of(2 * n));
  const auto bob = bob_register(n);
  const auto eve = eve_register(n);
  FidelityForms f;
  f.num_qubits = n;
  for (const auto& g : groups) {
    CMatrix mb = CMatrix::Zero(dp, dp), me = CMatrix::Zero(dp, dp);
    for (const auto& m : g.states) {
      if (m.num_qubits() != n) throw ArgumentError("fidelity_forms: probe state does not match N");
      for (const auto& [p, w] : channel.terms()) {
        const StateVector in = p.apply(m);
        std::vector<CVector> vb, ve;
        for (Eigen::Index k = 0; k < dp; ++k) {
          const StateVector out = apply_circuit(in.tensor(basis_state(2 * n, static_cast<std::size_t>(k))), hw);
          vb.push_back(detail::contract(out.amplitudes(), total, bob, m.amplitudes()));
          ve.push_back(detail::contract(out.amplitudes(), total, eve, m.amplitudes()));
        }
        const double wk = w / static_cast<double>(g.states.size());
        for (Eigen::Index k = 0; k < dp; ++k) {
          for (Eigen::Index l = 0; l < dp; ++l) {
            mb(k, l) += wk * vb[static_cast<std::size_t>(k)].dot(vb[static_cast<std::size_t>(l)]);
            me(k, l) += wk * ve[static_cast<std::size_t>(k)].dot(ve[static_cast<std::size_t>(l)]);
          }
        }
      }
    }
    f.labels.push_back(g.label);
    f.bob.push_back(std::move(mb));
    f.eve.push_back(std::move(me));
  }
  return f;
}

inline FidelityForms fidelity_forms(ClonerKind kind, int n, const PauliChannel& channel,
                                    const std::vector<MubBasis>& bases) {
  return fidelity_forms(kind, n, channel, probe_groups(bases));
}

// ---------------------------------------------------------------------------
// Induced channel on Bob
// ---------------------------------------------------------------------------

/// Pauli transfer matrix R_ij = Tr(P_i L(P_j)) / d of the channel L the
/// cloner applies to Bob's register (Eve and ancilla traced out). Rows and
/// columns follow all_pauli_strings(N).
inline CMatrix bob_transfer_matrix(ClonerKind kind, int n, const SoftwareState& program) {
  const Circuit cloner = build_cloner(kind, n, program);
  const auto d = static_cast<Eigen::Index>(dimension_of(n));
  const StateVector blank = basis_state(2 * n, 0);
  std::size_t kmask = 0;
  for (int q = 0; q < n; ++q) kmask |= qubit_mask(3 * n, q);
  const auto rest = detail::complement_offsets(3 * n, kmask);
  const auto kept = detail::keep_offsets(3 * n, bob_register(n));
  // out[a] as a d x |rest| block
  std::vector<CMatrix> blocks;
  for (Eigen::Index a = 0; a < d; ++a) {
    const StateVector out = apply_circuit(basis_state(n, static_cast<std::size_t>(a)).tensor(blank), cloner);
    CMatrix blk(d, static_cast<Eigen::Index>(rest.size()));
    for (Eigen::Index i = 0; i < d; ++i) {
      for (std::size_t r = 0; r < rest.size(); ++r) {
        blk(i, static_cast<Eigen::Index>(r)) = out[kept[static_cast<std::size_t>(i)] | rest[r]];
      }
    }
    blocks.push_back(std::move(blk));
  }
  // L(|a><b|) = blocks[a] blocks[b]^dagger
  const auto paulis = all_pauli_strings(n);
  const auto np = static_cast<Eigen::Index>(paulis.size());
  CMatrix R = CMatrix::Zero(np, np);
  for (Eigen::Index j = 0; j < np; ++j) {
    const CMatrix pj = paulis[static_cast<std::size_t>(j)].matrix();
    CMatrix image = CMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        if (pj(a, b) == Complex(0.0)) continue;
        image += pj(a, b) * blocks[static_cast<std::size_t>(a)] * blocks[static_cast<std::size_t>(b)].adjoint();
      }
    }
    for (Eigen::Index i = 0; i < np; ++i) {
      R(i, j) = (paulis[static_cast<std::size_t>(i)].matrix() * image).trace() / static_cast<double>(d);
    }
  }
  return R;
}

}  // namespace pauli_cloner
