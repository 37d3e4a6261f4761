// Pauli strings, mutually unbiased bases for one and two qubits, and the
// stabilizer (commuting-class) structure that ties them together.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "pauli_cloner/simcore.hpp"

namespace pauli_cloner {

// ---------------------------------------------------------------------------
// PauliString
// ---------------------------------------------------------------------------

/// Tensor product of I/X/Y/Z; letter i acts on qubit i.
class PauliString {
 public:
  explicit PauliString(std::string letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw ArgumentError("PauliString: empty string");
    for (char& c : letters_) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw ArgumentError("PauliString: invalid letter in '" + letters_ + "'");
      }
    }
  }

  static PauliString identity(int n) { return PauliString(std::string(static_cast<std::size_t>(n), 'I')); }

  /// From symplectic bits: bit (n-1-i) of `z` / `x` belongs to qubit i.
  static PauliString from_symplectic(int n, std::uint32_t z, std::uint32_t x) {
    std::string s(static_cast<std::size_t>(n), 'I');
    for (int q = 0; q < n; ++q) {
      const bool zb = (z >> (n - 1 - q)) & 1u;
      const bool xb = (x >> (n - 1 - q)) & 1u;
      s[static_cast<std::size_t>(q)] = zb ? (xb ? 'Y' : 'Z') : (xb ? 'X' : 'I');
    }
    return PauliString(s);
  }

  /// Program-register index j = (z bits | x bits), z bits most significant.
  /// This is the map between software amplitudes a_j and the Pauli error the
  /// NG cloner applies to Alice's register.
  static PauliString from_program_index(int n, std::uint32_t j) {
    const std::uint32_t mask = (1u << n) - 1u;
    return from_symplectic(n, (j >> n) & mask, j & mask);
  }

  int size() const { return static_cast<int>(letters_.size()); }
  const std::string& letters() const { return letters_; }
  char operator[](int q) const { return letters_[static_cast<std::size_t>(q)]; }
  bool is_identity() const { return letters_.find_first_not_of('I') == std::string::npos; }

  std::uint32_t z_bits() const { return bits('Z'); }
  std::uint32_t x_bits() const { return bits('X'); }
  /// (z|x) packed with z in the high half; identity encodes as 0.
  std::uint32_t symplectic() const { return (z_bits() << size()) | x_bits(); }
  std::uint32_t program_index() const { return symplectic(); }

  bool commutes_with(const PauliString& o) const {
    check_same_size(o);
    return std::popcount((z_bits() & o.x_bits()) ^ (x_bits() & o.z_bits())) % 2 == 0;
  }

  /// Product up to phase.
  PauliString operator*(const PauliString& o) const {
    check_same_size(o);
    return from_symplectic(size(), z_bits() ^ o.z_bits(), x_bits() ^ o.x_bits());
  }

  CMatrix matrix() const {
    CMatrix m = CMatrix::Identity(1, 1);
    for (char c : letters_) m = kron(m, letter_matrix(c));
    return m;
  }

  StateVector apply(const StateVector& psi) const {
    if (psi.num_qubits() != size()) throw ArgumentError("PauliString::apply: qubit-count mismatch");
    Circuit c(size());
    for (int q = 0; q < size(); ++q) {
      switch ((*this)[q]) {
        case 'X': c.add(gate::x(q)); break;
        case 'Y': c.add(gate::y(q)); break;
        case 'Z': c.add(gate::z(q)); break;
        default: break;
      }
    }
    return apply_circuit(psi, c);
  }

  static CMatrix letter_matrix(char c) {
    using namespace std::complex_literals;
    CMatrix m(2, 2);
    switch (c) {
      case 'X': m << 0.0, 1.0, 1.0, 0.0; break;
      case 'Y': m << 0.0, -1i, 1i, 0.0; break;
      case 'Z': m << 1.0, 0.0, 0.0, -1.0; break;
      default: m << 1.0, 0.0, 0.0, 1.0; break;
    }
    return m;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString& a, const PauliString& b) { return a.letters_ <=> b.letters_; }

 private:
  std::uint32_t bits(char which) const {
    std::uint32_t out = 0;
    for (char c : letters_) out = (out << 1) | ((c == which || c == 'Y') ? 1u : 0u);
    return out;
  }

  void check_same_size(const PauliString& o) const {
    if (o.size() != size()) throw ArgumentError("PauliString: length mismatch");
  }

  std::string letters_;
};

/// All 4^n Pauli strings ordered by symplectic code (identity first).
inline std::vector<PauliString> all_pauli_strings(int n) {
  std::vector<PauliString> out;
  const std::uint32_t count = 1u << (2 * n);
  out.reserve(count);
  for (std::uint32_t j = 0; j < count; ++j) out.push_back(PauliString::from_program_index(n, j));
  return out;
}

// ---------------------------------------------------------------------------
// Bases
// ---------------------------------------------------------------------------

struct MubBasis {
  std::string label;
  std::vector<StateVector> states;

  int num_qubits() const { return states.front().num_qubits(); }
};

struct MubSet {
  int num_qubits = 0;
  std::vector<MubBasis> bases;

  const MubBasis& basis(const std::string& label) const {
    for (const auto& b : bases) {
      if (b.label == label) return b;
    }
    throw ArgumentError("MubSet: no basis labelled '" + label + "'");
  }
};

namespace detail {
inline StateVector make_state(int n, std::initializer_list<Complex> amps, double scale) {
  CVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (Complex a : amps) v[i++] = a * scale;
  return StateVector(n, std::move(v));
}
}  // namespace detail

/// Z = {|0>,|1>}, X = {|+>,|->}, Y = {|+i>,|-i>}, in that order.
inline MubSet single_qubit_mubs() {
  using namespace std::complex_literals;
  const double r = 1.0 / std::numbers::sqrt2;
  using detail::make_state;
  return MubSet{1,
                {{"Z", {make_state(1, {1.0, 0.0}, 1.0), make_state(1, {0.0, 1.0}, 1.0)}},
                 {"X", {make_state(1, {1.0, 1.0}, r), make_state(1, {1.0, -1.0}, r)}},
                 {"Y", {make_state(1, {1.0, 1i}, r), make_state(1, {1.0, -1i}, r)}}}};
}

/// The five two-qubit bases M0..M4, states in the canonical column order.
inline MubSet two_qubit_mubs() {
  using namespace std::complex_literals;
  using detail::make_state;
  const Complex i = 1i;
  return MubSet{
      2,
      {{"M0",
        {make_state(2, {1.0, 0.0, 0.0, 0.0}, 1.0), make_state(2, {0.0, 1.0, 0.0, 0.0}, 1.0),
         make_state(2, {0.0, 0.0, 1.0, 0.0}, 1.0), make_state(2, {0.0, 0.0, 0.0, 1.0}, 1.0)}},
       {"M1",
        {make_state(2, {1.0, 1.0, 1.0, 1.0}, 0.5), make_state(2, {1.0, -1.0, 1.0, -1.0}, 0.5),
         make_state(2, {1.0, 1.0, -1.0, -1.0}, 0.5), make_state(2, {1.0, -1.0, -1.0, 1.0}, 0.5)}},
       {"M2",
        {make_state(2, {1.0, -1.0, i, i}, 0.5), make_state(2, {1.0, 1.0, i, -i}, 0.5),
         make_state(2, {1.0, 1.0, -i, i}, 0.5), make_state(2, {1.0, -1.0, -i, -i}, 0.5)}},
       {"M3",
        {make_state(2, {1.0, i, i, -1.0}, 0.5), make_state(2, {1.0, -i, i, 1.0}, 0.5),
         make_state(2, {1.0, i, -i, 1.0}, 0.5), make_state(2, {1.0, -i, -i, -1.0}, 0.5)}},
       {"M4",
        {make_state(2, {1.0, -i, -1.0, -i}, 0.5), make_state(2, {1.0, i, 1.0, -i}, 0.5),
         make_state(2, {1.0, -i, 1.0, i}, 0.5), make_state(2, {1.0, i, -1.0, i}, 0.5)}}}};
}

inline MubSet mubs_for(int num_qubits) {
  if (num_qubits == 1) return single_qubit_mubs();
  if (num_qubits == 2) return two_qubit_mubs();
  throw UnsupportedError("MUB states are only constructed for 1 and 2 qubits");
}

/// Circuit taking |k> to state k of M_i (up to a global phase per state).
inline Circuit mub_prep_circuit(int basis_index) {
  if (basis_index < 0 || basis_index > 4) throw ArgumentError("mub_prep_circuit: basis index must be 0..4");
  Circuit c(2);
  if (basis_index == 0) return c;
  c.add(gate::h(0)).add(gate::h(1));
  if (basis_index == 1) return c;
  c.add(gate::s(0)).add(gate::s(1));
  if (basis_index == 2) c.add(gate::cnot(1, 0));
  if (basis_index == 4) c.add(gate::z(0)).add(gate::z(1)).add(gate::cnot(0, 1));
  return c;
}

// ---------------------------------------------------------------------------
// Pauli action on a basis
// ---------------------------------------------------------------------------

struct PauliAction {
  enum class Kind { Invariant, Permutation };
  Kind kind = Kind::Invariant;
  std::vector<int> permutation;  // image index of each state; identity when Invariant
  std::vector<Complex> phases;   // P|s_k> = phases[k] |s_{permutation[k]}>

  bool is_invariant() const { return kind == Kind::Invariant; }
};

inline PauliAction pauli_action(const PauliString& p, const MubBasis& basis) {
  if (basis.states.empty() || p.size() != basis.num_qubits()) {
    throw ArgumentError("pauli_action: Pauli length does not match basis");
  }
  PauliAction out;
  bool moved = false;
  for (std::size_t k = 0; k < basis.states.size(); ++k) {
    const StateVector image = p.apply(basis.states[k]);
    int found = -1;
    Complex phase = 0.0;
    for (std::size_t j = 0; j < basis.states.size(); ++j) {
      const Complex ov = basis.states[j].inner(image);
      if (std::abs(std::abs(ov) - 1.0) < 1e-9) {
        found = static_cast<int>(j);
        phase = ov;
        break;
      }
    }
    if (found < 0) {
      throw ClassificationError("pauli_action: " + p.letters() + " maps a state of " + basis.label +
                                " outside the basis");
    }
    moved = moved || found != static_cast<int>(k);
    out.permutation.push_back(found);
    out.phases.push_back(phase);
  }
  out.kind = moved ? PauliAction::Kind::Permutation : PauliAction::Kind::Invariant;
  return out;
}

/// 0 = invariant, 1 = permuted. Rows are error groups, columns are bases.
struct ActionTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<std::vector<int>> cells;
};

/// Error groups in the canonical row order of the two-qubit table.
inline std::vector<std::vector<PauliString>> two_qubit_error_groups() {
  auto g = [](std::initializer_list<const char*> l) {
    std::vector<PauliString> v;
    for (const char* s : l) v.emplace_back(s);
    return v;
  };
  return {g({"XX", "IX", "XI"}), g({"XZ", "YX", "ZY"}), g({"ZX", "XY", "YZ"}), g({"ZZ", "IZ", "ZI"}),
          g({"YY", "IY", "YI"})};
}

inline ActionTable action_table(int n) {
  ActionTable t;
  std::vector<std::vector<PauliString>> groups;
  std::vector<const MubBasis*> cols;
  MubSet set;
  if (n == 1) {
    set = single_qubit_mubs();
    groups = {{PauliString("X")}, {PauliString("Y")}, {PauliString("Z")}};
    for (const char* l : {"X", "Y", "Z"}) cols.push_back(&set.basis(l));
  } else if (n == 2) {
    set = two_qubit_mubs();
    groups = two_qubit_error_groups();
    for (const auto& b : set.bases) cols.push_back(&b);
  } else {
    throw ArgumentError("action_table: N must be 1 or 2");
  }
  for (const auto* b : cols) t.column_labels.push_back(b->label);
  for (const auto& group : groups) {
    std::string label;
    std::vector<int> row;
    for (const auto* b : cols) {
      int cell = -1;
      for (const auto& p : group) {
        const int v = pauli_action(p, *b).is_invariant() ? 0 : 1;
        if (cell >= 0 && cell != v) {
          throw ClassificationError("action_table: group members disagree on basis " + b->label);
        }
        cell = v;
      }
      row.push_back(cell);
    }
    for (const auto& p : group) label += (label.empty() ? "" : ",") + p.letters();
    t.row_labels.push_back(label);
    t.cells.push_back(row);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Maximally commuting classes
// ---------------------------------------------------------------------------

/// Partition of the 4^N - 1 non-identity Paulis into 2^N + 1 classes, each of
/// which together with the identity is an abelian group isomorphic to Z_2^N.
/// Found by backtracking over symplectic codes; the smallest unassigned code
/// is always placed first and candidates are tried in ascending order.
inline std::vector<std::vector<PauliString>> commuting_classes(int n) {
  if (n < 1) throw ArgumentError("commuting_classes: N must be >= 1");
  if (n > 3) throw UnsupportedError("commuting_classes: N > 3 is not supported");
  const std::uint32_t total = 1u << (2 * n);
  const std::uint32_t group_size = 1u << n;
  const std::uint32_t half = (1u << n) - 1u;
  auto commute = [&](std::uint32_t a, std::uint32_t b) {
    const std::uint32_t za = a >> n, xa = a & half, zb = b >> n, xb = b & half;
    return std::popcount((za & xb) ^ (xa & zb)) % 2 == 0;
  };

  std::vector<bool> used(total, false);
  used[0] = true;
  std::vector<std::vector<std::uint32_t>> classes;

  std::function<bool()> place;
  std::function<bool(std::vector<std::uint32_t>&, std::uint32_t)> grow;

  // Extend the subspace `span` (closed under XOR) with generators >= `from`.
  grow = [&](std::vector<std::uint32_t>& span, std::uint32_t from) -> bool {
    if (span.size() == group_size) {
      for (auto v : span) used[v] = true;
      classes.push_back(span);
      if (place()) return true;
      classes.pop_back();
      for (auto v : span) {
        if (v != 0) used[v] = false;
      }
      return false;
    }
    for (std::uint32_t c = from; c < total; ++c) {
      if (used[c] || std::find(span.begin(), span.end(), c) != span.end()) continue;
      bool ok = true;
      for (auto s : span) {
        if (!commute(c, s) || used[c ^ s]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::vector<std::uint32_t> next = span;
      for (auto s : span) next.push_back(c ^ s);
      if (grow(next, c + 1)) return true;
    }
    return false;
  };

  place = [&]() -> bool {
    std::uint32_t first = 0;
    while (first < total && used[first]) ++first;
    if (first == total) return true;
    std::vector<std::uint32_t> span{0, first};
    return grow(span, first + 1);
  };

  if (!place()) throw ClassificationError("commuting_classes: no partition found");

  std::vector<std::vector<PauliString>> out;
  for (auto& cls : classes) {
    std::sort(cls.begin(), cls.end());
    std::vector<PauliString> v;
    for (auto code : cls) {
      if (code != 0) v.push_back(PauliString::from_program_index(n, code));
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace pauli_cloner
