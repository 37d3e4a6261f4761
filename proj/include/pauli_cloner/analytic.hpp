// Closed-form fidelities and closed-form programs for the NG and QID cloners.
#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pauli_cloner/cloner.hpp"
#include "pauli_cloner/mub.hpp"

namespace pauli_cloner {

// ---------------------------------------------------------------------------
// Single qubit
// ---------------------------------------------------------------------------

namespace detail {
struct Polar4 {
  double a, b, c, d;
  double al, be, ga, de;
};

inline Polar4 polar4(const SoftwareState& s, const char* who) {
  if (s.num_qubits() != 1) throw ArgumentError(std::string(who) + ": program must have 4 amplitudes");
  return {std::abs(s[0]), std::abs(s[1]), std::abs(s[2]), std::abs(s[3]),
          std::arg(s[0]), std::arg(s[1]), std::arg(s[2]), std::arg(s[3])};
}
}  // namespace detail

/// Single-qubit NG fidelities, bases in Z, X, Y order.
inline FidelityReport ng1q_fidelities(const SoftwareState& s) {
  const auto p = detail::polar4(s, "ng1q_fidelities");
  FidelityReport r;
  r.add_uniform("Z", 2, p.a * p.a + p.c * p.c,
                0.5 + p.a * p.c * std::cos(p.al - p.ga) + p.b * p.d * std::cos(p.be - p.de));
  r.add_uniform("X", 2, p.a * p.a + p.b * p.b,
                0.5 + p.a * p.b * std::cos(p.al - p.be) + p.c * p.d * std::cos(p.ga - p.de));
  r.add_uniform("Y", 2, p.a * p.a + p.d * p.d,
                0.5 + p.a * p.d * std::cos(p.al - p.de) + p.b * p.c * std::cos(p.be - p.ga));
  return r;
}

inline FidelityReport qid1q_fidelities(const SoftwareState& s) {
  const auto p = detail::polar4(s, "qid1q_fidelities");
  const double ad = p.a * p.d * std::cos(p.al - p.de);
  const double bc = p.b * p.c * std::cos(p.be - p.ga);
  const double ab = p.a * p.b * std::cos(p.al - p.be);
  const double cd = p.c * p.d * std::cos(p.ga - p.de);
  FidelityReport r;
  r.add_uniform("Z", 2, p.a * p.a + p.d * p.d, p.a * p.a + p.b * p.b);
  r.add_uniform("X", 2, ad + bc + 0.5, ab + cd + 0.5);
  r.add_uniform("Y", 2, ad - bc + 0.5, ab - cd + 0.5);
  return r;
}

// ---------------------------------------------------------------------------
// Two qubits: coefficient tables
// ---------------------------------------------------------------------------

/// sign * a_i * a_j
struct PairTerm {
  int i, j;
  int sign = 1;
};

/// F = constant + sum_k a_{squares[k]}^2 + 1/2 sum pair terms.
struct QuadraticFormula {
  double constant = 0.0;
  std::vector<int> squares;
  std::vector<PairTerm> pairs;

  double operator()(const std::vector<double>& a) const {
    double s = constant;
    for (int k : squares) s += a[static_cast<std::size_t>(k)] * a[static_cast<std::size_t>(k)];
    double c = 0.0;
    for (const auto& t : pairs) c += t.sign * a[static_cast<std::size_t>(t.i)] * a[static_cast<std::size_t>(t.j)];
    return s + 0.5 * c;
  }
};

/// Bob/Eve formulas for one basis; `alt_*` hold the second state-pair value
/// when the basis is not uniform (states 1 and 3 use the alternative).
struct BasisFormulas {
  std::string label;
  QuadraticFormula bob, eve;
  std::optional<QuadraticFormula> alt_bob, alt_eve;
};

using FormulaTable = std::vector<BasisFormulas>;

namespace detail {
inline QuadraticFormula bob_squares(std::vector<int> idx) { return {0.0, std::move(idx), {}}; }
inline QuadraticFormula quarter(std::vector<PairTerm> pairs) { return {0.25, {}, std::move(pairs)}; }
}  // namespace detail

/// Two-qubit NG table for bases M0..M4, as printed for real programs.
inline FormulaTable ng2q_table() {
  using detail::bob_squares;
  using detail::quarter;
  return {
      {"M0",
       bob_squares({0, 4, 8, 12}),
       quarter({{0, 4}, {1, 5}, {2, 6}, {3, 7}, {4, 8}, {5, 9}, {6, 10}, {7, 11}, {8, 12}, {9, 13}, {10, 14}, {11, 15},
                {0, 8}, {1, 9}, {2, 10}, {3, 11}, {4, 12}, {5, 13}, {6, 14}, {7, 15}, {0, 12}, {1, 13}, {2, 14}, {3, 15}}),
       {},
       {}},
      {"M1",
       bob_squares({0, 1, 2, 3}),
       quarter({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {6, 7},
                {8, 9}, {8, 10}, {8, 11}, {9, 10}, {9, 11}, {10, 11}, {12, 13}, {12, 14}, {12, 15}, {13, 14}, {13, 15},
                {14, 15}}),
       {},
       {}},
      {"M2",
       bob_squares({0, 7, 9, 14}),
       quarter({{0, 7}, {0, 9}, {0, 14}, {1, 6}, {1, 8}, {1, 15}, {2, 5}, {2, 11}, {2, 12}, {3, 4}, {3, 10}, {3, 13},
                {4, 10}, {4, 13}, {5, 11}, {5, 12}, {6, 8}, {6, 15}, {7, 9}, {7, 14}, {8, 15}, {9, 14}, {10, 13},
                {11, 12}}),
       {},
       {}},
      {"M3",
       bob_squares({0, 5, 10, 15}),
       quarter({{0, 5}, {0, 10}, {0, 15}, {1, 4}, {1, 11}, {1, 14}, {2, 7}, {2, 8}, {2, 13}, {3, 6}, {3, 9}, {3, 12},
                {4, 11}, {4, 14}, {5, 10}, {5, 15}, {6, 9}, {6, 12}, {7, 8}, {7, 13}, {8, 13}, {9, 12}, {10, 15},
                {11, 14}}),
       {},
       {}},
      {"M4",
       bob_squares({0, 6, 11, 13}),
       quarter({{0, 6}, {0, 11}, {0, 13}, {1, 7}, {1, 10}, {1, 12}, {2, 4}, {2, 9}, {2, 15}, {3, 5}, {3, 8}, {3, 14},
                {4, 9}, {4, 15}, {5, 8}, {5, 14}, {6, 11}, {6, 13}, {7, 10}, {7, 12}, {8, 14}, {9, 15}, {10, 12},
                {11, 13}}),
       {},
       {}},
  };
}

/// Two-qubit QID table for bases M0..M4, as printed for real programs.
inline FormulaTable qid2q_table() {
  using detail::bob_squares;
  using detail::quarter;
  const QuadraticFormula m1_bob = quarter({{0, 10}, {0, 15}, {0, 5}, {1, 11}, {1, 14}, {1, 4}, {10, 15}, {10, 5},
                                           {11, 14}, {11, 4}, {12, 2}, {12, 7}, {12, 9}, {13, 3}, {13, 6}, {13, 8},
                                           {14, 4}, {15, 5}, {2, 7}, {2, 9}, {3, 6}, {3, 8}, {6, 8}, {7, 9}});
  const QuadraticFormula m1_bob_alt =
      quarter({{0, 10}, {0, 15}, {0, 5}, {1, 11}, {1, 14}, {1, 4}, {10, 15}, {10, 5}, {11, 14}, {11, 4},
               {12, 2, -1}, {12, 7, -1}, {12, 9}, {13, 3, -1}, {13, 6, -1}, {13, 8}, {14, 4}, {15, 5}, {2, 7},
               {2, 9, -1}, {3, 6}, {3, 8, -1}, {6, 8, -1}, {7, 9, -1}});
  const QuadraticFormula m1_eve = quarter({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {10, 11}, {10, 8}, {10, 9},
                                           {11, 8}, {11, 9}, {12, 13}, {12, 14}, {12, 15}, {13, 14}, {13, 15}, {14, 15},
                                           {2, 3}, {4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {6, 7}, {8, 9}});
  const QuadraticFormula m1_eve_alt =
      quarter({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {10, 11}, {10, 8, -1}, {10, 9, -1}, {11, 8, -1}, {11, 9, -1},
               {12, 13}, {12, 14, -1}, {12, 15, -1}, {13, 14, -1}, {13, 15, -1}, {14, 15}, {2, 3}, {4, 5}, {4, 6},
               {4, 7}, {5, 6}, {5, 7}, {6, 7}, {8, 9}});
  const QuadraticFormula m2_bob =
      quarter({{0, 10}, {0, 15}, {0, 5}, {1, 11, -1}, {1, 14, -1}, {1, 4}, {10, 15}, {10, 5}, {11, 14}, {11, 4, -1},
               {12, 9, -1}, {13, 8, -1}, {14, 4, -1}, {15, 5}, {2, 7, -1}, {3, 6, -1}});
  const QuadraticFormula m2_eve =
      quarter({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {10, 11, -1}, {12, 13, -1}, {14, 15, -1}, {2, 3}, {4, 5},
               {4, 6, -1}, {4, 7, -1}, {5, 6, -1}, {5, 7, -1}, {6, 7}, {8, 9, -1}});
  const QuadraticFormula m34_bob =
      quarter({{0, 10}, {0, 15}, {0, 5}, {1, 4, -1}, {10, 15}, {10, 5}, {11, 14, -1}, {15, 5}});
  const QuadraticFormula m34_eve = quarter({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {4, 5, -1}, {6, 7, -1}});
  return {
      {"M0", bob_squares({0, 5, 10, 15}), bob_squares({0, 1, 2, 3}), {}, {}},
      {"M1", m1_bob, m1_eve, m1_bob_alt, m1_eve_alt},
      {"M2", m2_bob, m2_eve, {}, {}},
      {"M3", m34_bob, m34_eve, {}, {}},
      {"M4", m34_bob, m34_eve, {}, {}},
  };
}

/// Evaluates a formula table; every basis has four states.
inline FidelityReport evaluate_table(const FormulaTable& table, const SoftwareState& s, const char* who) {
  if (s.num_qubits() != 2) throw ArgumentError(std::string(who) + ": program must have 16 amplitudes");
  if (!s.is_real()) throw UnsupportedError(std::string(who) + ": only real programs have closed forms");
  const auto a = s.real_amplitudes();
  FidelityReport r;
  for (const auto& f : table) {
    const double b0 = f.bob(a), e0 = f.eve(a);
    const double b1 = f.alt_bob ? (*f.alt_bob)(a) : b0;
    const double e1 = f.alt_eve ? (*f.alt_eve)(a) : e0;
    BasisFidelity bf{f.label, {b0, b1, b0, b1}, {e0, e1, e0, e1}};
    bf.finalize();
    r.bases.push_back(std::move(bf));
  }
  return r;
}

inline FidelityReport ng2q_fidelities(const SoftwareState& s) { return evaluate_table(ng2q_table(), s, "ng2q_fidelities"); }

inline FidelityReport qid2q_fidelities(const SoftwareState& s) {
  return evaluate_table(qid2q_table(), s, "qid2q_fidelities");
}

// ---------------------------------------------------------------------------
// General N
// ---------------------------------------------------------------------------

/// Program indices j > 0 whose Pauli string leaves every state of `basis`
/// invariant.
inline std::vector<int> stabilizer_indices(const MubBasis& basis) {
  const int n = basis.num_qubits();
  std::vector<int> out;
  for (std::uint32_t j = 1; j < (1u << (2 * n)); ++j) {
    if (pauli_action(PauliString::from_program_index(n, j), basis).is_invariant()) out.push_back(static_cast<int>(j));
  }
  return out;
}

/// Bob's NG fidelity in a basis: a_0^2 plus the weight on the 2^N - 1
/// Paulis that stabilize it.
inline double ng_nq_bob_fidelity(const SoftwareState& program, const MubBasis& basis) {
  if (program.num_qubits() != basis.num_qubits()) throw ArgumentError("ng_nq_bob_fidelity: N mismatch");
  const auto s = stabilizer_indices(basis);
  if (s.size() + 1 != dimension_of(basis.num_qubits())) {
    throw ClassificationError("ng_nq_bob_fidelity: basis " + basis.label + " is not a stabilizer basis");
  }
  double f = std::norm(program[0]);
  for (int j : s) f += std::norm(program[static_cast<std::size_t>(j)]);
  return f;
}

/// Same, for the basis stabilized by a commuting class (any N).
inline double ng_nq_bob_fidelity(const SoftwareState& program, const std::vector<PauliString>& commuting_class) {
  double f = std::norm(program[0]);
  for (const auto& p : commuting_class) {
    if (p.size() != program.num_qubits()) throw ArgumentError("ng_nq_bob_fidelity: N mismatch");
    f += std::norm(program[p.program_index()]);
  }
  return f;
}

/// Symmetric N-qubit UQCM program for the NG cloner.
inline SoftwareState uqcm_program_ng(int n) {
  if (n < 1) throw ArgumentError("uqcm_program_ng: N must be >= 1");
  const double d = static_cast<double>(dimension_of(n));
  std::vector<double> a(dimension_of(2 * n), std::sqrt(1.0 / (2.0 * d * (d + 1.0))));
  a[0] = std::sqrt((d + 1.0) / (2.0 * d));
  return SoftwareState::from_real(a);
}

inline double uqcm_fidelity(int n) {
  const double d = static_cast<double>(dimension_of(n));
  return (d + 3.0) / (2.0 * (d + 1.0));
}

// ---------------------------------------------------------------------------
// NG single-qubit cloners
// ---------------------------------------------------------------------------

enum class NgFamily { UQCM, PCCM, Imbalanced };

inline NgAngles ng_family_angles(NgFamily kind, double theta, double eta = 1.0) {
  switch (kind) {
    case NgFamily::UQCM:
      return {std::atan(std::sqrt(2.0) * std::sin(theta)), std::numbers::pi / 4, theta};
    case NgFamily::PCCM:
      return {theta, theta, theta};
    case NgFamily::Imbalanced:
      if (!(eta > 0.0)) throw ArgumentError("ng_family_angles: eta must be positive");
      return {std::atan(eta * std::tan(2.0 * theta)) / 2.0, theta, theta};
  }
  throw ArgumentError("ng_family_angles: unknown kind");
}

/// theta at the symmetric point of each family.
inline double ng_family_symmetric_theta(NgFamily kind) {
  return kind == NgFamily::UQCM ? std::atan(1.0 / 3.0) : std::numbers::pi / 8;
}

/// eta = (1 - 2 p_Z - 2 p_Y) / (1 - 2 p_X - 2 p_Y)
inline double imbalance_eta(double p_x, double p_y, double p_z) {
  const double den = 1.0 - 2.0 * p_x - 2.0 * p_y;
  const double eta = (1.0 - 2.0 * p_z - 2.0 * p_y) / den;
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ArgumentError("imbalance_eta: channel gives non-positive eta");
  return eta;
}

/// NG phase-covariant cloner for the X/Y pair: (cos^2, cs, sin^2, cs).
inline SoftwareState ng_xy_pccm_program(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return SoftwareState::from_real({c * c, c * s, s * s, c * s});
}

// ---------------------------------------------------------------------------
// QID single-qubit cloners
// ---------------------------------------------------------------------------

enum class QidCloner { CnotCloner, AsymmetricZ, PCCM, UQCM, AsymmetricUQCM, XYImbalanced, SymmetricImbalanced };

struct QidParams {
  double phi = std::numbers::pi / 4;
  double rho = 0.0;     // AsymmetricUQCM
  int branch = +1;      // AsymmetricUQCM: sign in front of the square root
  double p_x = 0.0;     // imbalanced kinds
  double p_y = 0.0;
};

/// (rho, phi, theta) for the QID circuit; use ng_angles_to_program to get
/// the amplitudes (the parameterization is shared).
inline NgAngles qid_closed_form(QidCloner kind, const QidParams& p = {}) {
  constexpr double pi = std::numbers::pi;
  switch (kind) {
    case QidCloner::CnotCloner:
      return {0.0, 0.0, 0.0};
    case QidCloner::AsymmetricZ:
      return {pi / 2, p.phi, 0.0};
    case QidCloner::PCCM:
      return {pi / 4, p.phi, 0.0};
    case QidCloner::UQCM:
      return {std::acos(std::sqrt(2.0 / 3.0)), pi / 4, 0.0};
    case QidCloner::AsymmetricUQCM: {
      if (p.branch != 1 && p.branch != -1) throw ArgumentError("qid_closed_form: branch must be +1 or -1");
      const double s = std::sin(p.rho), c = std::cos(p.rho);
      const double rad = (0.5 - 0.75 * c * c) / (s * s);
      if (s == 0.0 || rad < -1e-15) throw ArgumentError("qid_closed_form: rho outside the asymmetric-UQCM domain");
      const double arg = c / (2.0 * s) + p.branch * std::sqrt(std::max(0.0, rad));
      if (std::abs(arg) > 1.0 + 1e-12) throw ArgumentError("qid_closed_form: arcsin argument outside [-1,1]");
      return {p.rho, std::asin(std::clamp(arg, -1.0, 1.0)), 0.0};
    }
    case QidCloner::XYImbalanced:
    case QidCloner::SymmetricImbalanced: {
      if (p.p_x < 0.0 || p.p_y < 0.0 || p.p_x + p.p_y >= 1.0) {
        throw ArgumentError("qid_closed_form: need p_X, p_Y >= 0 and p_X + p_Y < 1");
      }
      const double phi = kind == QidCloner::SymmetricImbalanced ? pi / 4 : p.phi;
      const double r = (p.p_x - p.p_y) / (1.0 - p.p_x - p.p_y);
      const double arg = std::sin(2.0 * std::atan(r)) * std::sin(2.0 * phi);
      return {pi / 4, phi, 0.5 * std::asin(arg)};
    }
  }
  throw ArgumentError("qid_closed_form: unknown kind");
}

}  // namespace pauli_cloner
