// Self-checks: closed forms against simulation, MUB and Pauli-group structure.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "pauli_cloner/analytic.hpp"
#include "pauli_cloner/cloner.hpp"
#include "pauli_cloner/mub.hpp"
#include "pauli_cloner/noise.hpp"

namespace pauli_cloner {

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ValidationOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  /// Formula tables under test; replace to exercise the failure path.
  FormulaTable ng2q = ng2q_table();
  FormulaTable qid2q = qid2q_table();
};

/// Expected 0/1 patterns (rows are error groups, columns bases).
inline std::vector<std::vector<int>> expected_table(int n) {
  if (n == 1) return {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  return {{1, 0, 1, 1, 1}, {1, 1, 1, 1, 0}, {1, 1, 0, 1, 1}, {0, 1, 1, 1, 1}, {1, 1, 1, 0, 1}};
}

namespace detail {

inline double report_deviation(const FidelityReport& a, const FidelityReport& b) {
  if (a.bases.size() != b.bases.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.bases.size(); ++i) {
    const auto& x = a.bases[i];
    const auto& y = b.bases[i];
    if (x.label != y.label || x.bob.size() != y.bob.size()) return std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.bob.size(); ++k) {
      m = std::max({m, std::abs(x.bob[k] - y.bob[k]), std::abs(x.eve[k] - y.eve[k])});
    }
  }
  return m;
}

inline SoftwareState random_program(std::mt19937_64& rng, int n, bool complex_amps) {
  std::normal_distribution<double> g;
  CVector v(static_cast<Eigen::Index>(dimension_of(2 * n)));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(g(rng), complex_amps ? g(rng) : 0.0);
  return SoftwareState(v / v.norm());
}

inline CheckResult finish(std::string name, double dev, double tol) { return {std::move(name), dev, tol, dev <= tol}; }

}  // namespace detail

/// Maximum deviation between closed forms and simulation for `trials`
/// random programs of one family.
inline CheckResult check_formula_oracle(const std::string& name, ClonerKind kind, int n,
                                        const std::function<FidelityReport(const SoftwareState&)>& formula,
                                        bool complex_amps, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto id = PauliChannel::identity(n);
  double dev = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto s = detail::random_program(rng, n, complex_amps);
    dev = std::max(dev, detail::report_deviation(formula(s), clone_fidelities(kind, n, s, id)));
  }
  return detail::finish(name, dev, 1e-10);
}

/// Affine noisy transforms against Kraus-branch simulation, both families.
inline CheckResult check_noise_transform(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double dev = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto s = detail::random_program(rng, 1, false);
    double px = u(rng), py = u(rng), pz = u(rng);
    const double scale = u(rng) / (px + py + pz);
    px *= scale, py *= scale, pz *= scale;
    PauliChannel ch(1);
    ch.set(PauliString("X"), px).set(PauliString("Y"), py).set(PauliString("Z"), pz);
    for (ClonerKind kind : {ClonerKind::NG, ClonerKind::QID}) {
      const auto clean = clone_fidelities(kind, 1, s, PauliChannel::identity(1));
      const auto noisy = clone_fidelities(kind, 1, s, ch);
      for (std::size_t b = 0; b < clean.bases.size(); ++b) {
        const char label = clean.bases[b].label[0];
        dev = std::max(dev, std::abs(noisy_fidelity_1q(clean.bases[b].bob_avg, label, px, py, pz) -
                                     noisy.bases[b].bob_avg));
        dev = std::max(dev, std::abs(noisy_fidelity_1q(clean.bases[b].eve_avg, label, px, py, pz) -
                                     noisy.bases[b].eve_avg));
      }
    }
  }
  return detail::finish("noise-transform", dev, 1e-10);
}

inline CheckResult check_unbiasedness() {
  double dev = 0.0;
  for (int n : {1, 2}) {
    const auto set = mubs_for(n);
    const double target = 1.0 / static_cast<double>(dimension_of(n));
    for (std::size_t i = 0; i < set.bases.size(); ++i) {
      const auto& bi = set.bases[i].states;
      for (std::size_t a = 0; a < bi.size(); ++a) {
        for (std::size_t b = 0; b < bi.size(); ++b) {
          dev = std::max(dev, std::abs(std::abs(bi[a].inner(bi[b])) - (a == b ? 1.0 : 0.0)));
        }
      }
      for (std::size_t j = i + 1; j < set.bases.size(); ++j) {
        for (const auto& x : bi) {
          for (const auto& y : set.bases[j].states) dev = std::max(dev, std::abs(std::norm(x.inner(y)) - target));
        }
      }
    }
  }
  return detail::finish("mub-unbiasedness", dev, 1e-12);
}

inline CheckResult check_action_tables() {
  double dev = 0.0;
  for (int n : {1, 2}) {
    const auto t = action_table(n);
    const auto want = expected_table(n);
    for (std::size_t r = 0; r < want.size(); ++r) {
      for (std::size_t c = 0; c < want[r].size(); ++c) dev = std::max(dev, std::abs(double(t.cells[r][c] - want[r][c])));
    }
  }
  // every N=2 error row together with I is closed under products
  for (const auto& group : two_qubit_error_groups()) {
    std::vector<PauliString> g = group;
    g.push_back(PauliString::identity(2));
    for (const auto& p : g) {
      for (const auto& q : g) {
        if (std::find(g.begin(), g.end(), p * q) == g.end() || !p.commutes_with(q)) dev = 1.0;
      }
    }
  }
  return detail::finish("action-tables", dev, 0.0);
}

inline CheckResult check_commuting_classes() {
  double dev = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const auto classes = commuting_classes(n);
    std::vector<int> seen(dimension_of(2 * n), 0);
    if (classes.size() != dimension_of(n) + 1) dev = 1.0;
    for (const auto& cls : classes) {
      if (cls.size() + 1 != dimension_of(n)) dev = 1.0;
      std::vector<PauliString> g = cls;
      g.push_back(PauliString::identity(n));
      for (const auto& p : cls) ++seen[p.program_index()];
      for (const auto& p : g) {
        for (const auto& q : g) {
          if (!p.commutes_with(q) || std::find(g.begin(), g.end(), p * q) == g.end()) dev = 1.0;
        }
      }
    }
    for (std::size_t j = 1; j < seen.size(); ++j) {
      if (seen[j] != 1) dev = 1.0;
    }
  }
  return detail::finish("commuting-classes", dev, 0.0);
}

/// Each unordered pair appears in exactly one Eve formula and each a_j^2
/// (j > 0) in exactly one Bob formula; a_0^2 appears in all Bob formulas.
inline CheckResult check_ng2q_partition(const FormulaTable& table) {
  double dev = 0.0;
  std::vector<std::vector<int>> pair_count(16, std::vector<int>(16, 0));
  std::vector<int> square_count(16, 0);
  for (const auto& f : table) {
    for (int k : f.bob.squares) ++square_count[static_cast<std::size_t>(k)];
    for (const auto& t : f.eve.pairs) {
      ++pair_count[static_cast<std::size_t>(std::min(t.i, t.j))][static_cast<std::size_t>(std::max(t.i, t.j))];
    }
  }
  if (square_count[0] != static_cast<int>(table.size())) dev = 1.0;
  for (int j = 1; j < 16; ++j) {
    if (square_count[static_cast<std::size_t>(j)] != 1) dev = 1.0;
    for (int i = 0; i < j; ++i) {
      if (pair_count[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 1) dev = 1.0;
    }
  }
  return detail::finish("ng2q-partition", dev, 0.0);
}

/// Bob rows of the two-qubit NG table against the stabilizer rule.
inline CheckResult check_bob_rule(const FormulaTable& table, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto two = two_qubit_mubs();
  double dev = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto s = detail::random_program(rng, 2, false);
    const auto a = s.real_amplitudes();
    for (const auto& f : table) dev = std::max(dev, std::abs(f.bob(a) - ng_nq_bob_fidelity(s, two.basis(f.label))));
  }
  return detail::finish("bob-stabilizer-rule", dev, 1e-12);
}

/// Off-diagonal magnitude of Bob's Pauli transfer matrix for random programs.
inline CheckResult check_pauli_cloner(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double dev = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int n = 1 + t % 2;
    const auto R = bob_transfer_matrix(ClonerKind::NG, n, detail::random_program(rng, n, true));
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
      for (Eigen::Index j = 0; j < R.cols(); ++j) {
        if (i != j) dev = std::max(dev, std::abs(R(i, j)));
      }
    }
  }
  return detail::finish("pauli-cloner", dev, 1e-10);
}

inline std::vector<CheckResult> run_validation(const ValidationOptions& opt) {
  if (opt.trials < 1) throw ArgumentError("run_validation: trials must be >= 1");
  const auto seed = opt.seed;
  std::vector<CheckResult> out;
  out.push_back(check_formula_oracle("ng1q-oracle", ClonerKind::NG, 1, ng1q_fidelities, true, opt.trials, seed + 1));
  out.push_back(
      check_formula_oracle("qid1q-oracle", ClonerKind::QID, 1, qid1q_fidelities, true, opt.trials, seed + 2));
  out.push_back(check_formula_oracle(
      "ng2q-oracle", ClonerKind::NG, 2,
      [&](const SoftwareState& s) { return evaluate_table(opt.ng2q, s, "ng2q"); }, false, opt.trials, seed + 3));
  out.push_back(check_formula_oracle(
      "qid2q-oracle", ClonerKind::QID, 2,
      [&](const SoftwareState& s) { return evaluate_table(opt.qid2q, s, "qid2q"); }, false, opt.trials, seed + 4));
  out.push_back(check_noise_transform(opt.trials, seed + 5));
  out.push_back(check_unbiasedness());
  out.push_back(check_action_tables());
  out.push_back(check_commuting_classes());
  out.push_back(check_ng2q_partition(opt.ng2q));
  out.push_back(check_bob_rule(opt.ng2q, opt.trials, seed + 6));
  out.push_back(check_pauli_cloner(opt.trials, seed + 7));
  return out;
}

}  // namespace pauli_cloner
