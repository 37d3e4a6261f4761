#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "pauli_cloner/mub.hpp"

using namespace pauli_cloner;
using namespace std::complex_literals;

namespace {

void expect_amps(const StateVector& s, std::vector<Complex> want, double scale) {
  ASSERT_EQ(s.dimension(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(std::abs(s[i] - want[i] * scale), 0.0, 1e-12) << i;
}

}  // namespace

TEST(PauliString, ParsingAndEncoding) {
  const PauliString p("xyZi");
  EXPECT_EQ(p.letters(), "XYZI");
  EXPECT_EQ(p.size(), 4);
  EXPECT_THROW(PauliString(""), ArgumentError);
  EXPECT_THROW(PauliString("XA"), ArgumentError);
  // z bits come first in the program index
  EXPECT_EQ(PauliString("ZI").program_index(), 0b1000u);
  EXPECT_EQ(PauliString("IX").program_index(), 0b0001u);
  EXPECT_EQ(PauliString("YI").program_index(), 0b1010u);
  for (std::uint32_t j = 0; j < 16; ++j) EXPECT_EQ(PauliString::from_program_index(2, j).program_index(), j);
  EXPECT_TRUE(PauliString::identity(3).is_identity());
}

TEST(PauliString, ProductAndCommutation) {
  EXPECT_EQ(PauliString("X") * PauliString("Z"), PauliString("Y"));
  EXPECT_EQ(PauliString("XZ") * PauliString("XZ"), PauliString("II"));
  EXPECT_FALSE(PauliString("X").commutes_with(PauliString("Z")));
  EXPECT_TRUE(PauliString("XX").commutes_with(PauliString("ZZ")));
  EXPECT_THROW(PauliString("X").commutes_with(PauliString("XX")), ArgumentError);
  // commutation agrees with matrices
  for (const auto& a : all_pauli_strings(2)) {
    for (const auto& b : all_pauli_strings(2)) {
      const CMatrix ab = a.matrix() * b.matrix(), ba = b.matrix() * a.matrix();
      EXPECT_EQ(a.commutes_with(b), (ab - ba).cwiseAbs().maxCoeff() < 1e-12) << a.letters() << b.letters();
    }
  }
}

TEST(PauliString, MatrixMatchesOracle) {
  for (const auto& p : all_pauli_strings(3)) {
    EXPECT_LT((p.matrix() - oracle::pauli(p.letters())).cwiseAbs().maxCoeff(), 1e-15) << p.letters();
  }
  EXPECT_EQ(all_pauli_strings(2).size(), 16u);
}

TEST(SingleQubitMubs, Examples) {
  const auto m = single_qubit_mubs();
  ASSERT_EQ(m.bases.size(), 3u);
  EXPECT_EQ(m.bases[0].label, "Z");
  EXPECT_EQ(m.bases[1].label, "X");
  EXPECT_EQ(m.bases[2].label, "Y");
  expect_amps(m.basis("X").states[0], {1, 1}, M_SQRT1_2);
  expect_amps(m.basis("Y").states[1], {1, -1i}, M_SQRT1_2);
  EXPECT_NEAR(std::norm(m.basis("Z").states[0].inner(m.basis("X").states[0])), 0.5, 1e-12);
  EXPECT_THROW(m.basis("M0"), ArgumentError);
}

TEST(TwoQubitMubs, Examples) {
  const auto m = two_qubit_mubs();
  ASSERT_EQ(m.bases.size(), 5u);
  expect_amps(m.basis("M1").states[0], {1, 1, 1, 1}, 0.5);
  expect_amps(m.basis("M2").states[0], {1, -1, 1i, 1i}, 0.5);
}

TEST(Mubs, UnbiasedAndOrthonormal) {
  for (int n : {1, 2}) {
    const auto set = mubs_for(n);
    const double target = 1.0 / static_cast<double>(dimension_of(n));
    int pairs = 0;
    for (std::size_t i = 0; i < set.bases.size(); ++i) {
      for (std::size_t a = 0; a < set.bases[i].states.size(); ++a) {
        for (std::size_t b = 0; b < set.bases[i].states.size(); ++b) {
          EXPECT_NEAR(std::abs(set.bases[i].states[a].inner(set.bases[i].states[b])), a == b ? 1.0 : 0.0, 1e-12);
        }
      }
      for (std::size_t j = i + 1; j < set.bases.size(); ++j) {
        ++pairs;
        for (const auto& x : set.bases[i].states) {
          for (const auto& y : set.bases[j].states) EXPECT_NEAR(std::norm(x.inner(y)), target, 1e-12);
        }
      }
    }
    EXPECT_EQ(pairs, n == 1 ? 3 : 10);
  }
  EXPECT_THROW(mubs_for(3), UnsupportedError);
}

TEST(MubPrep, MapsComputationalBasisOntoEachMub) {
  const auto m = two_qubit_mubs();
  for (int i = 0; i < 5; ++i) {
    const Circuit c = mub_prep_circuit(i);
    for (std::size_t k = 0; k < 4; ++k) {
      const auto out = apply_circuit(basis_state(2, k), c);
      EXPECT_NEAR(std::abs(out.inner(m.bases[static_cast<std::size_t>(i)].states[k])), 1.0, 1e-12)
          << "basis " << i << " state " << k;
    }
  }
  EXPECT_EQ(mub_prep_circuit(0).size(), 0u);
  EXPECT_EQ(mub_prep_circuit(1).size(), 2u);
  EXPECT_EQ(mub_prep_circuit(3).size(), 4u);
  EXPECT_THROW(mub_prep_circuit(5), ArgumentError);
  EXPECT_THROW(mub_prep_circuit(-1), ArgumentError);
}

TEST(PauliAction, Examples) {
  const auto m = two_qubit_mubs();
  const auto xi = pauli_action(PauliString("XI"), m.basis("M0"));
  EXPECT_FALSE(xi.is_invariant());
  EXPECT_EQ(xi.permutation, (std::vector<int>{2, 3, 0, 1}));  // (13)(24) in 0-based pairs of XI on qubit 0
  EXPECT_EQ(pauli_action(PauliString("IX"), m.basis("M0")).permutation, (std::vector<int>{1, 0, 3, 2}));
  EXPECT_EQ(pauli_action(PauliString("XX"), m.basis("M0")).permutation, (std::vector<int>{3, 2, 1, 0}));
  EXPECT_TRUE(pauli_action(PauliString("ZZ"), m.basis("M0")).is_invariant());
  EXPECT_TRUE(pauli_action(PauliString("XX"), m.basis("M1")).is_invariant());
  EXPECT_THROW(pauli_action(PauliString("X"), m.basis("M0")), ArgumentError);
}

TEST(PauliAction, NonBasisImageIsAClassificationError) {
  // H-rotated basis that no Pauli preserves as a set of rays
  MubBasis odd{"odd", {StateVector(1, (CVector(2) << std::cos(0.3), std::sin(0.3)).finished()),
                       StateVector(1, (CVector(2) << -std::sin(0.3), std::cos(0.3)).finished())}};
  EXPECT_THROW(pauli_action(PauliString("X"), odd), ClassificationError);
}

TEST(PauliAction, PermutationsAreFixedPointFreeInvolutions) {
  const auto m = two_qubit_mubs();
  for (const auto& g : two_qubit_error_groups()) {
    for (const auto& p : g) {
      for (const auto& b : m.bases) {
        const auto a = pauli_action(p, b);
        for (std::size_t k = 0; k < 4; ++k) {
          EXPECT_NEAR(std::abs(a.phases[k]), 1.0, 1e-12);
          if (a.is_invariant()) continue;
          EXPECT_NE(a.permutation[k], static_cast<int>(k));
          EXPECT_EQ(a.permutation[static_cast<std::size_t>(a.permutation[k])], static_cast<int>(k));
        }
      }
    }
  }
}

TEST(ActionTable, SingleQubit) {
  const auto t = action_table(1);
  EXPECT_EQ(t.cells, (std::vector<std::vector<int>>{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
}

TEST(ActionTable, TwoQubit) {
  const auto t = action_table(2);
  ASSERT_EQ(t.cells.size(), 5u);
  EXPECT_EQ(t.cells[1], (std::vector<int>{1, 1, 1, 1, 0}));
  std::vector<int> m0;
  for (const auto& row : t.cells) m0.push_back(row[0]);
  EXPECT_EQ(m0, (std::vector<int>{1, 1, 1, 0, 1}));
  EXPECT_EQ(t.row_labels[1], "XZ,YX,ZY");
  EXPECT_THROW(action_table(3), ArgumentError);
}

TEST(ActionTable, EachBasisHasExactlyThreeStabilizers) {
  const auto m = two_qubit_mubs();
  for (const auto& b : m.bases) {
    int count = 0;
    for (const auto& p : all_pauli_strings(2)) {
      if (!p.is_identity() && pauli_action(p, b).is_invariant()) ++count;
    }
    EXPECT_EQ(count, 3) << b.label;
  }
}

TEST(CommutingClasses, Shapes) {
  const auto one = commuting_classes(1);
  ASSERT_EQ(one.size(), 3u);
  std::set<std::string> singles;
  for (const auto& c : one) singles.insert(c.at(0).letters());
  EXPECT_EQ(singles, (std::set<std::string>{"X", "Y", "Z"}));

  // the N = 2 classes are exactly the table rows
  std::set<std::set<std::string>> want, got;
  for (const auto& g : two_qubit_error_groups()) {
    std::set<std::string> s;
    for (const auto& p : g) s.insert(p.letters());
    want.insert(s);
  }
  for (const auto& c : commuting_classes(2)) {
    std::set<std::string> s;
    for (const auto& p : c) s.insert(p.letters());
    got.insert(s);
  }
  EXPECT_EQ(got, want);

  const auto three = commuting_classes(3);
  EXPECT_EQ(three.size(), 9u);
  for (const auto& c : three) EXPECT_EQ(c.size(), 7u);
}

TEST(CommutingClasses, GroupLaw) {
  for (int n = 1; n <= 3; ++n) {
    std::set<std::string> seen;
    for (const auto& c : commuting_classes(n)) {
      std::vector<PauliString> g = c;
      g.push_back(PauliString::identity(n));
      for (const auto& p : g) {
        EXPECT_TRUE((p * p).is_identity());
        for (const auto& q : g) {
          EXPECT_TRUE(p.commutes_with(q));
          EXPECT_NE(std::find(g.begin(), g.end(), p * q), g.end());
        }
      }
      for (const auto& p : c) EXPECT_TRUE(seen.insert(p.letters()).second);
    }
    EXPECT_EQ(seen.size(), dimension_of(2 * n) - 1);
  }
}

TEST(CommutingClasses, Deterministic) { EXPECT_EQ(commuting_classes(3), commuting_classes(3)); }

TEST(CommutingClasses, Errors) {
  EXPECT_THROW(commuting_classes(4), UnsupportedError);
  EXPECT_THROW(commuting_classes(0), ArgumentError);
}
