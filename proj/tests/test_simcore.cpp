#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pauli_cloner/simcore.hpp"

using namespace pauli_cloner;

namespace {

CVector vec(std::initializer_list<Complex> v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto x : v) out[i++] = x;
  return out;
}

void expect_state(const StateVector& s, const CVector& want, double tol = 1e-12) {
  ASSERT_EQ(static_cast<Eigen::Index>(s.dimension()), want.size());
  for (Eigen::Index i = 0; i < want.size(); ++i) EXPECT_NEAR(std::abs(s.amplitudes()[i] - want[i]), 0.0, tol) << i;
}

Circuit random_circuit(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> kind(0, 11), q(0, n - 1);
  std::uniform_real_distribution<double> ang(-4, 4);
  Circuit c(n);
  for (int k = 0; k < depth; ++k) {
    const int t = q(rng);
    int a = q(rng);
    while (n > 1 && a == t) a = q(rng);
    int b = q(rng);
    while (n > 2 && (b == t || b == a)) b = q(rng);
    switch (kind(rng)) {
      case 0: c.add(gate::h(t)); break;
      case 1: c.add(gate::x(t)); break;
      case 2: c.add(gate::y(t)); break;
      case 3: c.add(gate::z(t)); break;
      case 4: c.add(gate::s(t)); break;
      case 5: c.add(gate::rx(t, ang(rng))); break;
      case 6: c.add(gate::ry(t, ang(rng))); break;
      case 7: c.add(gate::rz(t, ang(rng))); break;
      case 8: if (n > 1) c.add(gate::cnot(a, t)); break;
      case 9: if (n > 2) c.add(gate::ccnot(a, b, t)); break;
      case 10: if (n > 1) c.add(gate::cry(a, t, ang(rng), true)); break;
      default: if (n > 1) c.add(gate::cry(a, t, ang(rng), false)); break;
    }
  }
  return c;
}

}  // namespace

TEST(BasisState, Examples) {
  expect_state(basis_state(1, 0), vec({1, 0}));
  expect_state(basis_state(2, 3), vec({0, 0, 0, 1}));
  const auto e5 = basis_state(4, 5);
  EXPECT_EQ(e5.dimension(), 16u);
  EXPECT_EQ(e5[5], Complex(1));
}

TEST(BasisState, OutOfRange) {
  EXPECT_THROW(basis_state(2, 4), ArgumentError);
  EXPECT_THROW(basis_state(0, 0), ArgumentError);
}

TEST(StateVector, Validation) {
  EXPECT_THROW(StateVector(1, vec({1, 1})), ArgumentError);
  EXPECT_THROW(StateVector(2, vec({1, 0})), ArgumentError);
  EXPECT_NO_THROW(StateVector::normalized(1, vec({1, 1})));
  EXPECT_THROW(StateVector::normalized(1, vec({0, 0})), ArgumentError);
}

TEST(ApplyCircuit, Examples) {
  Circuit h(1);
  h.add(gate::h(0));
  expect_state(apply_circuit(basis_state(1, 0), h), vec({M_SQRT1_2, M_SQRT1_2}));

  Circuit cx(2);
  cx.add(gate::cnot(0, 1));
  expect_state(apply_circuit(basis_state(2, 2), cx), basis_state(2, 3).amplitudes());
}

TEST(ApplyCircuit, QubitCountMismatch) {
  Circuit c(2);
  EXPECT_THROW(apply_circuit(basis_state(1, 0), c), ArgumentError);
}

TEST(Circuit, RejectsBadIndices) {
  Circuit c(2);
  EXPECT_THROW(c.add(gate::h(2)), ArgumentError);
  EXPECT_THROW(c.add(gate::cnot(1, 1)), ArgumentError);
  EXPECT_THROW(c.add(gate::x(-1)), ArgumentError);
}

TEST(ApplyCircuit, MatchesDenseOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 4;
    const Circuit c = random_circuit(rng, n, 25);
    // rebuild the same circuit from explicit matrices
    oracle::Mat u = oracle::Mat::Identity(1 << n, 1 << n);
    for (const auto& op : c.ops()) {
      const auto& g = std::get<GateOp>(op);
      oracle::Mat m(2, 2);
      const double a = g.angle / 2;
      const Complex i(0, 1);
      switch (g.kind) {
        case GateKind::H: m = oracle::H(); break;
        case GateKind::X: m = oracle::X(); break;
        case GateKind::Y: m = oracle::Y(); break;
        case GateKind::Z: m = oracle::Z(); break;
        case GateKind::S: m = oracle::m2(1, 0, 0, i); break;
        case GateKind::Sdg: m = oracle::m2(1, 0, 0, -i); break;
        case GateKind::RX: m = oracle::m2(std::cos(a), -i * std::sin(a), -i * std::sin(a), std::cos(a)); break;
        case GateKind::RY: m = oracle::m2(std::cos(a), -std::sin(a), std::sin(a), std::cos(a)); break;
        case GateKind::RZ: m = oracle::m2(std::exp(-i * a), 0, 0, std::exp(i * a)); break;
      }
      std::map<int, oracle::Mat> fire, idle;
      for (const auto& ctl : g.controls) fire[ctl.qubit] = ctl.on_one ? oracle::P1() : oracle::P0();
      fire[g.target] = m;
      oracle::Mat full = oracle::embed(n, fire);
      // identity on every control pattern that does not fire
      oracle::Mat proj = oracle::Mat::Identity(1 << n, 1 << n);
      if (!g.controls.empty()) {
        std::map<int, oracle::Mat> p;
        for (const auto& ctl : g.controls) p[ctl.qubit] = ctl.on_one ? oracle::P1() : oracle::P0();
        proj -= oracle::embed(n, p);
        full += proj;
      }
      u = full * u;
    }
    EXPECT_LT((circuit_unitary(c) - u).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ApplyCircuit, NormPreservation) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 5;
    const StateVector in(n, oracle::random_state(rng, 1 << n));
    EXPECT_NEAR(apply_circuit(in, random_circuit(rng, n, 12)).norm(), 1.0, 1e-10);
  }
}

TEST(ApplyCircuit, InverseRoundTrip) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    const StateVector in(n, oracle::random_state(rng, 1 << n));
    const Circuit c = random_circuit(rng, n, 20);
    const auto back = apply_circuit(apply_circuit(in, c), c.inverse());
    EXPECT_LT((back.amplitudes() - in.amplitudes()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ApplyCircuit, InverseRejectsInjection) {
  Circuit c(2);
  c.add(Injection{{0}, vec({0, 1})});
  EXPECT_THROW(c.inverse(), ArgumentError);
}

TEST(PartialTrace, BellStateGivesMaximallyMixed) {
  const auto bell = StateVector(2, vec({M_SQRT1_2, 0, 0, M_SQRT1_2}));
  const auto r = reduced_state(bell, {0});
  EXPECT_LT((r.matrix() - CMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, KeepAllIsIdentity) {
  std::mt19937_64 rng(1);
  const StateVector s(3, oracle::random_state(rng, 8));
  const auto rho = DensityMatrix::pure(s);
  EXPECT_LT((partial_trace(rho, {0, 1, 2}).matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PartialTrace, ProductState) {
  const StateVector plus(1, vec({M_SQRT1_2, M_SQRT1_2}));
  const auto prod = basis_state(1, 0).tensor(plus);
  const auto r = partial_trace(DensityMatrix::pure(prod), {1});
  EXPECT_LT((r.matrix() - DensityMatrix::pure(plus).matrix()).cwiseAbs().maxCoeff(), 1e-12);
  const auto a = partial_trace(DensityMatrix::pure(prod), {0});
  EXPECT_NEAR(a.matrix()(0, 0).real(), 1.0, 1e-12);
}

TEST(PartialTrace, MatchesOracleAndPreservesTrace) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const StateVector s(4, oracle::random_state(rng, 16));
    const auto r = reduced_state(s, {1, 2});
    EXPECT_LT((r.matrix() - oracle::reduce(s.amplitudes(), 4, 1, 2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r.trace().real(), 1.0, 1e-12);
    const auto full = partial_trace(DensityMatrix::pure(s), {1, 2});
    EXPECT_LT((full.matrix() - r.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PartialTrace, KeepOrderIsRespected) {
  const auto s = basis_state(2, 1);  // |01>
  const auto r = reduced_state(s, {1, 0});
  EXPECT_NEAR(r.matrix()(2, 2).real(), 1.0, 1e-12);  // |10> in (q1, q0) order
}

TEST(PartialTrace, Errors) {
  const auto rho = DensityMatrix::maximally_mixed(2);
  EXPECT_THROW(partial_trace(rho, {}), ArgumentError);
  EXPECT_THROW(partial_trace(rho, {2}), ArgumentError);
  EXPECT_THROW(partial_trace(rho, {0, 0}), ArgumentError);
}

TEST(FidelityPure, Examples) {
  EXPECT_NEAR(fidelity_pure(DensityMatrix::pure(basis_state(1, 0)), basis_state(1, 0)), 1.0, 1e-15);
  std::mt19937_64 rng(4);
  const StateVector one(1, oracle::random_state(rng, 2));
  const StateVector two(2, oracle::random_state(rng, 4));
  EXPECT_NEAR(fidelity_pure(DensityMatrix::maximally_mixed(1), one), 0.5, 1e-15);
  EXPECT_NEAR(fidelity_pure(DensityMatrix::maximally_mixed(2), two), 0.25, 1e-15);
  EXPECT_THROW(fidelity_pure(DensityMatrix::maximally_mixed(2), one), ArgumentError);
}

TEST(FidelityPure, LinearAndPhaseInvariant) {
  std::mt19937_64 rng(6);
  const StateVector a(2, oracle::random_state(rng, 4)), b(2, oracle::random_state(rng, 4)),
      psi(2, oracle::random_state(rng, 4));
  const auto ra = DensityMatrix::pure(a), rb = DensityMatrix::pure(b);
  const auto mix = DensityMatrix::trusted(2, 0.3 * ra.matrix() + 0.7 * rb.matrix());
  EXPECT_NEAR(fidelity_pure(mix, psi), 0.3 * fidelity_pure(ra, psi) + 0.7 * fidelity_pure(rb, psi), 1e-14);
  const StateVector rotated(2, psi.amplitudes() * std::polar(1.0, 1.234));
  EXPECT_NEAR(fidelity_pure(ra, rotated), fidelity_pure(ra, psi), 1e-14);
}

TEST(DensityMatrix, Validation) {
  CMatrix m = CMatrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix(1, m), ArgumentError);  // trace 2
  m(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix(1, m / 2.0), ArgumentError);  // not Hermitian
  CMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityMatrix(1, neg), ArgumentError);
  EXPECT_NO_THROW(DensityMatrix(1, CMatrix::Identity(2, 2) / 2.0));
}

TEST(InjectState, Examples) {
  const auto s = inject_state(basis_state(2, 0), {0, 1}, vec({1, 0, 0, 0}));
  expect_state(s, basis_state(2, 0).amplitudes());

  CVector e5 = CVector::Zero(16);
  e5[5] = 1;
  const auto t = inject_state(basis_state(6, 0), {2, 3, 4, 5}, e5);
  expect_state(t, basis_state(6, 5).amplitudes());  // qubits 2..5 = |0101>

  EXPECT_THROW(inject_state(basis_state(2, 0), {0}, vec({1, 1})), ArgumentError);
}

TEST(InjectState, RegisterOrderIsMostSignificantFirst) {
  const auto t = inject_state(basis_state(3, 0), {2, 0}, vec({0, 1, 0, 0}));  // qubit 2 = 0, qubit 0 = 1
  expect_state(t, basis_state(3, 4).amplitudes());
}
