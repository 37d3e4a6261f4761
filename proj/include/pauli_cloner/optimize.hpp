// Program-state optimization: quality/loss, ansatz circuits, parameter-shift
// gradients, Adam, grid search, and frontier sweeps.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "pauli_cloner/analytic.hpp"
#include "pauli_cloner/cloner.hpp"
#include "pauli_cloner/noise.hpp"

namespace pauli_cloner {

// ---------------------------------------------------------------------------
// Objectives
// ---------------------------------------------------------------------------

enum class Party { Bob, Eve };

/// Per-basis weights keyed by basis label ("X", "Y", "Z" or "M0".."M4").
struct QualityWeights {
  std::map<std::string, double> weights;

  static QualityWeights xyz(double x, double y, double z) { return {{{"X", x}, {"Y", y}, {"Z", z}}}; }
  static QualityWeights uniform(const std::vector<std::string>& labels) {
    QualityWeights w;
    for (const auto& l : labels) w.weights[l] = 1.0;
    return w;
  }
};

/// Weighted sum of per-basis fidelities.
inline double quality(const QualityWeights& w, const FidelityReport& report, Party party) {
  bool any = false;
  for (const auto& [label, x] : w.weights) {
    if (x < 0.0) throw ArgumentError("quality: negative weight for " + label);
    any = any || x != 0.0;
    if (x != 0.0 && !report.has(label)) throw ArgumentError("quality: report has no basis " + label);
  }
  if (!any) throw ArgumentError("quality: all weights are zero");
  double q = 0.0;
  for (const auto& b : report.bases) {
    auto it = w.weights.find(b.label);
    if (it == w.weights.end()) throw ArgumentError("quality: no weight for basis " + b.label);
    q += it->second * (party == Party::Bob ? b.bob_avg : b.eve_avg);
  }
  return q;
}

/// 10 (F_AB - f)^2 - F_AE
inline double loss(double f_ab, double f_ae, double f_target) {
  const double d = f_ab - f_target;
  return 10.0 * d * d - f_ae;
}

// ---------------------------------------------------------------------------
// Ansatze
// ---------------------------------------------------------------------------

enum class AnsatzKind { B92, ProgramPrep, NgAngles };

inline std::size_t parameter_count(AnsatzKind k) {
  switch (k) {
    case AnsatzKind::B92: return 18;
    case AnsatzKind::ProgramPrep: return 60;
    case AnsatzKind::NgAngles: return 3;
  }
  return 0;
}

inline std::string to_string(AnsatzKind k) {
  switch (k) {
    case AnsatzKind::B92: return "b92";
    case AnsatzKind::ProgramPrep: return "program-prep";
    case AnsatzKind::NgAngles: return "ng-angles";
  }
  return "?";
}

struct AnsatzSpec {
  AnsatzKind kind = AnsatzKind::NgAngles;
  std::vector<double> parameters;

  static AnsatzSpec zeros(AnsatzKind k) { return {k, std::vector<double>(parameter_count(k), 0.0)}; }

  void validate() const {
    if (parameters.size() != parameter_count(kind)) {
      throw ArgumentError("AnsatzSpec: " + to_string(kind) + " needs " + std::to_string(parameter_count(kind)) +
                          " parameters, got " + std::to_string(parameters.size()));
    }
  }
};

namespace detail {
inline void rotation_triplet(Circuit& c, int q, const std::vector<double>& p, std::size_t& k) {
  c.add(gate::rx(q, p[k]));
  c.add(gate::ry(q, p[k + 1]));
  c.add(gate::rz(q, p[k + 2]));
  k += 3;
}
}  // namespace detail

/// Three blocks of [RX, RY, RZ on qubits 0 and 1; CNOT 0->1].
/// Parameters ordered block, qubit, gate.
inline Circuit b92_ansatz(const std::vector<double>& p) {
  AnsatzSpec{AnsatzKind::B92, p}.validate();
  Circuit c(2);
  std::size_t k = 0;
  for (int block = 0; block < 3; ++block) {
    for (int q = 0; q < 2; ++q) detail::rotation_triplet(c, q, p, k);
    c.add(gate::cnot(0, 1));
  }
  return c;
}

/// Five layers of [RX, RY, RZ on qubits 0..3; CNOT 0->1, 1->2, 2->3, 3->0].
/// Parameters ordered layer, qubit, gate.
inline Circuit program_prep_ansatz(const std::vector<double>& p) {
  AnsatzSpec{AnsatzKind::ProgramPrep, p}.validate();
  Circuit c(4);
  std::size_t k = 0;
  for (int layer = 0; layer < 5; ++layer) {
    for (int q = 0; q < 4; ++q) detail::rotation_triplet(c, q, p, k);
    c.add(gate::cnot(0, 1)).add(gate::cnot(1, 2)).add(gate::cnot(2, 3)).add(gate::cnot(3, 0));
  }
  return c;
}

/// B92 -> the 2-qubit cloning circuit; ProgramPrep / NgAngles -> the program.
inline std::variant<Circuit, SoftwareState> evaluate_ansatz(const AnsatzSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case AnsatzKind::B92:
      return b92_ansatz(spec.parameters);
    case AnsatzKind::ProgramPrep:
      return SoftwareState(apply_circuit(basis_state(4, 0), program_prep_ansatz(spec.parameters)).amplitudes());
    case AnsatzKind::NgAngles:
      return ng_angles_to_program({spec.parameters[0], spec.parameters[1], spec.parameters[2]});
  }
  throw ArgumentError("evaluate_ansatz: unknown kind");
}

inline SoftwareState ansatz_program(const AnsatzSpec& spec) {
  auto v = evaluate_ansatz(spec);
  if (auto* s = std::get_if<SoftwareState>(&v)) return *s;
  throw ArgumentError("ansatz_program: " + to_string(spec.kind) + " does not produce a program state");
}

// ---------------------------------------------------------------------------
// Gradients
// ---------------------------------------------------------------------------

using VectorFn = std::function<std::vector<double>(const std::vector<double>&)>;
using Jacobian = std::vector<std::vector<double>>;  // [output][parameter]

/// Exact shift rules. Rotation gates give frequency 1 and the two-term rule
/// (f(x+pi/2) - f(x-pi/2)) / 2. NG angles enter the amplitudes as cos/sin,
/// so fidelities mix frequencies 1 and 2 and need the four-term rule
/// c1 (f(x+pi/4) - f(x-pi/4)) - c2 (f(x+3pi/4) - f(x-3pi/4)).
inline Jacobian parameter_shift_jacobian(const VectorFn& fn, const std::vector<double>& p, AnsatzKind kind) {
  constexpr double pi = std::numbers::pi;
  std::vector<std::pair<double, double>> terms;  // (shift, weight)
  if (kind == AnsatzKind::NgAngles) {
    terms = {{pi / 4, (2.0 + std::sqrt(2.0)) / 4.0}, {3 * pi / 4, -(2.0 - std::sqrt(2.0)) / 4.0}};
  } else {
    terms = {{pi / 2, 0.5}};
  }
  Jacobian jac;
  std::vector<double> q = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (const auto& [shift, w] : terms) {
      q[i] = p[i] + shift;
      const auto plus = fn(q);
      q[i] = p[i] - shift;
      const auto minus = fn(q);
      q[i] = p[i];
      if (jac.empty()) jac.assign(plus.size(), std::vector<double>(p.size(), 0.0));
      for (std::size_t o = 0; o < plus.size(); ++o) jac[o][i] += w * (plus[o] - minus[o]);
    }
  }
  return jac;
}

inline Jacobian central_difference_jacobian(const VectorFn& fn, const std::vector<double>& p, double h = 1e-5) {
  Jacobian jac;
  std::vector<double> q = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    q[i] = p[i] + h;
    const auto plus = fn(q);
    q[i] = p[i] - h;
    const auto minus = fn(q);
    q[i] = p[i];
    if (jac.empty()) jac.assign(plus.size(), std::vector<double>(p.size(), 0.0));
    for (std::size_t o = 0; o < plus.size(); ++o) jac[o][i] = (plus[o] - minus[o]) / (2.0 * h);
  }
  return jac;
}

// ---------------------------------------------------------------------------
// Models: parameters -> (F_AB, F_AE)
// ---------------------------------------------------------------------------

struct FidelityModel {
  AnsatzKind kind = AnsatzKind::NgAngles;
  std::function<std::pair<double, double>(const std::vector<double>&)> fidelities;

  VectorFn as_vector() const {
    return [f = fidelities](const std::vector<double>& p) {
      const auto [b, e] = f(p);
      return std::vector<double>{b, e};
    };
  }
};

/// Trainable 2-qubit B92 cloner.
inline FidelityModel b92_qml_model() {
  return {AnsatzKind::B92, [](const std::vector<double>& p) { return b92_fidelities(b92_ansatz(p)); }};
}

/// A cloner whose program comes from an ansatz; fidelities are the
/// group-averaged forms.
inline FidelityModel program_model(const FidelityForms& forms, AnsatzKind kind) {
  if (kind == AnsatzKind::B92) throw ArgumentError("program_model: B92 ansatz does not prepare a program");
  if ((kind == AnsatzKind::NgAngles && forms.num_qubits != 1) ||
      (kind == AnsatzKind::ProgramPrep && forms.num_qubits != 2)) {
    throw ArgumentError("program_model: ansatz " + to_string(kind) + " does not fit N = " +
                        std::to_string(forms.num_qubits));
  }
  const CMatrix mb = forms.bob_average();
  const CMatrix me = forms.eve_average();
  return {kind, [mb, me, kind](const std::vector<double>& p) {
            const SoftwareState s = ansatz_program({kind, p});
            return std::pair{FidelityForms::value(mb, s.amplitudes()), FidelityForms::value(me, s.amplitudes())};
          }};
}

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

struct Objective {
  std::function<double(const std::vector<double>&)> value;
  /// Empty -> central finite differences on `value`.
  std::function<std::vector<double>(const std::vector<double>&)> gradient;
};

/// Training loss for a target f with parameter-shift gradients of both
/// fidelities and the chain rule.
inline Objective loss_objective(const FidelityModel& model, double f_target) {
  Objective o;
  o.value = [model, f_target](const std::vector<double>& p) {
    const auto [b, e] = model.fidelities(p);
    return loss(b, e, f_target);
  };
  o.gradient = [model, f_target](const std::vector<double>& p) {
    const auto [b, e] = model.fidelities(p);
    const auto jac = parameter_shift_jacobian(model.as_vector(), p, model.kind);
    std::vector<double> g(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) g[i] = 20.0 * (b - f_target) * jac[0][i] - jac[1][i];
    return g;
  };
  return o;
}

struct OptimizerConfig {
  double learning_rate = 0.1;
  int steps = 100;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int restarts = 5;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(learning_rate > 0.0)) throw ArgumentError("OptimizerConfig: learning_rate must be > 0");
    if (steps < 1) throw ArgumentError("OptimizerConfig: steps must be >= 1");
    if (restarts < 1) throw ArgumentError("OptimizerConfig: restarts must be >= 1");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
      throw ArgumentError("OptimizerConfig: Adam betas must lie in [0,1)");
    }
    if (!(adam_eps > 0.0)) throw ArgumentError("OptimizerConfig: adam_eps must be > 0");
  }
};

struct OptimizeResult {
  std::vector<double> best_params;
  double best_loss = std::numeric_limits<double>::infinity();
  int best_restart = 0;
  std::vector<std::vector<double>> traces;  // loss per step, one list per restart
};

/// Uniform [-pi, pi) draws from mt19937_64 seeded by seed_seq{seed, stream}.
inline std::vector<double> random_parameters(std::size_t count, std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  std::vector<double> p(count);
  for (auto& x : p) x = u(rng);
  return p;
}

/// Restart 0 starts from spec.parameters, restart r >= 1 from
/// random_parameters(n, cfg.seed, r). Returns the best parameters seen.
inline OptimizeResult adam_optimize(const Objective& objective, const AnsatzSpec& spec, const OptimizerConfig& cfg) {
  spec.validate();
  cfg.validate();
  auto check = [](double v, int restart, int step) {
    if (!std::isfinite(v)) {
      throw OptimizerDivergence("adam_optimize: non-finite loss at restart " + std::to_string(restart) + ", step " +
                                std::to_string(step));
    }
  };
  auto grad = [&](const std::vector<double>& p) {
    if (objective.gradient) return objective.gradient(p);
    const auto jac = central_difference_jacobian(
        [&](const std::vector<double>& q) { return std::vector<double>{objective.value(q)}; }, p);
    return jac[0];
  };

  OptimizeResult res;
  const std::size_t n = spec.parameters.size();
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<double> p = r == 0 ? spec.parameters : random_parameters(n, cfg.seed, static_cast<std::uint64_t>(r));
    std::vector<double> m(n, 0.0), v(n, 0.0), trace;
    double b1t = 1.0, b2t = 1.0;
    for (int step = 0; step <= cfg.steps; ++step) {
      const double l = objective.value(p);
      check(l, r, step);
      trace.push_back(l);
      if (l < res.best_loss) {
        res.best_loss = l;
        res.best_params = p;
        res.best_restart = r;
      }
      if (step == cfg.steps) break;
      const auto g = grad(p);
      b1t *= cfg.adam_beta1;
      b2t *= cfg.adam_beta2;
      for (std::size_t i = 0; i < n; ++i) {
        check(g[i], r, step);
        m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g[i];
        v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
        const double mh = m[i] / (1.0 - b1t);
        const double vh = v[i] / (1.0 - b2t);
        p[i] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.adam_eps);
      }
    }
    res.traces.push_back(std::move(trace));
  }
  return res;
}

inline OptimizeResult adam_optimize(const std::function<double(const std::vector<double>&)>& value,
                                    const AnsatzSpec& spec, const OptimizerConfig& cfg) {
  return adam_optimize(Objective{value, {}}, spec, cfg);
}

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

/// rho takes `resolution` points on [0, pi/2] (endpoints included); theta and
/// phi take `resolution` points on [0, 2pi). Full periods in theta and phi
/// cover every sign pattern, so the grid spans the real unit 3-sphere. The
/// first point is (1,0,0,0).
struct AngleGrid {
  int resolution;

  explicit AngleGrid(int res) : resolution(res) {
    if (res < 8) throw ArgumentError("grid search: resolution must be >= 8");
  }
  std::size_t size() const {
    const auto r = static_cast<std::size_t>(resolution);
    return r * r * r;
  }
  NgAngles angles(std::size_t i) const {
    const auto r = static_cast<std::size_t>(resolution);
    const std::size_t ir = i / (r * r), ip = (i / r) % r, it = i % r;
    const double two_pi = 2.0 * std::numbers::pi;
    return {static_cast<double>(ir) * (std::numbers::pi / 2) / static_cast<double>(r - 1),
            static_cast<double>(ip) * two_pi / static_cast<double>(r),
            static_cast<double>(it) * two_pi / static_cast<double>(r)};
  }
};

struct GridResult {
  ClonerKind family;
  SoftwareState program;
  NgAngles angles;
  double value;
};

/// Minimizes `objective` over the angle grid; ties keep the earliest point.
inline GridResult grid_search_software(ClonerKind family, int n, int resolution,
                                       const std::function<double(const SoftwareState&)>& objective) {
  if (n != 1) throw ArgumentError("grid_search_software: only N = 1 programs are grid-searched");
  const AngleGrid grid(resolution);
  std::size_t best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = objective(ng_angles_to_program(grid.angles(i)));
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const NgAngles a = grid.angles(best);
  return {family, ng_angles_to_program(a), a, best_v};
}

// ---------------------------------------------------------------------------
// Frontiers
// ---------------------------------------------------------------------------

struct FrontierPoint {
  double bob;
  double eve;
};

/// Points not dominated by any other, sorted by ascending F_AB (so F_AE is
/// strictly decreasing).
inline std::vector<FrontierPoint> pareto_filter(std::vector<FrontierPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.bob != b.bob ? a.bob > b.bob : a.eve > b.eve;
  });
  std::vector<FrontierPoint> out;
  double best_eve = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    if (p.eve > best_eve) {
      out.push_back(p);
      best_eve = p.eve;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

/// Upper concave envelope of a Pareto-filtered frontier. The set of
/// achievable (F_AB, F_AE) pairs is convex, so this is the tighter estimate
/// of the true frontier when the points come from a coarse grid.
inline std::vector<FrontierPoint> concave_envelope(const std::vector<FrontierPoint>& front) {
  std::vector<FrontierPoint> hull;
  for (const auto& q : front) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      if ((b.bob - a.bob) * (q.eve - a.eve) - (b.eve - a.eve) * (q.bob - a.bob) >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(q);
  }
  return hull;
}

/// Piecewise-linear F_AE at F_AB = x on a Pareto-filtered frontier; nullopt
/// outside its F_AB range.
inline std::optional<double> interpolate_frontier(const std::vector<FrontierPoint>& front, double x) {
  if (front.empty() || x < front.front().bob - 1e-12 || x > front.back().bob + 1e-12) return std::nullopt;
  for (std::size_t i = 1; i < front.size(); ++i) {
    if (x <= front[i].bob) {
      const auto& a = front[i - 1];
      const auto& b = front[i];
      const double t = b.bob == a.bob ? 0.0 : (x - a.bob) / (b.bob - a.bob);
      return a.eve + std::clamp(t, 0.0, 1.0) * (b.eve - a.eve);
    }
  }
  return front.back().eve;
}

// ---------------------------------------------------------------------------
// Tasks and sweeps
// ---------------------------------------------------------------------------

enum class TaskKind { B92, BB84, SixState, Twenty, ReducedPairs };

inline std::string to_string(TaskKind k) {
  switch (k) {
    case TaskKind::B92: return "b92";
    case TaskKind::BB84: return "bb84";
    case TaskKind::SixState: return "six";
    case TaskKind::Twenty: return "twenty";
    case TaskKind::ReducedPairs: return "pairs";
  }
  return "?";
}

struct SweepTask {
  TaskKind kind = TaskKind::B92;
  PauliChannel channel = PauliChannel::identity(1);
  /// ReducedPairs only; empty means all ten pairs.
  std::vector<std::pair<int, int>> pairs;
  /// Empty means the task's default series.
  std::vector<std::string> series;
  int grid_resolution = 64;
  /// Samples of reference closed-form families.
  int reference_samples = 2001;

  int num_qubits() const { return (kind == TaskKind::Twenty || kind == TaskKind::ReducedPairs) ? 2 : 1; }
};

inline std::vector<std::pair<int, int>> all_basis_pairs() {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) out.emplace_back(i, j);
  }
  return out;
}

inline std::vector<std::string> default_series(TaskKind k) {
  switch (k) {
    case TaskKind::B92: return {"qml", "ng", "qid"};
    case TaskKind::BB84: return {"ng", "qid", "pccm"};
    case TaskKind::SixState: return {"ng", "qid", "uqcm"};
    case TaskKind::Twenty: return {"ng", "qid", "uqcm"};
    case TaskKind::ReducedPairs: return {"ng", "qid", "uqcm"};
  }
  return {};
}

struct SweepRow {
  double f_target = 0.0;
  double F_AB_avg = 0.0;
  double F_AE_avg = 0.0;
  std::vector<double> bob;  // per basis / probe group
  std::vector<double> eve;
  std::vector<double> params;
  double loss = 0.0;
};

struct SweepResult {
  std::string task;
  std::string series;
  std::string method;  // adam | grid | reference
  std::vector<std::string> basis_labels;
  std::vector<SweepRow> rows;

  std::vector<FrontierPoint> points() const {
    std::vector<FrontierPoint> p;
    for (const auto& r : rows) p.push_back({r.F_AB_avg, r.F_AE_avg});
    return p;
  }
  std::vector<FrontierPoint> frontier() const { return pareto_filter(points()); }
};

/// Worker count from PAULI_CLONER_THREADS, else the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("PAULI_CLONER_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(0..count-1) on worker_count() threads; the first exception (by
/// index) is rethrown after all workers finish.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < count; i += workers) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace detail {

inline std::string pair_label(std::pair<int, int> p) {
  return "M" + std::to_string(p.first) + "M" + std::to_string(p.second);
}

/// Probe groups for a task (for ReducedPairs, one pair).
inline std::vector<ProbeGroup> task_groups(TaskKind k, std::pair<int, int> pair = {0, 1}) {
  switch (k) {
    case TaskKind::B92: return b92_probe_groups();
    case TaskKind::BB84: {
      const auto one = single_qubit_mubs();
      return probe_groups({one.basis("Z"), one.basis("X")});
    }
    case TaskKind::SixState: return probe_groups(single_qubit_mubs().bases);
    case TaskKind::Twenty: return probe_groups(two_qubit_mubs().bases);
    case TaskKind::ReducedPairs: {
      const auto two = two_qubit_mubs();
      if (pair.first < 0 || pair.second > 4 || pair.first >= pair.second) {
        throw ArgumentError("frontier_sweep: basis pair must satisfy 0 <= i < j <= 4");
      }
      return probe_groups({two.bases[static_cast<std::size_t>(pair.first)],
                           two.bases[static_cast<std::size_t>(pair.second)]});
    }
  }
  throw ArgumentError("frontier_sweep: unknown task");
}

inline SweepRow row_from_program(const FidelityForms& forms, const SoftwareState& s, double f,
                                 std::vector<double> params) {
  const FidelityReport r = forms.evaluate(s);
  SweepRow row;
  row.f_target = f;
  for (const auto& b : r.bases) {
    row.bob.push_back(b.bob_avg);
    row.eve.push_back(b.eve_avg);
  }
  row.F_AB_avg = r.bob_avg();
  row.F_AE_avg = r.eve_avg();
  row.loss = loss(row.F_AB_avg, row.F_AE_avg, f);
  row.params = std::move(params);
  return row;
}

inline std::uint64_t row_seed(std::uint64_t seed, std::size_t series, std::size_t row) {
  return seed * 1000003ull + series * 10007ull + row;
}

inline SweepResult adam_series(const std::string& task, const std::string& name, const FidelityModel& model,
                               const std::function<SweepRow(const std::vector<double>&, double)>& describe,
                               const std::vector<std::string>& labels, const std::vector<double>& fs,
                               const OptimizerConfig& cfg, std::size_t series_index) {
  SweepResult res{task, name, "adam", labels, std::vector<SweepRow>(fs.size())};
  parallel_for(fs.size(), [&](std::size_t i) {
    OptimizerConfig c = cfg;
    c.seed = row_seed(cfg.seed, series_index, i);
    const AnsatzSpec init{model.kind, random_parameters(parameter_count(model.kind), c.seed, 0)};
    const auto best = adam_optimize(loss_objective(model, fs[i]), init, c);
    res.rows[i] = describe(best.best_params, fs[i]);
  });
  return res;
}

}  // namespace detail

/// Closed-form reference family sampled densely: PCCM (BB84), or the
/// one-parameter UQCM family a_0 = cos t, a_{j>0} = sin t / sqrt(4^N - 1).
/// Evaluated on the NG hardware under the task's channel.
inline std::vector<std::pair<SoftwareState, FidelityReport>> reference_family(const std::string& family,
                                                                               const FidelityForms& forms,
                                                                               int samples) {
  if (samples < 2) throw ArgumentError("reference_family: need at least 2 samples");
  std::vector<std::pair<SoftwareState, FidelityReport>> out;
  const int n = forms.num_qubits;
  for (int k = 0; k < samples; ++k) {
    const double t = (std::numbers::pi / 2) * static_cast<double>(k) / static_cast<double>(samples - 1);
    std::optional<SoftwareState> s;
    if (family == "pccm") {
      if (n != 1) throw ArgumentError("reference_family: pccm is a single-qubit family");
      s = ng_angles_to_program(ng_family_angles(NgFamily::PCCM, t));
    } else if (family == "uqcm") {
      const std::size_t dim = dimension_of(2 * n);
      std::vector<double> a(dim, std::sin(t) / std::sqrt(static_cast<double>(dim - 1)));
      a[0] = std::cos(t);
      s = SoftwareState::from_real(a);
    } else {
      throw ArgumentError("reference_family: unknown family '" + family + "'");
    }
    out.emplace_back(*s, forms.evaluate(*s));
  }
  return out;
}

inline std::vector<FrontierPoint> reference_curve(const std::string& family, const FidelityForms& forms,
                                                  int samples = 2001) {
  std::vector<FrontierPoint> pts;
  for (const auto& [s, r] : reference_family(family, forms, samples)) pts.push_back({r.bob_avg(), r.eve_avg()});
  return pts;
}

/// One optimized row per f for each requested series. Rows are sorted by f
/// and deterministic for a fixed config and seed.
inline std::vector<SweepResult> frontier_sweep(const SweepTask& task, const std::vector<double>& f_values,
                                               const OptimizerConfig& cfg) {
  if (f_values.empty()) throw ArgumentError("frontier_sweep: f_values is empty");
  cfg.validate();
  std::vector<double> fs = f_values;
  std::sort(fs.begin(), fs.end());
  const int n = task.num_qubits();
  if (task.channel.num_qubits() != n) {
    throw ArgumentError("frontier_sweep: channel acts on " + std::to_string(task.channel.num_qubits()) +
                        " qubit(s), task needs " + std::to_string(n));
  }
  if (task.kind == TaskKind::B92 && !task.channel.is_identity()) {
    throw ArgumentError("frontier_sweep: the b92 task is noiseless");
  }
  const std::vector<std::string> series = task.series.empty() ? default_series(task.kind) : task.series;
  const std::string tname = to_string(task.kind);
  const AnsatzKind program_ansatz = n == 1 ? AnsatzKind::NgAngles : AnsatzKind::ProgramPrep;

  std::vector<std::pair<int, int>> pairs{{0, 1}};
  if (task.kind == TaskKind::ReducedPairs) pairs = task.pairs.empty() ? all_basis_pairs() : task.pairs;

  std::vector<SweepResult> out;
  std::size_t series_index = 0;
  for (const auto& pair : pairs) {
    const auto groups = detail::task_groups(task.kind, pair);
    std::vector<std::string> labels;
    for (const auto& g : groups) labels.push_back(g.label);
    const std::string suffix = task.kind == TaskKind::ReducedPairs ? "_" + detail::pair_label(pair) : "";

    for (const auto& name : series) {
      const std::size_t si = series_index++;
      if (name == "qml") {
        if (task.kind != TaskKind::B92) throw ArgumentError("frontier_sweep: qml series exists only for b92");
        const auto model = b92_qml_model();
        auto describe = [&](const std::vector<double>& p, double f) {
          const Circuit c = b92_ansatz(p);
          const auto one = single_qubit_mubs();
          const StateVector blank = basis_state(1, 0);
          SweepRow row;
          row.f_target = f;
          for (const auto* s : {&one.basis("Z").states[0], &one.basis("X").states[0]}) {
            const StateVector o = apply_circuit(s->tensor(blank), c);
            row.bob.push_back(fidelity_pure(reduced_state(o, {0}), *s));
            row.eve.push_back(fidelity_pure(reduced_state(o, {1}), *s));
          }
          row.F_AB_avg = 0.5 * (row.bob[0] + row.bob[1]);
          row.F_AE_avg = 0.5 * (row.eve[0] + row.eve[1]);
          row.loss = loss(row.F_AB_avg, row.F_AE_avg, f);
          row.params = p;
          return row;
        };
        out.push_back(detail::adam_series(tname, name, model, describe, labels, fs, cfg, si));
      } else if (name == "ng" || name == "qid") {
        const ClonerKind kind = name == "ng" ? ClonerKind::NG : ClonerKind::QID;
        const FidelityForms forms = fidelity_forms(kind, n, task.channel, groups);
        if (task.kind == TaskKind::B92) {
          // grid search over real programs; each grid point evaluated once
          const AngleGrid grid(task.grid_resolution);
          const CMatrix mb = forms.bob_average(), me = forms.eve_average();
          std::vector<double> gb(grid.size()), ge(grid.size());
          parallel_for(grid.size(), [&](std::size_t i) {
            const SoftwareState s = ng_angles_to_program(grid.angles(i));
            gb[i] = FidelityForms::value(mb, s.amplitudes());
            ge[i] = FidelityForms::value(me, s.amplitudes());
          });
          SweepResult res{tname, name + suffix, "grid", labels, {}};
          for (double f : fs) {
            std::size_t best = 0;
            double best_v = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < grid.size(); ++i) {
              const double v = loss(gb[i], ge[i], f);
              if (v < best_v) {
                best_v = v;
                best = i;
              }
            }
            const SoftwareState s = ng_angles_to_program(grid.angles(best));
            res.rows.push_back(detail::row_from_program(forms, s, f, s.real_amplitudes()));
          }
          out.push_back(std::move(res));
        } else {
          const auto model = program_model(forms, program_ansatz);
          auto describe = [&](const std::vector<double>& p, double f) {
            return detail::row_from_program(forms, ansatz_program({program_ansatz, p}), f, p);
          };
          out.push_back(detail::adam_series(tname, name + suffix, model, describe, labels, fs, cfg, si));
        }
      } else if (name == "pccm" || name == "uqcm") {
        const FidelityForms forms = fidelity_forms(ClonerKind::NG, n, task.channel, groups);
        const auto fam = reference_family(name, forms, task.reference_samples);
        SweepResult res{tname, name + suffix, "reference", labels, {}};
        for (double f : fs) {
          std::size_t best = 0;
          double best_v = std::numeric_limits<double>::infinity();
          for (std::size_t k = 0; k < fam.size(); ++k) {
            const double v = loss(fam[k].second.bob_avg(), fam[k].second.eve_avg(), f);
            if (v < best_v) {
              best_v = v;
              best = k;
            }
          }
          res.rows.push_back(detail::row_from_program(forms, fam[best].first, f, fam[best].first.real_amplitudes()));
        }
        out.push_back(std::move(res));
      } else {
        throw ArgumentError("frontier_sweep: unknown series '" + name + "'");
      }
    }
  }
  return out;
}

/// `f_target,F_AB_avg,F_AE_avg,F_AB_<b>,F_AE_<b>...,params`; params are
/// ';'-separated in one field. `header` lines are written first, each
/// prefixed with '#'.
inline void write_csv(std::ostream& os, const SweepResult& r, const std::vector<std::string>& header = {}) {
  for (const auto& h : header) os << "# " << h << "\n";
  os << "f_target,F_AB_avg,F_AE_avg";
  for (const auto& l : r.basis_labels) os << ",F_AB_" << l << ",F_AE_" << l;
  os << ",params\n";
  std::ostringstream line;
  line.precision(12);
  for (const auto& row : r.rows) {
    line.str("");
    line << row.f_target << "," << row.F_AB_avg << "," << row.F_AE_avg;
    for (std::size_t i = 0; i < row.bob.size(); ++i) line << "," << row.bob[i] << "," << row.eve[i];
    line << ",";
    for (std::size_t i = 0; i < row.params.size(); ++i) line << (i ? ";" : "") << row.params[i];
    os << line.str() << "\n";
  }
}

}  // namespace pauli_cloner
