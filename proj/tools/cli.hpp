// pauli-cloner command-line front end. Kept in a header so the test suite
// can drive it in-process.
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pauli_cloner/pauli_cloner.hpp"

namespace pauli_cloner::cli {

using nlohmann::json;

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Rounded to 12 significant digits so JSON output matches text output.
inline double r12(double x) { return std::stod(fmt(x)); }

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("cannot parse " + what + " '" + s + "'");
  }
}

inline std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(parse_double(t, what));
  if (out.empty()) throw ArgumentError(what + " is empty");
  return out;
}

/// "a:b:step" (inclusive) or a comma-separated list.
inline std::vector<double> parse_range(const std::string& s) {
  const auto parts = split(s, ':');
  if (s.find(':') == std::string::npos) return parse_list(s, "f values");
  if (parts.size() != 3) throw ArgumentError("f range must be a:b:step");
  const double a = parse_double(parts[0], "f start"), b = parse_double(parts[1], "f stop"),
               h = parse_double(parts[2], "f step");
  if (!(h > 0.0) || b < a) throw ArgumentError("f range needs step > 0 and stop >= start");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((b - a) / h + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * h);
  return out;
}

inline ClonerKind parse_kind(const std::string& s) {
  if (s == "ng") return ClonerKind::NG;
  if (s == "qid") return ClonerKind::QID;
  throw ArgumentError("kind must be ng or qid");
}

inline TaskKind parse_task(const std::string& s) {
  if (s == "b92") return TaskKind::B92;
  if (s == "bb84") return TaskKind::BB84;
  if (s == "six") return TaskKind::SixState;
  if (s == "twenty") return TaskKind::Twenty;
  if (s == "pairs") return TaskKind::ReducedPairs;
  throw ArgumentError("task must be one of b92, bb84, six, twenty, pairs");
}

inline AnsatzKind parse_ansatz(const std::string& s) {
  if (s == "b92") return AnsatzKind::B92;
  if (s == "program-prep") return AnsatzKind::ProgramPrep;
  if (s == "ng-angles") return AnsatzKind::NgAngles;
  throw ArgumentError("ansatz must be b92, program-prep or ng-angles");
}

/// Corrected symmetric two-qubit QID UQCM: 2/sqrt(10) on index 0 and
/// 1/sqrt(10) on {1, 2, 3, 5, 10, 15}.
inline SoftwareState qid_uqcm_sym_program() {
  std::vector<double> a(16, 0.0);
  a[0] = 2.0;
  for (int i : {1, 2, 3, 5, 10, 15}) a[static_cast<std::size_t>(i)] = 1.0;
  for (auto& x : a) x /= std::sqrt(10.0);
  return SoftwareState::from_real(a);
}

inline const char* preset_help() {
  return "uqcm-sym | pccm-sym | imbalanced(eta) | cnot-cloner | qid-uqcm-sym";
}

inline SoftwareState preset_program(const std::string& name, ClonerKind kind, int n) {
  auto need = [&](bool ok, const std::string& why) {
    if (!ok) throw ArgumentError("preset " + name + ": " + why);
  };
  if (name == "uqcm-sym") {
    if (kind == ClonerKind::NG) return uqcm_program_ng(n);
    if (n == 1) return ng_angles_to_program(qid_closed_form(QidCloner::UQCM));
    need(n == 2, "QID exists only for N = 1, 2");
    return qid_uqcm_sym_program();
  }
  if (name == "qid-uqcm-sym") {
    need(kind == ClonerKind::QID && n == 2, "needs --kind qid --n 2");
    return qid_uqcm_sym_program();
  }
  if (name == "pccm-sym") {
    need(n == 1, "needs --n 1");
    if (kind == ClonerKind::NG) return ng_angles_to_program(ng_family_angles(NgFamily::PCCM, std::numbers::pi / 8));
    return ng_angles_to_program(qid_closed_form(QidCloner::PCCM));
  }
  if (name == "cnot-cloner") {
    need(n == 1, "needs --n 1");
    return ng_angles_to_program(qid_closed_form(QidCloner::CnotCloner));
  }
  if (name.rfind("imbalanced", 0) == 0) {
    need(kind == ClonerKind::NG && n == 1, "needs --kind ng --n 1");
    double eta = 1.0;
    if (name != "imbalanced") {
      need(name.size() > 12 && name[10] == '(' && name.back() == ')', "expected imbalanced(eta)");
      eta = parse_double(name.substr(11, name.size() - 12), "eta");
    }
    return ng_angles_to_program(ng_family_angles(NgFamily::Imbalanced, std::numbers::pi / 8, eta));
  }
  throw ArgumentError("unknown preset '" + name + "' (" + preset_help() + ")");
}

inline json program_json(const SoftwareState& s) {
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    re.push_back(r12(s[i].real()));
    im.push_back(r12(s[i].imag()));
  }
  return {{"real", re}, {"imag", im}};
}

inline json report_json(const FidelityReport& r) {
  json bases = json::array();
  for (const auto& b : r.bases) {
    json bob = json::array(), eve = json::array();
    for (double v : b.bob) bob.push_back(r12(v));
    for (double v : b.eve) eve.push_back(r12(v));
    bases.push_back(
        {{"label", b.label}, {"F_AB", r12(b.bob_avg)}, {"F_AE", r12(b.eve_avg)}, {"F_AB_states", bob}, {"F_AE_states", eve}});
  }
  return {{"bases", bases}, {"F_AB_avg", r12(r.bob_avg())}, {"F_AE_avg", r12(r.eve_avg())}};
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct FidelitiesArgs {
  std::string kind = "ng";
  int n = 1;
  std::string preset, amplitudes, imag, angles, ansatz_params, ansatz = "program-prep";
  std::string noise, bases, method = "sim", csv;
};

inline SoftwareState program_from(const FidelitiesArgs& a, ClonerKind kind) {
  const int sources = !a.preset.empty() + !a.amplitudes.empty() + !a.angles.empty() + !a.ansatz_params.empty();
  if (sources != 1) {
    throw ArgumentError("give exactly one of --preset, --amplitudes, --angles, --ansatz-params");
  }
  if (!a.preset.empty()) return preset_program(a.preset, kind, a.n);
  if (!a.angles.empty()) {
    const auto v = parse_list(a.angles, "angles");
    if (v.size() != 3) throw ArgumentError("--angles takes rho,phi,theta");
    if (a.n != 1) throw ArgumentError("--angles needs --n 1");
    return ng_angles_to_program({v[0], v[1], v[2]});
  }
  if (!a.ansatz_params.empty()) {
    const auto prog = ansatz_program({parse_ansatz(a.ansatz), parse_list(a.ansatz_params, "ansatz parameters")});
    if (prog.num_qubits() != a.n) throw ArgumentError("ansatz program does not match --n");
    return prog;
  }
  const auto re = parse_list(a.amplitudes, "amplitudes");
  std::vector<double> im(re.size(), 0.0);
  if (!a.imag.empty()) im = parse_list(a.imag, "imaginary parts");
  if (im.size() != re.size()) throw ArgumentError("--imag must match --amplitudes in length");
  CVector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) v[static_cast<Eigen::Index>(i)] = Complex(re[i], im[i]);
  SoftwareState s(v);
  if (s.num_qubits() != a.n) throw ArgumentError("amplitude count does not match 4^N");
  return s;
}

inline int cmd_fidelities(const FidelitiesArgs& a, std::ostream& out) {
  const ClonerKind kind = parse_kind(a.kind);
  if (a.n < 1) throw ArgumentError("--n must be >= 1");
  if (kind == ClonerKind::QID && a.n > 2) throw ArgumentError("QID exists only for N = 1, 2");
  const SoftwareState prog = program_from(a, kind);
  const PauliChannel ch = parse_channel(a.noise, a.n);

  std::vector<MubBasis> bases;
  if (a.n <= 2) {
    const auto set = mubs_for(a.n);
    if (a.bases.empty()) {
      bases = set.bases;
    } else {
      for (const auto& l : split(a.bases, ',')) bases.push_back(set.basis(l));
    }
  } else {
    if (!a.bases.empty()) throw ArgumentError("--bases is only available for N <= 2");
  }

  FidelityReport report;
  if (a.method == "sim") {
    if (a.n <= 2) {
      report = clone_fidelities(kind, a.n, prog, ch, bases);
    } else {
      // no MUB states beyond two qubits; report the computational basis
      MubBasis comp{"computational", {}};
      for (std::size_t k = 0; k < dimension_of(a.n); ++k) comp.states.push_back(basis_state(a.n, k));
      report = clone_fidelities(kind, a.n, prog, ch, {comp});
    }
  } else if (a.method == "analytic") {
    if (a.n == 1) {
      const auto clean = kind == ClonerKind::NG ? ng1q_fidelities(prog) : qid1q_fidelities(prog);
      for (const auto& b : bases) {
        const auto& c = clean.basis(b.label);
        report.add_uniform(b.label, 2, noisy_fidelity_1q(c.bob_avg, b.label[0], ch),
                           noisy_fidelity_1q(c.eve_avg, b.label[0], ch));
      }
    } else if (a.n == 2) {
      if (!ch.is_identity()) throw UnsupportedError("analytic two-qubit fidelities are noiseless only");
      const auto all = kind == ClonerKind::NG ? ng2q_fidelities(prog) : qid2q_fidelities(prog);
      for (const auto& b : bases) report.bases.push_back(all.basis(b.label));
    } else {
      throw UnsupportedError("analytic fidelities exist for N = 1, 2");
    }
  } else {
    throw ArgumentError("--method must be sim or analytic");
  }

  json j = {{"kind", a.kind}, {"n", a.n}, {"channel", ch.to_string()}, {"method", a.method},
            {"program", program_json(prog)}};
  j.update(report_json(report));
  out << j.dump(2) << "\n";

  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw ArgumentError("cannot open " + a.csv);
    f << "# pauli-cloner fidelities kind=" << a.kind << " n=" << a.n << " channel=" << ch.to_string()
      << " method=" << a.method << "\n";
    f << "basis,F_AB,F_AE\n";
    for (const auto& b : report.bases) f << b.label << "," << fmt(b.bob_avg) << "," << fmt(b.eve_avg) << "\n";
  }
  return 0;
}

inline int cmd_validate(int trials, std::uint64_t seed, std::ostream& out, const ValidationOptions* base = nullptr) {
  ValidationOptions opt = base ? *base : ValidationOptions{};
  opt.trials = trials;
  opt.seed = seed;
  const auto checks = run_validation(opt);
  bool ok = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " max_dev=" << fmt(c.max_deviation) << " tol=" << fmt(c.tolerance)
        << "\n";
    ok = ok && c.passed;
  }
  out << (ok ? "all checks passed" : "validation FAILED") << "\n";
  return ok ? 0 : 1;
}

struct SweepArgs {
  std::string task = "b92";
  std::string noise, f, series, pairs, out;
  std::uint64_t seed = 0;
  int steps = 100, restarts = 5, resolution = 64;
  double lr = 0.1;
};

inline SweepTask sweep_task(const SweepArgs& a) {
  SweepTask t;
  t.kind = parse_task(a.task);
  t.channel = parse_channel(a.noise, t.num_qubits());
  t.grid_resolution = a.resolution;
  if (!a.series.empty()) t.series = split(a.series, ',');
  if (!a.pairs.empty()) {
    if (t.kind != TaskKind::ReducedPairs) throw ArgumentError("--pairs only applies to --task pairs");
    for (const auto& p : split(a.pairs, ',')) {
      if (p.size() != 2 || !std::isdigit(static_cast<unsigned char>(p[0])) ||
          !std::isdigit(static_cast<unsigned char>(p[1]))) {
        throw ArgumentError("pairs are written as two digits, e.g. 01,34");
      }
      t.pairs.emplace_back(p[0] - '0', p[1] - '0');
    }
  }
  return t;
}

inline OptimizerConfig sweep_config(const SweepArgs& a) {
  OptimizerConfig c;
  c.learning_rate = a.lr;
  c.steps = a.steps;
  c.restarts = a.restarts;
  c.seed = a.seed;
  return c;
}

inline std::string default_f_range(TaskKind k) {
  return (k == TaskKind::Twenty || k == TaskKind::ReducedPairs) ? "0.25:1.0:0.05" : "0.5:1.0:0.02";
}

inline int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const SweepTask task = sweep_task(a);
  const std::string frange = a.f.empty() ? default_f_range(task.kind) : a.f;
  const auto fs = parse_range(frange);
  const OptimizerConfig cfg = sweep_config(a);
  const auto results = frontier_sweep(task, fs, cfg);

  const std::filesystem::path base = a.out.empty() ? std::filesystem::path(a.task + ".csv") : std::filesystem::path(a.out);
  for (const auto& r : results) {
    std::filesystem::path p = base;
    if (results.size() > 1) {
      p = base.parent_path() / (base.stem().string() + "_" + r.series + base.extension().string());
    }
    std::ofstream f(p);
    if (!f) throw ArgumentError("cannot open " + p.string());
    write_csv(f, r,
              {"pauli-cloner sweep", "task=" + a.task, "series=" + r.series, "method=" + r.method,
               "noise=" + task.channel.to_string(), "f=" + frange, "seed=" + std::to_string(a.seed),
               "steps=" + std::to_string(a.steps), "lr=" + fmt(a.lr), "restarts=" + std::to_string(a.restarts),
               "resolution=" + std::to_string(a.resolution)});
    out << "wrote " << p.string() << " (" << r.rows.size() << " rows)\n";
  }
  return 0;
}

inline int cmd_optimize(const SweepArgs& a, double f, std::ostream& out) {
  SweepTask task = sweep_task(a);
  if (task.series.size() > 1) throw ArgumentError("optimize takes a single --series");
  const auto results = frontier_sweep(task, {f}, sweep_config(a));
  json arr = json::array();
  for (const auto& r : results) {
    const auto& row = r.rows.front();
    json per = json::array();
    for (std::size_t i = 0; i < r.basis_labels.size(); ++i) {
      per.push_back({{"label", r.basis_labels[i]}, {"F_AB", r12(row.bob[i])}, {"F_AE", r12(row.eve[i])}});
    }
    json params = json::array();
    for (double p : row.params) params.push_back(r12(p));
    arr.push_back({{"series", r.series},
                   {"method", r.method},
                   {"f_target", r12(f)},
                   {"F_AB_avg", r12(row.F_AB_avg)},
                   {"F_AE_avg", r12(row.F_AE_avg)},
                   {"loss", r12(row.loss)},
                   {"bases", per},
                   {"params", params}});
  }
  out << arr.dump(2) << "\n";
  return 0;
}

inline std::string complex_str(Complex c) {
  if (std::abs(c.imag()) < 1e-15) return fmt(c.real());
  if (std::abs(c.real()) < 1e-15) return fmt(c.imag()) + "i";
  return fmt(c.real()) + (c.imag() < 0 ? "" : "+") + fmt(c.imag()) + "i";
}

inline int cmd_mubs(int n, bool check, std::ostream& out) {
  const auto set = mubs_for(n);
  for (const auto& b : set.bases) {
    out << b.label << ":\n";
    for (std::size_t k = 0; k < b.states.size(); ++k) {
      out << "  " << k << ": (";
      for (std::size_t i = 0; i < b.states[k].dimension(); ++i) out << (i ? ", " : "") << complex_str(b.states[k][i]);
      out << ")\n";
    }
  }
  if (!check) return 0;
  double dev = 0.0;
  const double target = 1.0 / static_cast<double>(dimension_of(n));
  for (std::size_t i = 0; i < set.bases.size(); ++i) {
    for (std::size_t j = i + 1; j < set.bases.size(); ++j) {
      for (const auto& x : set.bases[i].states) {
        for (const auto& y : set.bases[j].states) dev = std::max(dev, std::abs(std::norm(x.inner(y)) - target));
      }
    }
  }
  out << "max unbiasedness deviation " << fmt(dev) << "\n";
  return dev < 1e-12 ? 0 : 1;
}

inline int cmd_table(int n, std::ostream& out) {
  if (n == 1 || n == 2) {
    const auto t = action_table(n);
    out << "errors";
    for (const auto& c : t.column_labels) out << "\t" << c;
    out << "\n";
    for (std::size_t r = 0; r < t.cells.size(); ++r) {
      out << t.row_labels[r];
      for (int v : t.cells[r]) out << "\t" << v;
      out << "\n";
    }
    return 0;
  }
  const auto classes = commuting_classes(n);
  out << classes.size() << " classes of " << classes.front().size() << "\n";
  for (const auto& c : classes) {
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << c[i].letters();
    out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Exit codes: 0 success, 1 validation/optimizer failure, 2 usage error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Programmable Pauli cloners: fidelities, validation and optimization"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  FidelitiesArgs fa;
  auto* fid = app.add_subcommand("fidelities", "Per-basis Bob/Eve fidelities of a cloner program");
  fid->add_option("--kind", fa.kind, "ng or qid")->capture_default_str();
  fid->add_option("--n", fa.n, "qubits per register")->capture_default_str();
  fid->add_option("--preset", fa.preset, std::string("named program: ") + preset_help());
  fid->add_option("--amplitudes", fa.amplitudes, "comma-separated real parts of the program");
  fid->add_option("--imag", fa.imag, "comma-separated imaginary parts (with --amplitudes)");
  fid->add_option("--angles", fa.angles, "rho,phi,theta (N = 1)");
  fid->add_option("--ansatz-params", fa.ansatz_params, "comma-separated ansatz parameters");
  fid->add_option("--ansatz", fa.ansatz, "program-prep or ng-angles")->capture_default_str();
  fid->add_option("--noise", fa.noise, "channel, e.g. 'YI=0.45' or 'X=0.25,Z=0.1'");
  fid->add_option("--bases", fa.bases, "subset of basis labels, e.g. Z,X or M0,M3");
  fid->add_option("--method", fa.method, "sim or analytic")->capture_default_str();
  fid->add_option("--csv", fa.csv, "also write per-basis CSV here");

  int trials = 100;
  std::uint64_t vseed = 0;
  auto* val = app.add_subcommand("validate", "Run closed-form and structure checks against the simulator");
  val->add_option("--trials", trials, "random programs per check")->capture_default_str();
  val->add_option("--seed", vseed, "RNG seed")->capture_default_str();

  SweepArgs sa;
  auto add_sweep_opts = [&](CLI::App* c) {
    c->add_option("--task", sa.task, "b92 | bb84 | six | twenty | pairs")->capture_default_str();
    c->add_option("--noise", sa.noise, "channel spec");
    c->add_option("--series", sa.series, "comma-separated: qml, ng, qid, pccm, uqcm");
    c->add_option("--pairs", sa.pairs, "basis pairs for --task pairs, e.g. 01,34 (default all ten)");
    c->add_option("--seed", sa.seed, "master seed")->capture_default_str();
    c->add_option("--steps", sa.steps, "Adam steps")->capture_default_str();
    c->add_option("--lr", sa.lr, "Adam learning rate")->capture_default_str();
    c->add_option("--restarts", sa.restarts, "Adam restarts")->capture_default_str();
    c->add_option("--resolution", sa.resolution, "grid points per angle (b92)")->capture_default_str();
  };
  auto* sw = app.add_subcommand("sweep", "Optimize one row per target f and write CSV");
  add_sweep_opts(sw);
  sw->add_option("--f", sa.f, "targets a:b:step or a list (default per task)");
  sw->add_option("--out", sa.out, "CSV path; with several series, <stem>_<series>.csv");

  double f_single = 0.8;
  auto* opt = app.add_subcommand("optimize", "Optimize for a single target f and print JSON");
  add_sweep_opts(opt);
  opt->add_option("--f", f_single, "target F_AB")->capture_default_str();

  int mn = 2;
  bool check = false;
  auto* mubs = app.add_subcommand("mubs", "Print the mutually unbiased bases");
  mubs->add_option("--n", mn, "1 or 2")->capture_default_str();
  mubs->add_flag("--check", check, "verify unbiasedness");

  int tn = 2;
  auto* table = app.add_subcommand("table", "Pauli-action table (N = 1, 2) or commuting classes (N = 3)");
  table->add_option("--n", tn, "1, 2 or 3")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*fid) return cmd_fidelities(fa, out);
    if (*val) return cmd_validate(trials, vseed, out);
    if (*sw) return cmd_sweep(sa, out);
    if (*opt) return cmd_optimize(sa, f_single, out);
    if (*mubs) {
      if (mn != 1 && mn != 2) throw UnsupportedError("mubs: N must be 1 or 2");
      return cmd_mubs(mn, check, out);
    }
    if (*table) {
      if (tn < 1 || tn > 3) throw UnsupportedError("table: N must be 1, 2 or 3");
      return cmd_table(tn, out);
    }
  } catch (const OptimizerDivergence& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace pauli_cloner::cli
