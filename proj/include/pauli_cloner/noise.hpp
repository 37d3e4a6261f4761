// Pauli channels: validation, Kraus application, and the affine fidelity
// transforms for single-qubit bases.
#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pauli_cloner/mub.hpp"
#include "pauli_cloner/simcore.hpp"

namespace pauli_cloner {

/// Probability map over non-identity Pauli strings; the identity carries
/// whatever mass is left.
class PauliChannel {
 public:
  explicit PauliChannel(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1) throw ArgumentError("PauliChannel: num_qubits must be >= 1");
  }

  PauliChannel(int num_qubits, const std::map<PauliString, double>& probs) : PauliChannel(num_qubits) {
    for (const auto& [p, w] : probs) set(p, w);
  }

  static PauliChannel identity(int n) { return PauliChannel(n); }

  /// Sets the probability of one error string (identity is rejected; its
  /// probability is always the residual).
  PauliChannel& set(const PauliString& p, double prob) {
    if (p.size() != num_qubits_) throw ArgumentError("PauliChannel: string " + p.letters() + " has wrong length");
    if (p.is_identity()) throw ArgumentError("PauliChannel: identity probability is implied by the residual");
    if (!(prob >= 0.0 && prob <= 1.0)) throw ArgumentError("PauliChannel: probability outside [0,1]");
    double total = prob;
    for (const auto& [q, w] : probs_) {
      if (q != p) total += w;
    }
    if (total > 1.0 + 1e-12) throw ArgumentError("PauliChannel: error probabilities sum above 1");
    if (prob == 0.0) {
      probs_.erase(p);
    } else {
      probs_[p] = prob;
    }
    return *this;
  }

  int num_qubits() const { return num_qubits_; }

  double probability(const PauliString& p) const {
    if (p.size() != num_qubits_) throw ArgumentError("PauliChannel: string has wrong length");
    if (p.is_identity()) return identity_probability();
    auto it = probs_.find(p);
    return it == probs_.end() ? 0.0 : it->second;
  }

  double identity_probability() const {
    double s = 0.0;
    for (const auto& [p, w] : probs_) s += w;
    return std::max(0.0, 1.0 - s);
  }

  /// Kraus terms with nonzero weight, identity first.
  std::vector<std::pair<PauliString, double>> terms() const {
    std::vector<std::pair<PauliString, double>> out;
    const double pi = identity_probability();
    if (pi > 0.0) out.emplace_back(PauliString::identity(num_qubits_), pi);
    for (const auto& [p, w] : probs_) out.emplace_back(p, w);
    return out;
  }

  const std::map<PauliString, double>& errors() const { return probs_; }
  bool is_identity() const { return probs_.empty(); }

  std::string to_string() const {
    if (probs_.empty()) return "none";
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    for (const auto& [p, w] : probs_) {
      os << (first ? "" : ",") << p.letters() << "=" << w;
      first = false;
    }
    return os.str();
  }

 private:
  int num_qubits_;
  std::map<PauliString, double> probs_;
};

inline PauliChannel channel_with_single_error(int n, const PauliString& pauli, double p) {
  PauliChannel ch(n);
  if (pauli.is_identity()) throw ArgumentError("channel_with_single_error: identity is not an error");
  ch.set(pauli, p);
  return ch;
}

/// Grammar: comma-separated `PAULISTRING=prob`, whitespace ignored. An empty
/// spec (or "none") is the identity channel.
inline PauliChannel parse_channel(const std::string& spec, int num_qubits) {
  std::string s;
  for (char c : spec) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  PauliChannel ch(num_qubits);
  if (s.empty() || s == "none") return ch;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ArgumentError("parse_channel: empty entry in '" + spec + "'");
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ArgumentError("parse_channel: expected PAULI=prob, got '" + item + "'");
    const PauliString p(item.substr(0, eq));
    if (p.size() != num_qubits) {
      throw ArgumentError("parse_channel: '" + p.letters() + "' does not act on " + std::to_string(num_qubits) +
                          " qubit(s)");
    }
    if (ch.probability(p) != 0.0) throw ArgumentError("parse_channel: duplicate entry " + p.letters());
    double prob = 0.0;
    try {
      std::size_t used = 0;
      prob = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ArgumentError("parse_channel: bad probability in '" + item + "'");
    }
    ch.set(p, prob);
  }
  return ch;
}

inline DensityMatrix apply_channel(const DensityMatrix& rho, const PauliChannel& ch) {
  if (rho.num_qubits() != ch.num_qubits()) throw ArgumentError("apply_channel: dimension mismatch");
  const Eigen::Index d = rho.matrix().rows();
  CMatrix out = CMatrix::Zero(d, d);
  for (const auto& [p, w] : ch.terms()) {
    const CMatrix m = p.matrix();
    out += w * m * rho.matrix() * m.adjoint();
  }
  return DensityMatrix::trusted(rho.num_qubits(), std::move(out));
}

/// Noisy fidelity in a single-qubit basis given the noiseless value.
inline double noisy_fidelity_1q(double F, char basis, double p_x, double p_y, double p_z) {
  for (double p : {p_x, p_y, p_z}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("noisy_fidelity_1q: probability outside [0,1]");
  }
  if (p_x + p_y + p_z > 1.0 + 1e-12) throw ArgumentError("noisy_fidelity_1q: probabilities sum above 1");
  if (!(F >= -1e-12 && F <= 1.0 + 1e-12)) throw ArgumentError("noisy_fidelity_1q: fidelity outside [0,1]");
  double flip = 0.0;
  switch (basis) {
    case 'X': flip = p_y + p_z; break;
    case 'Y': flip = p_x + p_z; break;
    case 'Z': flip = p_x + p_y; break;
    default: throw ArgumentError(std::string("noisy_fidelity_1q: unknown basis '") + basis + "'");
  }
  return F * (1.0 - 2.0 * flip) + flip;
}

inline double noisy_fidelity_1q(double F, char basis, const PauliChannel& ch) {
  if (ch.num_qubits() != 1) throw ArgumentError("noisy_fidelity_1q: channel must act on one qubit");
  return noisy_fidelity_1q(F, basis, ch.probability(PauliString("X")), ch.probability(PauliString("Y")),
                           ch.probability(PauliString("Z")));
}

}  // namespace pauli_cloner
