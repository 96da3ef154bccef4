#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "qcell/effective.hpp"

namespace qcell {

// Diagonal-frame Pauli string: Z on the qubits in z_mask, identity elsewhere.
// Qubit 0 is the first character of the rendered string.
struct PauliString {
  int n_qubits = 0;
  std::uint32_t z_mask = 0;

  static PauliString from_string(const std::string& s) {
    PauliString p;
    p.n_qubits = static_cast<int>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == 'Z')
        p.z_mask |= (1u << i);
      else if (s[i] != 'I')
        throw Error("Pauli string may contain only Z and I: '" + s + "'");
    }
    return p;
  }

  std::string str() const {
    std::string s(n_qubits, 'I');
    for (int i = 0; i < n_qubits; ++i)
      if (z_mask & (1u << i)) s[i] = 'Z';
    return s;
  }

  int weight() const { return std::popcount(z_mask); }

  // Parity rule: a factor (-1) for every Z-carrying qubit in |1>.
  int sign(std::uint32_t occupation_mask) const {
    return (std::popcount(z_mask & occupation_mask) & 1) ? -1 : 1;
  }

  bool operator<(const PauliString& o) const {
    return std::tie(n_qubits, z_mask) < std::tie(o.n_qubits, o.z_mask);
  }
  bool operator==(const PauliString& o) const {
    return n_qubits == o.n_qubits && z_mask == o.z_mask;
  }
};

// alpha_P = 2^-N sum_s sign_P(s) E_s over the complete computational table;
// with this normalization H = sum_P alpha_P P reproduces the energies.
inline std::map<std::uint32_t, double> parity_transform(
    const std::vector<double>& energy_by_mask, int n_qubits) {
  const std::uint32_t dim = 1u << n_qubits;
  if (energy_by_mask.size() != dim)
    throw Error("parity_transform needs all 2^N computational energies");
  std::map<std::uint32_t, double> alpha;
  const double norm = 1.0 / static_cast<double>(dim);
  for (std::uint32_t p = 0; p < dim; ++p) {
    double acc = 0.0;
    for (std::uint32_t s = 0; s < dim; ++s) {
      acc += ((std::popcount(p & s) & 1) ? -1.0 : 1.0) * energy_by_mask[s];
    }
    alpha[p] = acc * norm;
  }
  return alpha;
}

// Inverse direction, for the completeness invariant.
inline double reconstruct_energy(const std::map<std::uint32_t, double>& alpha,
                                 std::uint32_t s) {
  double e = 0.0;
  for (const auto& [p, a] : alpha)
    e += ((std::popcount(p & s) & 1) ? -1.0 : 1.0) * a;
  return e;
}

struct PauliCoefficients {
  int n_qubits = 0;
  std::map<std::uint32_t, double> alpha_mhz;  // by z-mask
  std::string convention = "alpha=2^-N*parity_sum";

  double get(std::uint32_t mask) const {
    auto it = alpha_mhz.find(mask);
    return it == alpha_mhz.end() ? 0.0 : it->second;
  }
  double get(const PauliString& p) const { return get(p.z_mask); }

  // spectroscopic value: the parity sum without the 2^-N prefactor
  double zeta(std::uint32_t mask) const {
    return get(mask) * static_cast<double>(1u << n_qubits);
  }

  double max_abs_of_weight(int w) const {
    double best = 0.0;
    for (const auto& [mask, a] : alpha_mhz)
      if (std::popcount(mask) == w) best = std::max(best, std::abs(a));
    return best;
  }

  PauliString dominant_of_weight(int w) const {
    PauliString best{n_qubits, 0};
    double amax = -1.0;
    for (const auto& [mask, a] : alpha_mhz)
      if (std::popcount(mask) == w && std::abs(a) > amax) {
        amax = std::abs(a);
        best.z_mask = mask;
      }
    return best;
  }

  void write_csv(std::ostream& out) const {
    out << "string,z_mask,alpha_MHz,zeta_MHz,convention\n";
    out.precision(12);
    for (const auto& [mask, a] : alpha_mhz) {
      PauliString p{n_qubits, mask};
      out << p.str() << "," << mask << "," << a << "," << zeta(mask) << ","
          << convention << "\n";
    }
  }
};

// Computational energies of the coupler-free qubit Hamiltonian: diagonalize
// the multilevel block, re-label, and read off the 2^N manifold.
inline std::vector<double> computational_energies(
    const EffectiveQubitH& eff, const LabelingOptions& lab_opts = {}) {
  const int nq = eff.n_qubits();
  Spectrum spec = eigensolve(OperatorMatrix::from_dense(eff.h));
  StateLabeling lab = label_states(spec, eff.qubit_basis, lab_opts);

  const std::uint32_t dim = 1u << nq;
  std::vector<double> energy(dim, 0.0);
  for (std::uint32_t s = 0; s < dim; ++s) {
    Occupation occ(nq, 0);
    for (int q = 0; q < nq; ++q)
      if (s & (1u << q)) occ[q] = 1;
    auto idx = eff.qubit_basis.find_state(occ);
    if (!idx)
      throw SolverError("missing dressed energy for computational state " +
                        ModeBasis::occ_string(occ) +
                        " (raise the excitation cap)");
    if (!lab.covered(*idx))
      throw SolverError("labeling does not cover computational state " +
                        ModeBasis::occ_string(occ));
    energy[s] = lab.energy_of(spec, *idx);
  }
  return energy;
}

inline PauliCoefficients pauli_coefficients(const EffectiveQubitH& eff,
                                            int max_weight = 3) {
  const int nq = eff.n_qubits();
  auto energies = computational_energies(eff);
  auto all = parity_transform(energies, nq);

  PauliCoefficients out;
  out.n_qubits = nq;
  for (const auto& [mask, a] : all)
    if (std::popcount(mask) <= max_weight) out.alpha_mhz[mask] = a;
  return out;
}

inline double coefficient(const EffectiveQubitH& eff, const PauliString& p) {
  if (p.n_qubits != eff.n_qubits())
    throw Error("Pauli string length does not match the qubit count");
  auto energies = computational_energies(eff);
  const std::uint32_t dim = 1u << eff.n_qubits();
  double acc = 0.0;
  for (std::uint32_t s = 0; s < dim; ++s) acc += p.sign(s) * energies[s];
  return acc / static_cast<double>(dim);
}

}  // namespace qcell
