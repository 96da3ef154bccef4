#pragma once

#include <cmath>
#include <sstream>

#include "qcell/layout_io.hpp"
#include "qcell/pauli.hpp"
#include "qcell/perturbation.hpp"

namespace qcell {

// Main-pipeline truncation: the total excitation cap must reach the qubit
// count so that the |11...1> computational state is admitted.
inline TruncationPolicy default_policy(const DeviceLayout& layout) {
  TruncationPolicy p;
  p.total_excitation_cap = static_cast<int>(layout.qubits.size());
  return p;
}

struct SolveOptions {
  std::optional<TruncationPolicy> policy;  // default_policy when absent
  LabelingOptions labeling;
  BlockDiagOptions blockdiag;
  bool rwa = true;
};

// Full exact path on one (sub-)layout: truncated basis, circuit Hamiltonian,
// diagonalization, dressed-state labeling, coupler elimination.
struct LayoutSolution {
  ModeBasis basis;
  OperatorMatrix hamiltonian;
  Spectrum spectrum;
  StateLabeling labeling;
  EffectiveQubitH eff;

  bool any_hybridized() const {
    for (bool h : eff.hybridized)
      if (h) return true;
    return false;
  }
};

inline LayoutSolution solve_layout(const DeviceLayout& layout,
                                   const SolveOptions& opts = {}) {
  LayoutSolution out;
  TruncationPolicy policy = opts.policy ? *opts.policy : default_policy(layout);
  out.basis = build_basis(layout, policy);
  out.hamiltonian = build_hamiltonian(layout, out.basis, opts.rwa);
  out.spectrum = eigensolve(out.hamiltonian);
  out.labeling = label_states(out.spectrum, out.basis, opts.labeling);
  out.eff = block_diagonalize(out.spectrum, out.basis, out.labeling,
                              opts.blockdiag);
  return out;
}

// Exchange and dressed frequencies from the single-excitation manifold only.
// Under the rotating-wave assembly that sector is exactly closed, so this is
// the exact J at a fraction of the cost; used heavily by calibration loops.
struct ExchangeView {
  EffectiveQubitH eff;

  double exchange(int qa, int qb) const { return eff.j_table.get(qa, 0, qb, 0); }

  double dressed_frequency(int q) const {
    Occupation vac(eff.n_qubits(), 0);
    Occupation one(eff.n_qubits(), 0);
    one[q] = 1;
    return eff.dressed_energy(one) - eff.dressed_energy(vac);
  }
};

inline ExchangeView solve_single_excitation(const DeviceLayout& layout) {
  TruncationPolicy p;
  p.total_excitation_cap = 1;
  SolveOptions opts;
  opts.policy = p;
  return ExchangeView{solve_layout(layout, opts).eff};
}

inline int qubit_ordinal(const DeviceLayout& layout, const std::string& id) {
  for (std::size_t q = 0; q < layout.qubits.size(); ++q)
    if (layout.qubits[q].id == id) return static_cast<int>(q);
  throw Error("unknown qubit '" + id + "'");
}

// ---- truncation convergence ----------------------------------------------

struct ConvergenceRow {
  std::string policy_desc;
  std::string quantity;
  double value_mhz = 0.0;
  double drift_mhz = 0.0;  // vs the previous policy; 0 for the first row
  bool first = true;
};

inline std::string describe_policy(const TruncationPolicy& p) {
  std::ostringstream os;
  os << "caps{";
  bool comma = false;
  for (const auto& [id, n] : p.level_caps) {
    if (comma) os << ",";
    os << id << ":" << n;
    comma = true;
  }
  os << "}";
  if (p.total_excitation_cap) os << " total<=" << *p.total_excitation_cap;
  return os.str();
}

// Reports the drift of dressed computational energies between successive
// truncation policies.  Default probes: every single-excitation state plus
// the first two-excitation pair.
inline std::vector<ConvergenceRow> convergence_check(
    const DeviceLayout& layout, const std::vector<TruncationPolicy>& policies,
    std::vector<Occupation> probes = {}) {
  if (policies.size() < 2)
    throw Error("convergence_check needs at least two policies");
  const int nq = static_cast<int>(layout.qubits.size());
  if (probes.empty()) {
    for (int q = 0; q < nq; ++q) {
      Occupation s(nq, 0);
      s[q] = 1;
      probes.push_back(s);
    }
    if (nq >= 2) {
      Occupation s(nq, 0);
      s[0] = s[1] = 1;
      probes.push_back(s);
    }
  }

  std::vector<ConvergenceRow> rows;
  std::vector<double> previous(probes.size(), 0.0);
  bool have_previous = false;
  for (const auto& policy : policies) {
    SolveOptions opts;
    opts.policy = policy;
    LayoutSolution sol = solve_layout(layout, opts);
    Occupation vac(nq, 0);
    const double e0 = sol.eff.dressed_energy(vac);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      double v = sol.eff.dressed_energy(probes[i]) - e0;
      ConvergenceRow row;
      row.policy_desc = describe_policy(policy);
      row.quantity = "E(" + ModeBasis::occ_string(probes[i]) + ")";
      row.value_mhz = v;
      row.first = !have_previous;
      row.drift_mhz = have_previous ? std::abs(v - previous[i]) : 0.0;
      previous[i] = v;
      rows.push_back(row);
    }
    have_previous = true;
  }
  return rows;
}

}  // namespace qcell
