#pragma once

#include <cmath>
#include <ostream>
#include <vector>

#include "qcell/effective.hpp"
#include "qcell/pauli.hpp"

namespace qcell {

struct PerturbationOptions {
  double resonance_floor_mhz = 1.0;  // |Delta| below this flags the result
  double nonperturbative_ratio = 0.5;
};

struct PerturbativeValue {
  double value_mhz = 0.0;
  bool resonant = false;
  operator double() const { return value_mhz; }
};

// Eq.-style dispersive estimate of the qubit-qubit exchange through one
// coupler:  J = G_pq + (G_pC G_qC / 2) (1/Delta_p + 1/Delta_q) with
// Delta_x = f_x - omega_C (qubit minus coupler, so a coupler parked above
// the qubits cancels a positive direct coupling and a hard-OFF root exists).
inline double perturbative_j(double g_pq, double g_pc, double g_qc,
                             double omega_c, double f_p, double f_q) {
  const double dp = f_p - omega_c;
  const double dq = f_q - omega_c;
  if (dp == 0.0 || dq == 0.0)
    throw SolverError("resonant coupler: use exact path");
  return g_pq + 0.5 * g_pc * g_qc * (1.0 / dp + 1.0 / dq);
}

// Level-dependent Eq.-1 estimates for every coupled qubit pair: the direct
// link plus one virtual term per shared coupler, with the detunings taken at
// the transition frequencies of the levels involved.
inline LevelJTable eq1_j_table(const DeviceLayout& layout,
                               const QubitLevelTable& levels) {
  const int nq = levels.n_qubits();
  LevelJTable jt(nq);
  auto qidx = [&](const std::string& id) {
    for (int q = 0; q < nq; ++q)
      if (levels.ids[q] == id) return q;
    return -1;
  };

  for (int a = 0; a < nq; ++a) {
    for (int b = a + 1; b < nq; ++b) {
      double g_direct = layout.strength(levels.ids[a], levels.ids[b]);
      std::vector<const CouplerSpec*> shared;
      for (const auto& c : layout.couplers)
        if (layout.has_edge(levels.ids[a], c.id) &&
            layout.has_edge(levels.ids[b], c.id))
          shared.push_back(&c);
      if (g_direct == 0.0 && shared.empty()) continue;
      for (int ta = 0; ta + 1 < levels.n_levels(a); ++ta) {
        for (int tb = 0; tb + 1 < levels.n_levels(b); ++tb) {
          double j = g_direct;
          for (const auto* c : shared) {
            double gac = layout.strength(levels.ids[a], c->id);
            double gbc = layout.strength(levels.ids[b], c->id);
            double da = levels.transition(a, ta) - c->freq_mhz;
            double db = levels.transition(b, tb) - c->freq_mhz;
            if (da == 0.0 || db == 0.0)
              throw SolverError("resonant coupler: use exact path");
            j += 0.5 * gac * gbc * (1.0 / da + 1.0 / db);
          }
          jt.set(a, ta, b, tb, j);
        }
      }
    }
  }
  (void)qidx;
  return jt;
}

// One closed virtual-transition loop: it starts at a marked computational
// level, hops through p-1 intermediate levels exchanging one excitation per
// step, and returns.  Reverse traversals are folded into symmetry_factor.
struct DiagramHop {
  int from_qubit = 0;
  int to_qubit = 0;
  int from_transition = 0;  // occupancy of from_qubit drops t+1 -> t
  int to_transition = 0;    // occupancy of to_qubit rises t -> t+1
};

struct Diagram {
  Occupation marked;
  std::vector<Occupation> path;  // intermediate levels, in hop order
  std::vector<DiagramHop> hops;  // size = order
  int sign = 1;                  // parity rule of the evaluated string
  int symmetry_factor = 1;       // 2 unless the loop is palindromic
};

inline std::vector<Diagram> enumerate_diagrams(const PauliString& s, int order,
                                               const std::vector<int>& levels) {
  if (order < 2) throw Error("perturbative order must be >= 2");
  if (s.weight() < 2) throw Error("Pauli string weight must be >= 2");
  const int nq = s.n_qubits;
  if (static_cast<int>(levels.size()) != nq)
    throw Error("levels context does not match the string length");

  std::vector<Diagram> out;
  Occupation marked(nq, 0), cur(nq, 0);
  std::vector<Occupation> path;
  std::vector<DiagramHop> hops;

  std::function<void(int)> dfs = [&](int depth) {
    if (depth == order) {
      if (cur != marked) return;
      // canonical traversal: intermediates not lexicographically above the
      // reversed order; palindromes count once
      std::vector<Occupation> rev(path.rbegin(), path.rend());
      if (path > rev) return;
      Diagram d;
      d.marked = marked;
      d.path = path;
      d.hops = hops;
      d.symmetry_factor = (path == rev) ? 1 : 2;
      std::uint32_t mask = 0;
      for (int q = 0; q < nq; ++q)
        if (marked[q]) mask |= (1u << q);
      d.sign = s.sign(mask);
      out.push_back(std::move(d));
      return;
    }
    for (int a = 0; a < nq; ++a) {
      if (cur[a] == 0) continue;
      for (int b = 0; b < nq; ++b) {
        if (b == a || cur[b] + 1 >= levels[b]) continue;
        DiagramHop hop{a, b, cur[a] - 1, cur[b]};
        cur[a] -= 1;
        cur[b] += 1;
        bool is_last = (depth == order - 1);
        bool home = (cur == marked);
        if (is_last == home) {  // intermediates differ from the marked level
          hops.push_back(hop);
          if (!is_last) path.push_back(cur);
          dfs(depth + 1);
          if (!is_last) path.pop_back();
          hops.pop_back();
        }
        cur[a] += 1;
        cur[b] -= 1;
      }
    }
  };

  for (std::uint32_t mask = 0; mask < (1u << nq); ++mask) {
    for (int q = 0; q < nq; ++q)
      marked[q] = cur[q] = (mask & (1u << q)) ? 1 : 0;
    dfs(0);
  }
  return out;
}

struct DiagramEvaluation {
  double value_mhz = 0.0;  // sign * symmetry * prod(J) / prod(gaps)
  bool resonant = false;
  double max_j_over_delta = 0.0;
};

// Evaluation rules: ladder prefactors sqrt((m+1)(n+1)) from the transition
// indices, parity sign, division by the gaps between the marked level and
// every intermediate level.
inline DiagramEvaluation evaluate_diagram(const Diagram& d,
                                          const LevelJTable& jt,
                                          const QubitLevelTable& levels,
                                          const PerturbationOptions& opts = {}) {
  DiagramEvaluation ev;
  double amp = 1.0;
  for (const auto& h : d.hops) {
    double ladder =
        std::sqrt((h.from_transition + 1.0) * (h.to_transition + 1.0));
    amp *= ladder * jt.get(h.from_qubit, h.from_transition, h.to_qubit,
                           h.to_transition);
  }
  const double e_marked = levels.state_energy(d.marked);
  double denom = 1.0;
  for (std::size_t k = 0; k < d.path.size(); ++k) {
    double gap = e_marked - levels.state_energy(d.path[k]);
    if (std::abs(gap) < opts.resonance_floor_mhz) ev.resonant = true;
    if (gap == 0.0) {  // exactly degenerate; flagged, contribution dropped
      ev.value_mhz = 0.0;
      return ev;
    }
    double hop_amp = std::sqrt((d.hops[k].from_transition + 1.0) *
                               (d.hops[k].to_transition + 1.0)) *
                     jt.get(d.hops[k].from_qubit, d.hops[k].from_transition,
                            d.hops[k].to_qubit, d.hops[k].to_transition);
    ev.max_j_over_delta =
        std::max(ev.max_j_over_delta, std::abs(hop_amp / gap));
    denom *= gap;
  }
  ev.value_mhz = d.sign * d.symmetry_factor * amp / denom;
  return ev;
}

struct PerturbativeResult {
  PauliString string;
  int order = 0;
  double value_mhz = 0.0;  // 2^-N normalized, matching pauli_coefficients
  std::vector<std::pair<Diagram, double>> terms;  // normalized contributions
  bool non_perturbative = false;
  bool resonant = false;

  void dump(std::ostream& out) const {
    out << "# string=" << string.str() << " order=" << order
        << " value_MHz=" << value_mhz << " (2^-N normalized)\n";
    out << "# marked | path | sign*sym | contribution_MHz\n";
    for (const auto& [d, v] : terms) {
      out << ModeBasis::occ_string(d.marked) << " | ";
      for (std::size_t i = 0; i < d.path.size(); ++i) {
        if (i) out << " -> ";
        out << ModeBasis::occ_string(d.path[i]);
      }
      out << " | " << d.sign * d.symmetry_factor << " | " << v << "\n";
    }
  }
};

// Parity-weighted sum of Rayleigh-Schrodinger order-p corrections over every
// marked computational level, evaluated by diagram enumeration.  Valid for
// p = 2 and p = 3, where the loop expansion is the complete correction
// (the J-hop perturbation carries no diagonal part).
inline PerturbativeResult generic_pauli_order(const PauliString& s, int order,
                                              const LevelJTable& jt,
                                              const QubitLevelTable& levels,
                                              const PerturbationOptions& opts = {}) {
  if (order < 2 || order > 3)
    throw Error("generic_pauli_order supports orders 2 and 3");
  std::vector<int> caps;
  for (int q = 0; q < levels.n_qubits(); ++q) caps.push_back(levels.n_levels(q));

  PerturbativeResult res;
  res.string = s;
  res.order = order;
  const double norm = 1.0 / static_cast<double>(1u << s.n_qubits);
  for (auto& d : enumerate_diagrams(s, order, caps)) {
    DiagramEvaluation ev = evaluate_diagram(d, jt, levels, opts);
    if (ev.value_mhz == 0.0 && !ev.resonant) continue;
    res.resonant = res.resonant || ev.resonant;
    res.non_perturbative = res.non_perturbative || ev.resonant ||
                           ev.max_j_over_delta > opts.nonperturbative_ratio;
    double contrib = ev.value_mhz * norm;
    res.value_mhz += contrib;
    res.terms.emplace_back(std::move(d), contrib);
  }
  return res;
}

// ---- closed forms --------------------------------------------------------
// All closed forms return the 2^-N normalized coefficient so they compare
// directly against generic_pauli_order and the exact parity sums.

namespace pert_detail {

inline bool guard(double delta, double floor, bool& flag) {
  if (std::abs(delta) < floor) flag = true;
  return delta != 0.0;
}

}  // namespace pert_detail

// Second-order ZZ: the sqrt(2) ladder prefactors on the overlined exchanges
// are applied here, at evaluation; the table stores bare values.
inline PerturbativeValue alpha_zz_2nd(int i, int j, const LevelJTable& jt,
                                      const QubitLevelTable& levels,
                                      const PerturbationOptions& opts = {}) {
  PerturbativeValue out;
  const double sqrt2 = std::sqrt(2.0);
  double a_up = sqrt2 * jt.get(i, 0, j, 1);  // |11> -> |02>
  double a_dn = sqrt2 * jt.get(i, 1, j, 0);  // |11> -> |20>
  double d_up = levels.squeezed_delta(i, 0, j, 1);
  double d_dn = levels.squeezed_delta(i, 1, j, 0);
  if (!pert_detail::guard(d_up, opts.resonance_floor_mhz, out.resonant) ||
      !pert_detail::guard(d_dn, opts.resonance_floor_mhz, out.resonant))
    return out;
  out.value_mhz = 0.25 * (a_up * a_up / d_up - a_dn * a_dn / d_dn);
  return out;
}

// Third-order ZZ with a sum over intermediate qubits k.  Uniform combined
// coefficients: the sub-two-excitation manifolds double the four leading
// structures, so every structure enters with weight one after the 2^-N
// normalization.
inline PerturbativeValue alpha_zz_3rd(int i, int j, const LevelJTable& jt,
                                      const QubitLevelTable& levels,
                                      const std::vector<int>& spectators,
                                      const PerturbationOptions& opts = {}) {
  PerturbativeValue out;
  const double floor = opts.resonance_floor_mhz;
  for (int k : spectators) {
    if (k == i || k == j) continue;
    const double j_ij = jt.get(i, 0, j, 0);
    const double j_ik = jt.get(i, 0, k, 0);
    const double j_jk = jt.get(j, 0, k, 0);
    const double j_ikb = jt.get(i, 0, k, 1);
    const double j_jkb = jt.get(j, 0, k, 1);
    const double j_ibj = jt.get(i, 1, j, 0);
    const double j_ibk = jt.get(i, 1, k, 0);
    const double j_ijb = jt.get(i, 0, j, 1);
    const double j_jbk = jt.get(j, 1, k, 0);
    const double j_ibjb = jt.get(i, 1, j, 1);
    const double j_ibkb = jt.get(i, 1, k, 1);
    const double j_kbj = jt.get(k, 1, j, 0);
    const double j_jbkb = jt.get(j, 1, k, 1);
    const double j_jbi = jt.get(j, 1, i, 0);
    const double j_kbi = jt.get(k, 1, i, 0);

    const double d_ik = levels.squeezed_delta(i, 0, k, 0);
    const double d_jk = levels.squeezed_delta(j, 0, k, 0);
    const double d_ikb = levels.squeezed_delta(i, 0, k, 1);
    const double d_jkb = levels.squeezed_delta(j, 0, k, 1);
    const double d_ibk = levels.squeezed_delta(i, 1, k, 0);
    const double d_jbk = levels.squeezed_delta(j, 1, k, 0);
    const double d_ibj = levels.squeezed_delta(i, 1, j, 0);
    const double d_kbj = levels.squeezed_delta(k, 1, j, 0);
    const double d_jbi = levels.squeezed_delta(j, 1, i, 0);
    const double d_kbi = levels.squeezed_delta(k, 1, i, 0);

    for (double d : {d_ik, d_jk, d_ikb, d_jkb, d_ibk, d_jbk, d_ibj, d_kbj,
                     d_jbi, d_kbi})
      if (!pert_detail::guard(d, floor, out.resonant)) return out;

    out.value_mhz += j_ij * j_ik * j_jk / (d_ik * d_jk) +
                     j_ij * j_ikb * j_jkb / (d_ikb * d_jkb) -
                     j_ibj * j_ibk * j_jk / (d_ibk * d_jk) -
                     j_ijb * j_ik * j_jbk / (d_ik * d_jbk) +
                     j_ibjb * j_ibk * j_jbk / (d_ibk * d_jbk) +
                     j_ibkb * j_ibj * j_kbj / (d_ibj * d_kbj) +
                     j_jbkb * j_jbi * j_kbi / (d_jbi * d_kbi);
  }
  return out;
}

// Third-order ZZZ, the six-structure display with the overall minus sign.
inline PerturbativeValue alpha_zzz_3rd(int i, int j, int k,
                                       const LevelJTable& jt,
                                       const QubitLevelTable& levels,
                                       const PerturbationOptions& opts = {}) {
  PerturbativeValue out;
  const double floor = opts.resonance_floor_mhz;

  const double d_ikb = levels.squeezed_delta(i, 0, k, 1);
  const double d_jkb = levels.squeezed_delta(j, 0, k, 1);
  const double d_ijb = levels.squeezed_delta(i, 0, j, 1);
  const double d_kjb = levels.squeezed_delta(k, 0, j, 1);
  const double d_jib = levels.squeezed_delta(j, 0, i, 1);
  const double d_kib = levels.squeezed_delta(k, 0, i, 1);
  const double d_ibk = levels.squeezed_delta(i, 1, k, 0);
  const double d_jbk = levels.squeezed_delta(j, 1, k, 0);
  const double d_ibj = levels.squeezed_delta(i, 1, j, 0);
  const double d_kbj = levels.squeezed_delta(k, 1, j, 0);
  const double d_jbi = levels.squeezed_delta(j, 1, i, 0);
  const double d_kbi = levels.squeezed_delta(k, 1, i, 0);

  for (double d : {d_ikb, d_jkb, d_ijb, d_kjb, d_jib, d_kib, d_ibk, d_jbk,
                   d_ibj, d_kbj, d_jbi, d_kbi})
    if (!pert_detail::guard(d, floor, out.resonant)) return out;

  const double u1 = jt.get(i, 0, j, 0) * jt.get(i, 0, k, 1) *
                    jt.get(j, 0, k, 1) / (d_ikb * d_jkb);
  const double u2 = jt.get(i, 0, k, 0) * jt.get(i, 0, j, 1) *
                    jt.get(k, 0, j, 1) / (d_ijb * d_kjb);
  const double u3 = jt.get(j, 0, k, 0) * jt.get(j, 0, i, 1) *
                    jt.get(k, 0, i, 1) / (d_jib * d_kib);
  const double u4 = jt.get(i, 1, j, 1) * jt.get(i, 1, k, 0) *
                    jt.get(j, 1, k, 0) / (d_ibk * d_jbk);
  const double u5 = jt.get(i, 1, k, 1) * jt.get(i, 1, j, 0) *
                    jt.get(k, 1, j, 0) / (d_ibj * d_kbj);
  const double u6 = jt.get(j, 1, k, 1) * jt.get(j, 1, i, 0) *
                    jt.get(k, 1, i, 0) / (d_jbi * d_kbi);

  out.value_mhz = -(u1 + u2 + u3 + u4 + u5 + u6);
  return out;
}

}  // namespace qcell
