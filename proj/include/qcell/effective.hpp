#pragma once

#include <map>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "qcell/labeling.hpp"

namespace qcell {

// Level-dependent exchange rates between qubits a and b.  Transition index
// t means the (t+1 <-> t) transition, so t = 0 is the computational one and
// t = 1 carries one overline.  Entries store the bare J; ladder prefactors
// sqrt((m+1)(n+1)) are applied where amplitudes are evaluated, never here.
class LevelJTable {
 public:
  LevelJTable() = default;
  explicit LevelJTable(int n_qubits) : n_(n_qubits) {}

  int n_qubits() const { return n_; }

  double get(int a, int ta, int b, int tb) const {
    auto it = entries_.find(key(a, ta, b, tb));
    return it == entries_.end() ? 0.0 : it->second;
  }

  void set(int a, int ta, int b, int tb, double j_mhz) {
    entries_[key(a, ta, b, tb)] = j_mhz;
  }

  bool has(int a, int ta, int b, int tb) const {
    return entries_.count(key(a, ta, b, tb)) > 0;
  }

  void scale(double factor) {
    for (auto& [k, v] : entries_) v *= factor;
  }

  const std::map<std::tuple<int, int, int, int>, double>& entries() const {
    return entries_;
  }

 private:
  static std::tuple<int, int, int, int> key(int a, int ta, int b, int tb) {
    if (a <= b) return {a, b, ta, tb};
    return {b, a, tb, ta};
  }
  int n_ = 0;
  std::map<std::tuple<int, int, int, int>, double> entries_;
};

// Per-qubit level energies (MHz) used for perturbation denominators; either
// bare (from the layout) or dressed (from a block-diagonalized solve).
struct QubitLevelTable {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> level_energy;  // E(n), E(0) = 0

  int n_qubits() const { return static_cast<int>(ids.size()); }
  int n_levels(int q) const { return static_cast<int>(level_energy[q].size()); }

  double transition(int q, int t) const {
    return level_energy[q][t + 1] - level_energy[q][t];
  }

  // Squeezed-denominator symbol: Delta = f_a^(ta) - f_b^(tb), overlines
  // encoded as transition indices.
  double squeezed_delta(int a, int ta, int b, int tb) const {
    return transition(a, ta) - transition(b, tb);
  }

  double state_energy(const Occupation& occ) const {
    double e = 0.0;
    for (int q = 0; q < n_qubits(); ++q) e += level_energy[q][occ[q]];
    return e;
  }
};

inline QubitLevelTable bare_qubit_levels(const DeviceLayout& layout,
                                         const TruncationPolicy& policy = {}) {
  QubitLevelTable t;
  for (const auto& q : layout.qubits) {
    t.ids.push_back(q.id);
    std::vector<double> e;
    int levels = policy.levels_for(q.id, q.n_levels);
    for (int n = 0; n < levels; ++n) e.push_back(q.level_energy(n));
    t.level_energy.push_back(std::move(e));
  }
  return t;
}

// Coupler-free multilevel qubit Hamiltonian: the least-action block of the
// full circuit Hamiltonian expressed over bare qubit occupations.
struct EffectiveQubitH {
  ModeBasis qubit_basis;         // qubit modes only, couplers projected out
  Eigen::MatrixXd h;             // Hermitian effective matrix, MHz
  std::vector<bool> hybridized;  // labeling flags of the block members
  LevelJTable j_table;

  int n_qubits() const { return static_cast<int>(qubit_basis.modes.size()); }

  double dressed_energy(const Occupation& occ) const {
    auto i = qubit_basis.state_index(occ);
    return h(static_cast<int>(i), static_cast<int>(i));
  }

  // Single-mode dressed level energies relative to the dressed vacuum.
  QubitLevelTable dressed_levels() const {
    QubitLevelTable t;
    const int nq = n_qubits();
    Occupation occ(nq, 0);
    const double vac = dressed_energy(occ);
    for (int q = 0; q < nq; ++q) {
      t.ids.push_back(qubit_basis.modes[q].id);
      std::vector<double> e{0.0};
      for (int n = 1; n < qubit_basis.modes[q].n_levels; ++n) {
        Occupation s(nq, 0);
        s[q] = static_cast<std::uint8_t>(n);
        auto idx = qubit_basis.find_state(s);
        if (!idx) break;  // excitation cap reached
        e.push_back(dressed_energy(s) - vac);
      }
      t.level_energy.push_back(std::move(e));
    }
    return t;
  }
};

struct BlockDiagOptions {
  // Smallest admissible eigenvalue of the block overlap Gram matrix; below
  // this the dressed block straddles the partition and cannot be decoupled.
  double separability_floor = 1e-6;
};

namespace effective_detail {

// Least-action decoupling of one column block: W = X^dag (X X^dag)^(-1/2)
// applied to the assigned eigenvector overlaps, the closest-unitary polar
// form of the overlap matrix.
inline Eigen::MatrixXd polar_block_hamiltonian(const Eigen::MatrixXd& x_bb,
                                               const Eigen::VectorXd& lambda,
                                               double floor) {
  Eigen::MatrixXd s = x_bb * x_bb.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw SolverError("overlap Gram matrix eigensolve failed");
  if (es.eigenvalues().minCoeff() < floor)
    throw SolverError(
        "block not spectrally separable: a hybridized state straddles the "
        "partition (smallest overlap eigenvalue " +
        std::to_string(es.eigenvalues().minCoeff()) + ")");
  Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd s_inv_sqrt =
      es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  return s_inv_sqrt * x_bb * lambda.asDiagonal() * x_bb.transpose() * s_inv_sqrt;
}

}  // namespace effective_detail

// Eliminates the couplers: collects the eigenstates labeled to coupler-ground
// bare states and rotates them onto that manifold with the unitary closest to
// the identity.  Diagonal entries become dressed energies; single-transfer
// off-diagonal entries populate the level-dependent exchange table.
inline EffectiveQubitH block_diagonalize(const Spectrum& spec,
                                         const ModeBasis& basis,
                                         const StateLabeling& labeling,
                                         const BlockDiagOptions& opts = {}) {
  EffectiveQubitH eff;

  std::vector<int> qubit_modes;
  for (std::size_t m = 0; m < basis.modes.size(); ++m)
    if (!basis.modes[m].is_coupler) {
      eff.qubit_basis.modes.push_back(basis.modes[m]);
      qubit_modes.push_back(static_cast<int>(m));
    }

  // Block members: full-basis states with every coupler in the ground state.
  std::vector<std::size_t> block;  // full-basis ordinals
  for (std::size_t s = 0; s < basis.dimension(); ++s) {
    bool couplers_ground = true;
    for (std::size_t m = 0; m < basis.modes.size(); ++m)
      if (basis.modes[m].is_coupler && basis.states[s][m] != 0) {
        couplers_ground = false;
        break;
      }
    if (!couplers_ground) continue;
    Occupation q(qubit_modes.size());
    for (std::size_t k = 0; k < qubit_modes.size(); ++k)
      q[k] = basis.states[s][qubit_modes[k]];
    eff.qubit_basis.states.push_back(q);
    block.push_back(s);
  }
  eff.qubit_basis.rebuild_index();

  const int m = static_cast<int>(block.size());
  Eigen::MatrixXd x_bb(m, m);
  Eigen::VectorXd lambda(m);
  eff.hybridized.assign(m, false);
  for (int col = 0; col < m; ++col) {
    const std::size_t bare = block[col];
    if (!labeling.covered(bare))
      throw SolverError("spectrum does not cover block state " +
                        ModeBasis::occ_string(basis.states[bare]));
    const int e = labeling.eigen_of_bare[bare];
    lambda[col] = spec.eigenvalues[e];
    eff.hybridized[col] = labeling.hybridized[bare];
    for (int row = 0; row < m; ++row)
      x_bb(row, col) = spec.eigenvectors(static_cast<int>(block[row]), e);
  }

  eff.h = effective_detail::polar_block_hamiltonian(x_bb, lambda,
                                                    opts.separability_floor);

  // Exchange extraction: canonical entries read with all spectator qubits in
  // the ground state, divided by the ladder factor.
  const int nq = eff.n_qubits();
  eff.j_table = LevelJTable(nq);
  for (int a = 0; a < nq; ++a) {
    for (int b = a + 1; b < nq; ++b) {
      for (int ta = 0; ta + 1 < eff.qubit_basis.modes[a].n_levels; ++ta) {
        for (int tb = 0; tb + 1 < eff.qubit_basis.modes[b].n_levels; ++tb) {
          Occupation from(nq, 0), to(nq, 0);
          from[a] = static_cast<std::uint8_t>(ta + 1);
          from[b] = static_cast<std::uint8_t>(tb);
          to[a] = static_cast<std::uint8_t>(ta);
          to[b] = static_cast<std::uint8_t>(tb + 1);
          auto i = eff.qubit_basis.find_state(from);
          auto j = eff.qubit_basis.find_state(to);
          if (!i || !j) continue;
          double ladder = std::sqrt((ta + 1.0) * (tb + 1.0));
          eff.j_table.set(a, ta, b, tb,
                          eff.h(static_cast<int>(*i), static_cast<int>(*j)) /
                              ladder);
        }
      }
    }
  }
  return eff;
}

// Full least-action unitary for a two-way partition (block flag per bare
// state); used to verify the Frobenius-minimality property on small systems.
inline Eigen::MatrixXd least_action_unitary(const Spectrum& spec,
                                            const StateLabeling& labeling,
                                            const std::vector<bool>& in_block) {
  const int n = static_cast<int>(in_block.size());
  Eigen::MatrixXd u(n, n);
  for (int side = 0; side < 2; ++side) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (in_block[i] == (side == 0)) members.push_back(i);
    const int m = static_cast<int>(members.size());
    if (m == 0) continue;
    Eigen::MatrixXd x(n, m);   // assigned eigenvectors, full rows
    Eigen::MatrixXd xb(m, m);  // rows restricted to the block
    for (int c = 0; c < m; ++c) {
      int e = labeling.eigen_of_bare[members[c]];
      if (e < 0) throw Error("labeling does not cover the partition");
      x.col(c) = spec.eigenvectors.col(e);
      for (int r = 0; r < m; ++r) xb(r, c) = spec.eigenvectors(members[r], e);
    }
    Eigen::MatrixXd s = xb * xb.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    Eigen::MatrixXd s_inv_sqrt = es.eigenvectors() *
                                 es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                 es.eigenvectors().transpose();
    Eigen::MatrixXd cols = x * xb.transpose() * s_inv_sqrt;
    for (int c = 0; c < m; ++c) u.col(members[c]) = cols.col(c);
  }
  return u;
}

}  // namespace qcell
