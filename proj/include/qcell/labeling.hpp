#pragma once

#include <algorithm>
#include <vector>

#include "qcell/basis.hpp"
#include "qcell/eigensolve.hpp"

namespace qcell {

// Non-repetitive assignment of dressed eigenstates to bare occupation
// labels: greedy over descending overlap |<bare|dressed>|^2, each side used
// at most once.
struct StateLabeling {
  // eigen_of_bare[i] = eigenstate column assigned to bare state i, -1 if the
  // spectrum did not cover it (k-limited solves).
  std::vector<int> eigen_of_bare;
  std::vector<double> overlap;     // per bare state, 0 when unassigned
  std::vector<bool> hybridized;    // overlap below the floor

  bool covered(std::size_t bare) const { return eigen_of_bare[bare] >= 0; }

  double energy_of(const Spectrum& spec, std::size_t bare) const {
    int e = eigen_of_bare[bare];
    if (e < 0) throw Error("state not covered by labeling");
    return spec.eigenvalues[e];
  }
};

struct LabelingOptions {
  double hybridized_floor = 0.5;
  double hard_floor = 1e-6;
};

inline StateLabeling label_states(const Spectrum& spec, const ModeBasis& basis,
                                  const LabelingOptions& opts = {}) {
  const int n_bare = static_cast<int>(basis.dimension());
  const int n_eig = static_cast<int>(spec.eigenvalues.size());

  struct Cand {
    double overlap;
    int eig;
    int bare;
  };
  std::vector<Cand> cands;
  cands.reserve(static_cast<std::size_t>(n_eig) * 8);
  for (int e = 0; e < n_eig; ++e) {
    const auto& v = spec.eigenvectors.col(e);
    for (int b = 0; b < n_bare; ++b) {
      double w = v[b] * v[b];
      if (w > 1e-12) cands.push_back({w, e, b});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    if (a.eig != b.eig) return a.eig < b.eig;
    return a.bare < b.bare;
  });

  StateLabeling lab;
  lab.eigen_of_bare.assign(n_bare, -1);
  lab.overlap.assign(n_bare, 0.0);
  lab.hybridized.assign(n_bare, false);
  std::vector<bool> eig_used(n_eig, false);

  int assigned = 0;
  for (const auto& c : cands) {
    if (assigned == std::min(n_bare, n_eig)) break;
    if (eig_used[c.eig] || lab.eigen_of_bare[c.bare] >= 0) continue;
    lab.eigen_of_bare[c.bare] = c.eig;
    lab.overlap[c.bare] = c.overlap;
    eig_used[c.eig] = true;
    ++assigned;
  }

  // Deeply mixed clusters (degenerate multi-coupler virtual states) can
  // strand bare states with no candidate above the collection threshold;
  // pair the leftovers with the best remaining eigenvector.
  if (n_eig >= n_bare && assigned < n_bare) {
    for (int b = 0; b < n_bare; ++b) {
      if (lab.eigen_of_bare[b] >= 0) continue;
      int best_e = -1;
      double best_w = -1.0;
      for (int e = 0; e < n_eig; ++e) {
        if (eig_used[e]) continue;
        double w = spec.eigenvectors(b, e) * spec.eigenvectors(b, e);
        if (w > best_w) {
          best_w = w;
          best_e = e;
        }
      }
      if (best_e < 0)
        throw SolverError("labeling failed to cover bare state " +
                          ModeBasis::occ_string(basis.states[b]));
      lab.eigen_of_bare[b] = best_e;
      lab.overlap[b] = best_w;
      eig_used[best_e] = true;
    }
  }

  // The hard unassignable error fires only for states of the physical block
  // (every coupler in its ground state); virtual junk states merely carry a
  // hybridized flag.
  for (int b = 0; b < n_bare; ++b) {
    if (lab.eigen_of_bare[b] < 0) continue;
    if (lab.overlap[b] < opts.hard_floor) {
      bool couplers_ground = true;
      for (std::size_t m = 0; m < basis.modes.size(); ++m)
        if (basis.modes[m].is_coupler && basis.states[b][m] != 0) {
          couplers_ground = false;
          break;
        }
      if (couplers_ground)
        throw SolverError(
            "unassignable eigenstate: best overlap for bare state " +
            ModeBasis::occ_string(basis.states[b]) + " is " +
            std::to_string(lab.overlap[b]));
    }
    if (lab.overlap[b] < opts.hybridized_floor) lab.hybridized[b] = true;
  }
  return lab;
}

}  // namespace qcell
