#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcell/device.hpp"

namespace qcell {

using Occupation = std::vector<std::uint8_t>;

struct TruncationPolicy {
  // Per-mode overrides; modes not listed use the element's declared n_levels.
  std::map<std::string, int> level_caps;
  std::optional<int> total_excitation_cap;
  std::optional<double> bare_energy_cutoff_mhz;  // relative to the vacuum
  std::size_t hard_limit = 200000;

  int levels_for(const std::string& id, int declared) const {
    auto it = level_caps.find(id);
    int n = it == level_caps.end() ? declared : std::min(declared, it->second);
    if (n < 2)
      throw ValidationError("truncation for '" + id + "' must keep >= 2 levels");
    return n;
  }
};

struct ModeInfo {
  std::string id;
  int n_levels = 2;
  bool is_coupler = false;
  std::vector<double> level_energy;  // bare E(n), MHz
};

// Ordered occupation-number basis.  The state list is lexicographic in the
// occupation vector, which makes the enumeration deterministic.
class ModeBasis {
 public:
  std::vector<ModeInfo> modes;
  std::vector<Occupation> states;

  std::size_t dimension() const { return states.size(); }

  int mode_index(const std::string& id) const {
    auto it = mode_index_.find(id);
    if (it == mode_index_.end())
      throw Error("mode '" + id + "' not in basis");
    return it->second;
  }

  std::optional<std::size_t> find_state(const Occupation& occ) const {
    auto it = state_index_.find(pack(occ));
    if (it == state_index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t state_index(const Occupation& occ) const {
    auto idx = find_state(occ);
    if (!idx) throw Error("state not admitted by basis: " + occ_string(occ));
    return *idx;
  }

  int total_excitation(std::size_t idx) const {
    const auto& s = states[idx];
    return std::accumulate(s.begin(), s.end(), 0);
  }

  double bare_energy(const Occupation& occ) const {
    double e = 0.0;
    for (std::size_t m = 0; m < modes.size(); ++m)
      e += modes[m].level_energy[occ[m]];
    return e;
  }

  static std::string occ_string(const Occupation& occ) {
    std::string s = "|";
    for (auto n : occ) s += static_cast<char>('0' + n);
    return s + ">";
  }

  void rebuild_index() {
    mode_index_.clear();
    state_index_.clear();
    for (std::size_t m = 0; m < modes.size(); ++m)
      mode_index_[modes[m].id] = static_cast<int>(m);
    for (std::size_t i = 0; i < states.size(); ++i)
      state_index_[pack(states[i])] = i;
  }

 private:
  static std::string pack(const Occupation& occ) {
    return std::string(occ.begin(), occ.end());
  }

  std::unordered_map<std::string, int> mode_index_;
  std::unordered_map<std::string, std::size_t> state_index_;
};

// Enumerates every occupation vector admitted by the policy.  Qubit modes
// come first (layout order), then coupler modes.
inline ModeBasis build_basis(const DeviceLayout& layout,
                             const TruncationPolicy& policy = {}) {
  ModeBasis basis;
  for (const auto& q : layout.qubits) {
    ModeInfo m;
    m.id = q.id;
    m.is_coupler = false;
    m.n_levels = policy.levels_for(q.id, q.n_levels);
    for (int n = 0; n < m.n_levels; ++n)
      m.level_energy.push_back(q.level_energy(n));
    basis.modes.push_back(std::move(m));
  }
  for (const auto& c : layout.couplers) {
    ModeInfo m;
    m.id = c.id;
    m.is_coupler = true;
    m.n_levels = policy.levels_for(c.id, c.n_levels);
    for (int n = 0; n < m.n_levels; ++n)
      m.level_energy.push_back(c.level_energy(n));
    basis.modes.push_back(std::move(m));
  }

  const std::size_t n_modes = basis.modes.size();
  Occupation occ(n_modes, 0);

  std::function<void(std::size_t, int, double)> enumerate =
      [&](std::size_t m, int total, double energy) {
        if (m == n_modes) {
          basis.states.push_back(occ);
          if (basis.states.size() > policy.hard_limit)
            throw SolverError("basis size exceeds hard limit of " +
                              std::to_string(policy.hard_limit) + " states");
          return;
        }
        for (int n = 0; n < basis.modes[m].n_levels; ++n) {
          if (policy.total_excitation_cap &&
              total + n > *policy.total_excitation_cap)
            break;
          double e = energy + basis.modes[m].level_energy[n];
          if (policy.bare_energy_cutoff_mhz &&
              e > *policy.bare_energy_cutoff_mhz)
            continue;
          occ[m] = static_cast<std::uint8_t>(n);
          enumerate(m + 1, total + n, e);
        }
        occ[m] = 0;
      };
  enumerate(0, 0, 0.0);
  basis.rebuild_index();
  return basis;
}

}  // namespace qcell
