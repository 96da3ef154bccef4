#pragma once

#include <atomic>
#include <cmath>
#include <thread>

#include "qcell/gate_bench.hpp"

namespace qcell {

namespace scan_detail {

// Deterministic fan-out: results land by index regardless of scheduling.
template <typename Fn>
inline void parallel_for(std::size_t n, const Fn& fn) {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, n); ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace scan_detail

struct ScanOptions {
  std::optional<TruncationPolicy> policy;
  CalibrationOptions cal;
  int pauli_max_weight = 3;
  double j_on_mhz = 8.0;  // gate-ON exchange for tomography/overlay/phase
};

// ---- Hamiltonian tomography (per-string bars, exact vs perturbative) ------

struct TomographyEntry {
  double j13_mhz = 0.0;   // requested exchange (0 = OFF)
  double gside_mhz = 0.0;
  std::string pauli;
  double alpha_exact_mhz = 0.0;
  double alpha_pert2_mhz = 0.0;  // through second order
  double alpha_pert3_mhz = 0.0;  // through third order
};

struct TomographyResult {
  std::string cell;
  std::vector<TomographyEntry> rows;
  std::vector<std::string> failures;  // flag-and-continue log
  bool partial() const { return !failures.empty(); }
};

namespace scan_detail {

// OFF-parked cell with one optional activated coupler; nullopt J means OFF.
inline DeviceLayout bias_cell(const DeviceLayout& cell,
                              const std::string& active_coupler,
                              std::optional<double> j_on,
                              const CalibrationOptions& cal) {
  DeviceLayout work = apply_bias(cell, all_off_bias(cell, cal));
  if (j_on && *j_on != 0.0) {
    work.coupler(active_coupler).freq_mhz =
        set_on_bias(work, active_coupler, *j_on, cal);
    CalibrationResult rb = rebias_neighbors(work, active_coupler, {}, cal);
    work = apply_bias(work, rb.bias);
  }
  return work;
}

struct PauliPair {
  PauliCoefficients exact;
  LevelJTable jt;
  QubitLevelTable levels;
};

inline PauliPair solve_pauli(const DeviceLayout& biased,
                             const ScanOptions& opts) {
  SolveOptions so;
  so.policy = opts.policy;
  LayoutSolution sol = solve_layout(biased, so);
  PauliPair out;
  out.exact = pauli_coefficients(sol.eff, opts.pauli_max_weight);
  out.jt = sol.eff.j_table;
  out.levels = sol.eff.dressed_levels();
  return out;
}

}  // namespace scan_detail

inline TomographyResult tomography_scan(
    const DeviceLayout& layout, const std::string& cell_label,
    const std::vector<double>& j13_values = {0.0, 8.0},
    const std::vector<double>& gside_values = {0.0, 2.0, 4.0},
    const ScanOptions& opts = {}) {
  TomographyResult result;
  result.cell = cell_label;
  DeviceLayout cell = layout.cells.size() == 1 && layout.cells[0].label == cell_label
                          ? layout
                          : layout.cell_subcircuit(cell_label);
  const GatePair gp = gate_pair(cell.cells.front());

  PerturbationOptions popts;
  for (double gside : gside_values) {
    DeviceLayout variant = cell;
    variant.set_kind_strength(EdgeKind::Side, gside);
    for (double j13 : j13_values) {
      try {
        DeviceLayout biased = scan_detail::bias_cell(
            variant, gp.c13, j13 == 0.0 ? std::nullopt : std::optional(j13),
            opts.cal);
        scan_detail::PauliPair pp = scan_detail::solve_pauli(biased, opts);
        for (const auto& [mask, alpha] : pp.exact.alpha_mhz) {
          int w = std::popcount(mask);
          if (w < 2 || w > 3) continue;
          TomographyEntry e;
          e.j13_mhz = j13;
          e.gside_mhz = gside;
          PauliString p{pp.exact.n_qubits, mask};
          e.pauli = p.str();
          e.alpha_exact_mhz = alpha;
          double p2 = generic_pauli_order(p, 2, pp.jt, pp.levels, popts).value_mhz;
          double p3 = generic_pauli_order(p, 3, pp.jt, pp.levels, popts).value_mhz;
          e.alpha_pert2_mhz = p2;
          e.alpha_pert3_mhz = p2 + p3;
          result.rows.push_back(e);
        }
      } catch (const Error& err) {
        result.failures.push_back("j13=" + std::to_string(j13) + " gside=" +
                                  std::to_string(gside) + ": " + err.what());
      }
    }
  }
  return result;
}

// ---- Processor Error Tomography -------------------------------------------

struct PetRow {
  std::string cell;
  double x_value_mhz = 0.0;  // C13 coupler frequency
  double j13_mhz = 0.0;
  double zz_max_mhz = 0.0;
  double zzz_max_mhz = 0.0;
  double ratio = 0.0;
  bool ok = true;
};

struct PetResult {
  std::vector<PetRow> rows;  // cell-major, grid-minor
  std::vector<std::string> failures;
  bool partial() const { return !failures.empty(); }
};

inline PetResult pet_scan(const DeviceLayout& layout,
                          const std::vector<double>& grid_mhz,
                          double gside_mhz, const ScanOptions& opts = {},
                          const std::vector<std::string>& only_cells = {}) {
  PetResult result;
  std::vector<std::string> labels =
      only_cells.empty() ? layout.cell_labels() : only_cells;

  std::vector<std::vector<PetRow>> per_cell(labels.size());
  std::vector<std::vector<std::string>> per_cell_failures(labels.size());

  scan_detail::parallel_for(labels.size(), [&](std::size_t ci) {
    const std::string& label = labels[ci];
    DeviceLayout cell = layout.cell_subcircuit(label);
    cell.set_kind_strength(EdgeKind::Side, gside_mhz);
    const GatePair gp = gate_pair(cell.cells.front());
    DeviceLayout parked;
    try {
      parked = apply_bias(cell, all_off_bias(cell, opts.cal));
    } catch (const Error& err) {
      per_cell_failures[ci].push_back(label + ": " + err.what());
      return;
    }
    const int ia = qubit_ordinal(cell, gp.q1), ib = qubit_ordinal(cell, gp.q3);
    for (double x : grid_mhz) {
      PetRow row;
      row.cell = label;
      row.x_value_mhz = x;
      try {
        DeviceLayout biased = parked;
        biased.coupler(gp.c13).freq_mhz = x;
        biased.validate();
        CalibrationResult rb =
            rebias_neighbors(biased, gp.c13, {}, opts.cal);
        biased = apply_bias(biased, rb.bias);
        row.j13_mhz = solve_single_excitation(biased).exchange(ia, ib);
        scan_detail::PauliPair pp = scan_detail::solve_pauli(biased, opts);
        row.zz_max_mhz = pp.exact.max_abs_of_weight(2);
        row.zzz_max_mhz = pp.exact.max_abs_of_weight(3);
        row.ratio = row.zz_max_mhz > 0.0 ? row.zzz_max_mhz / row.zz_max_mhz
                                         : 0.0;
      } catch (const Error& err) {
        row.ok = false;
        per_cell_failures[ci].push_back(label + " @" + std::to_string(x) +
                                        ": " + err.what());
      }
      per_cell[ci].push_back(row);
    }
  });
  for (std::size_t ci = 0; ci < labels.size(); ++ci) {
    result.rows.insert(result.rows.end(), per_cell[ci].begin(),
                       per_cell[ci].end());
    result.failures.insert(result.failures.end(),
                           per_cell_failures[ci].begin(),
                           per_cell_failures[ci].end());
  }
  return result;
}

// ---- ON/OFF overlay of the gate-relevant strays ---------------------------

struct OverlayRow {
  std::string cell;
  double j13_target_mhz = 0.0;
  double j13_mhz = 0.0;  // achieved
  double z13_mhz = 0.0;
  double z123_mhz = 0.0;
  double z134_mhz = 0.0;
  double z135_mhz = 0.0;
  bool ok = true;
};

struct OverlayResult {
  std::vector<OverlayRow> rows;
  std::vector<std::string> failures;
  bool partial() const { return !failures.empty(); }
};

inline OverlayResult onoff_overlay_scan(const DeviceLayout& layout,
                                        const std::vector<double>& j13_grid,
                                        double gside_mhz,
                                        const ScanOptions& opts = {},
                                        const std::vector<std::string>& only_cells = {}) {
  OverlayResult result;
  std::vector<std::string> labels =
      only_cells.empty() ? layout.cell_labels() : only_cells;

  std::vector<std::vector<OverlayRow>> per_cell(labels.size());
  std::vector<std::vector<std::string>> per_fail(labels.size());

  scan_detail::parallel_for(labels.size(), [&](std::size_t ci) {
    const std::string& label = labels[ci];
    DeviceLayout cell = layout.cell_subcircuit(label);
    cell.set_kind_strength(EdgeKind::Side, gside_mhz);
    const GatePair gp = gate_pair(cell.cells.front());
    DeviceLayout resonant;
    try {
      resonant = apply_bias(cell, tune_resonance(cell, gp.q3, gp.q1, opts.cal));
    } catch (const Error& err) {
      per_fail[ci].push_back(label + ": " + err.what());
      return;
    }
    const int ia = qubit_ordinal(cell, gp.q1), ib = qubit_ordinal(cell, gp.q3);
    for (double j : j13_grid) {
      OverlayRow row;
      row.cell = label;
      row.j13_target_mhz = j;
      try {
        DeviceLayout biased = scan_detail::bias_cell(
            resonant, gp.c13, j == 0.0 ? std::nullopt : std::optional(j),
            opts.cal);
        row.j13_mhz = solve_single_excitation(biased).exchange(ia, ib);
        scan_detail::PauliPair pp = scan_detail::solve_pauli(biased, opts);
        auto mask = [&](std::initializer_list<std::string> ids) {
          std::uint32_t m = 0;
          for (const auto& id : ids) m |= 1u << qubit_ordinal(cell, id);
          return m;
        };
        row.z13_mhz = pp.exact.get(mask({gp.q1, gp.q3}));
        row.z123_mhz = pp.exact.get(mask({gp.q1, gp.q2, gp.q3}));
        row.z134_mhz = pp.exact.get(mask({gp.q1, gp.q3, gp.q4}));
        row.z135_mhz = pp.exact.get(mask({gp.q1, gp.q3, gp.q5}));
      } catch (const Error& err) {
        row.ok = false;
        per_fail[ci].push_back(label + " @J=" + std::to_string(j) + ": " +
                               err.what());
      }
      per_cell[ci].push_back(row);
    }
  });
  for (std::size_t ci = 0; ci < labels.size(); ++ci) {
    result.rows.insert(result.rows.end(), per_cell[ci].begin(), per_cell[ci].end());
    result.failures.insert(result.failures.end(), per_fail[ci].begin(),
                           per_fail[ci].end());
  }
  return result;
}

// ---- phase transition scan -------------------------------------------------

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;  // rms of log residuals
  int n_points = 0;
  std::vector<std::pair<double, std::string>> dominant_trace;  // (ratio, string)
};

struct CrossoverPoint {
  double ratio = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::string state_tag;  // "ON"/"OFF"
  double g_radial_mhz = 0.0;
};

struct PhaseScanRow {
  double ratio = 0.0;
  double zz_max_mhz = 0.0;
  double zzz_max_mhz = 0.0;
  std::string dominant_zz;
  std::string dominant_zzz;
  bool ok = true;
};

struct PhaseScanResult {
  PowerLawFit fit_zz;
  PowerLawFit fit_zzz;
  std::optional<CrossoverPoint> crossover;
  std::vector<PhaseScanRow> rows;
  std::vector<std::string> failures;
  bool partial() const { return !failures.empty(); }
};

// Least-squares fit of log|y| = exponent * log(x) + log(prefactor).
inline PowerLawFit fit_power_law(const std::vector<double>& x,
                                 const std::vector<double>& y,
                                 double floor = 1e-4) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && std::abs(y[i]) > floor) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(std::abs(y[i])));
    }
  PowerLawFit fit;
  fit.n_points = static_cast<int>(lx.size());
  if (fit.n_points < 2) throw Error("power-law fit needs at least two usable points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double n = static_cast<double>(lx.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error("degenerate abscissa in power-law fit");
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.prefactor = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    double r = ly[i] - (fit.exponent * lx[i] + intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

enum class GateState { Off, On };

inline std::vector<double> log_spaced_ratios(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return out;
}

namespace scan_detail {

struct PhasePoint {
  double zz = 0.0, zzz = 0.0;
  std::string dom_zz, dom_zzz;
};

inline PhasePoint phase_point(const DeviceLayout& cell_template,
                              const GatePair& gp, double g_radial,
                              double ratio, GateState state,
                              const ScanOptions& opts) {
  DeviceLayout variant = cell_template;
  variant.set_kind_strength(EdgeKind::Radial, g_radial);
  variant.set_kind_strength(EdgeKind::Side, ratio * g_radial);
  DeviceLayout biased = bias_cell(
      variant, gp.c13,
      state == GateState::On ? std::optional(opts.j_on_mhz) : std::nullopt,
      opts.cal);
  PauliPair pp = solve_pauli(biased, opts);
  PhasePoint out;
  out.zz = pp.exact.max_abs_of_weight(2);
  out.zzz = pp.exact.max_abs_of_weight(3);
  out.dom_zz = pp.exact.dominant_of_weight(2).str();
  out.dom_zzz = pp.exact.dominant_of_weight(3).str();
  return out;
}

}  // namespace scan_detail

inline PhaseScanResult phase_scan(const DeviceLayout& cell_in,
                                  double g_radial_mhz,
                                  std::vector<double> ratios, GateState state,
                                  const ScanOptions& opts = {}) {
  if (ratios.size() < 8)
    throw Error("phase_scan needs at least 8 ratio grid points");
  std::sort(ratios.begin(), ratios.end());

  DeviceLayout cell = cell_in.cells.size() == 1
                          ? cell_in
                          : cell_in.cell_subcircuit(cell_in.cells.front().label);
  const GatePair gp = gate_pair(cell.cells.front());

  PhaseScanResult result;
  std::vector<double> xs, zz, zzz;
  for (double r : ratios) {
    PhaseScanRow row;
    row.ratio = r;
    try {
      auto p = scan_detail::phase_point(cell, gp, g_radial_mhz, r, state, opts);
      row.zz_max_mhz = p.zz;
      row.zzz_max_mhz = p.zzz;
      row.dominant_zz = p.dom_zz;
      row.dominant_zzz = p.dom_zzz;
      xs.push_back(r);
      zz.push_back(p.zz);
      zzz.push_back(p.zzz);
    } catch (const Error& err) {
      row.ok = false;
      result.failures.push_back("ratio=" + std::to_string(r) + ": " + err.what());
    }
    result.rows.push_back(row);
  }

  result.fit_zz = fit_power_law(xs, zz);
  result.fit_zzz = fit_power_law(xs, zzz);
  for (const auto& row : result.rows) {
    if (!row.ok) continue;
    result.fit_zz.dominant_trace.emplace_back(row.ratio, row.dominant_zz);
    result.fit_zzz.dominant_trace.emplace_back(row.ratio, row.dominant_zzz);
  }

  // hierarchy inversion: sign change of (|ZZZ|max - |ZZ|max), refined by
  // bisection to 1e-3 in ratio
  auto diff_of = [&](double r) {
    auto p = scan_detail::phase_point(cell, gp, g_radial_mhz, r, state, opts);
    return p.zzz - p.zz;
  };
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double d0 = zzz[i] - zz[i];
    double d1 = zzz[i + 1] - zz[i + 1];
    if ((d0 < 0.0) != (d1 < 0.0)) {
      double lo = xs[i], hi = xs[i + 1];
      double flo = d0;
      while (hi - lo > 1e-3) {
        double mid = 0.5 * (lo + hi);
        double fm = diff_of(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      CrossoverPoint cp;
      cp.ratio = 0.5 * (lo + hi);
      cp.bracket_lo = lo;
      cp.bracket_hi = hi;
      cp.state_tag = state == GateState::On ? "ON" : "OFF";
      cp.g_radial_mhz = g_radial_mhz;
      result.crossover = cp;
      break;
    }
  }
  return result;
}

// ---- fidelity sweep --------------------------------------------------------

struct FidelitySweepResult {
  std::vector<FidelityReport> reports;
  std::vector<std::string> failures;
  bool partial() const { return !failures.empty(); }
};

inline FidelitySweepResult fidelity_sweep(const DeviceLayout& layout,
                                          const std::vector<double>& gside_values,
                                          const GateBenchOptions& opts = {},
                                          const std::vector<std::string>& only_cells = {}) {
  FidelitySweepResult result;
  std::vector<std::string> labels =
      only_cells.empty() ? layout.cell_labels() : only_cells;
  for (double gside : gside_values) {
    for (const auto& label : labels) {
      try {
        DeviceLayout cell = layout.cell_subcircuit(label);
        cell.set_kind_strength(EdgeKind::Side, gside);
        FidelityReport r = optimize_gate(cell, opts);
        r.gside_mhz = gside;
        result.reports.push_back(std::move(r));
      } catch (const Error& err) {
        result.failures.push_back(label + " gside=" + std::to_string(gside) +
                                  ": " + err.what());
      }
    }
  }
  return result;
}

}  // namespace qcell
