#pragma once

#include <cmath>
#include <map>
#include <string>

#include <json.hpp>

#include "qcell/pipeline.hpp"

namespace qcell {

struct BiasPoint {
  std::map<std::string, double> coupler_freq_mhz;
  std::map<std::string, double> qubit_freq_mhz;  // tunable qubits only

  void merge(const BiasPoint& other) {
    for (const auto& [k, v] : other.coupler_freq_mhz) coupler_freq_mhz[k] = v;
    for (const auto& [k, v] : other.qubit_freq_mhz) qubit_freq_mhz[k] = v;
  }
};

inline void to_json(nlohmann::json& j, const BiasPoint& b) {
  j = nlohmann::json{{"coupler_freq_mhz", b.coupler_freq_mhz},
                     {"qubit_freq_mhz", b.qubit_freq_mhz}};
}

// Returns a copy of the layout with the bias applied; band membership is
// enforced by re-validation.
inline DeviceLayout apply_bias(const DeviceLayout& layout,
                               const BiasPoint& bias) {
  DeviceLayout l = layout;
  for (const auto& [id, f] : bias.coupler_freq_mhz) l.coupler(id).freq_mhz = f;
  for (const auto& [id, f] : bias.qubit_freq_mhz) {
    TransmonSpec& q = l.qubit(id);
    if (!q.tunable)
      throw ValidationError("qubit " + id + " is not tunable");
    q.freq_idle_mhz = f;
  }
  l.validate();
  return l;
}

struct CalibrationResult {
  BiasPoint bias;
  std::map<std::string, double> achieved;  // quantity -> value (MHz)
  int iterations = 0;
  bool converged = false;
};

inline void to_json(nlohmann::json& j, const CalibrationResult& r) {
  j = nlohmann::json{{"bias", r.bias},
                     {"achieved", r.achieved},
                     {"iterations", r.iterations},
                     {"converged", r.converged}};
}

struct CalibrationOptions {
  double tol_off_mhz = 1e-3;     // 1 kHz hard-decoupling tolerance
  double on_rel_tol = 0.01;      // gate-ON tolerance, 1% of the target
  int scan_points = 25;
  int max_root_iterations = 80;
  int max_sweeps = 20;
  double resonance_tol_mhz = 0.01;  // 10 kHz dressed-frequency match
  double band_margin_mhz = 1.0;     // stay strictly inside the coupler band
};

namespace cal_detail {

// The coupler's qubit pair: the two qubits wired to it by qubit_coupler
// edges.
inline std::pair<std::string, std::string> coupler_pair(
    const DeviceLayout& layout, const std::string& coupler_id) {
  std::vector<std::string> qs;
  for (const auto& e : layout.edges) {
    if (e.a == coupler_id && layout.is_qubit(e.b)) qs.push_back(e.b);
    if (e.b == coupler_id && layout.is_qubit(e.a)) qs.push_back(e.a);
  }
  if (qs.size() != 2)
    throw CalibrationError("coupler " + coupler_id +
                           " is not wired to exactly two qubits");
  return {qs[0], qs[1]};
}

struct ExchangeProbe {
  DeviceLayout layout;  // working copy
  std::string coupler;
  int qa = 0, qb = 0;
  mutable int evaluations = 0;

  double operator()(double omega_c) const {
    DeviceLayout l = layout;
    l.coupler(coupler).freq_mhz = omega_c;
    ++evaluations;
    return solve_single_excitation(l).exchange(qa, qb);
  }
};

// Bracketed bisection refined by secant steps; keeps the iterate strictly
// inside the bracket.
template <typename F>
inline double bracketed_root(const F& f, double a, double b, double fa,
                             double fb, double ytol, int max_iter) {
  double best_x = std::abs(fa) < std::abs(fb) ? a : b;
  double best_y = std::min(std::abs(fa), std::abs(fb));
  for (int it = 0; it < max_iter; ++it) {
    if (best_y < ytol) return best_x;
    double x = 0.5 * (a + b);
    if (fb != fa) {
      double secant = a - fa * (b - a) / (fb - fa);
      double lo = std::min(a, b), hi = std::max(a, b);
      double margin = 0.01 * (hi - lo);
      if (secant > lo + margin && secant < hi - margin) x = secant;
    }
    double y = f(x);
    if (std::abs(y) < best_y) {
      best_y = std::abs(y);
      best_x = x;
    }
    if ((y < 0.0) == (fa < 0.0)) {
      a = x;
      fa = y;
    } else {
      b = x;
      fb = y;
    }
  }
  if (best_y < ytol) return best_x;
  throw CalibrationError("root refinement did not reach tolerance (|J| = " +
                         std::to_string(best_y) + " MHz)");
}

}  // namespace cal_detail

struct OffBiasResult {
  double omega_c_mhz = 0.0;
  double j_mhz = 0.0;
  bool bracketed = false;  // false: no sign change, band edge returned
  int evaluations = 0;
};

// Hard-decoupling (J-OFF) bias of one coupler: bracketing root finding on
// the exact single-excitation exchange.
inline OffBiasResult find_off_bias(const DeviceLayout& cell,
                                   const std::string& coupler_id,
                                   const CalibrationOptions& opts = {}) {
  const CouplerSpec& c = cell.coupler(coupler_id);
  auto [qa, qb] = cal_detail::coupler_pair(cell, coupler_id);
  cal_detail::ExchangeProbe probe{cell, coupler_id, qubit_ordinal(cell, qa),
                                  qubit_ordinal(cell, qb)};

  const double lo = c.band.min_mhz + opts.band_margin_mhz;
  const double hi = c.band.max_mhz - opts.band_margin_mhz;
  const int n = opts.scan_points;

  OffBiasResult res;
  double prev_x = lo, prev_y = probe(lo);
  double best_x = lo, best_y = std::abs(prev_y);
  for (int i = 1; i < n; ++i) {
    double x = lo + (hi - lo) * i / (n - 1);
    double y = probe(x);
    if (std::abs(y) < best_y) {
      best_y = std::abs(y);
      best_x = x;
    }
    if ((y < 0.0) != (prev_y < 0.0)) {
      double root = cal_detail::bracketed_root(probe, prev_x, x, prev_y, y,
                                               opts.tol_off_mhz,
                                               opts.max_root_iterations);
      res.omega_c_mhz = root;
      res.j_mhz = probe(root);
      res.bracketed = true;
      res.evaluations = probe.evaluations;
      return res;
    }
    prev_x = x;
    prev_y = y;
  }
  // No sign change in band.  For a vanishing direct coupling |J| only decays
  // toward the band edge; report that edge flagged rather than failing.
  if (best_y < 10.0 * opts.tol_off_mhz ||
      cell.strength(qa, qb) == 0.0) {
    res.omega_c_mhz = best_x;
    res.j_mhz = probe(best_x);
    res.bracketed = false;
    res.evaluations = probe.evaluations;
    return res;
  }
  throw CalibrationError("no hard-OFF point in band for coupler " + coupler_id);
}

// Bias realizing |J| = j_target on the activation branch below the OFF point.
inline double set_on_bias(const DeviceLayout& cell,
                          const std::string& coupler_id, double j_target_mhz,
                          const CalibrationOptions& opts = {}) {
  if (j_target_mhz < 0.0)
    throw CalibrationError("exchange target must be non-negative");
  if (j_target_mhz == 0.0)
    return find_off_bias(cell, coupler_id, opts).omega_c_mhz;

  const CouplerSpec& c = cell.coupler(coupler_id);
  auto [qa, qb] = cal_detail::coupler_pair(cell, coupler_id);
  cal_detail::ExchangeProbe probe{cell, coupler_id, qubit_ordinal(cell, qa),
                                  qubit_ordinal(cell, qb)};
  auto g = [&](double w) { return std::abs(probe(w)) - j_target_mhz; };

  OffBiasResult off = find_off_bias(cell, coupler_id, opts);
  const double lo = c.band.min_mhz + opts.band_margin_mhz;
  const double ytol = opts.on_rel_tol * j_target_mhz;

  // march from the OFF point toward the band bottom until |J| crosses the
  // target; the exchange grows monotonically as the coupler approaches
  double prev_x = off.omega_c_mhz;
  double prev_y = g(prev_x);
  const int n = opts.scan_points;
  for (int i = 1; i <= n; ++i) {
    double x = off.omega_c_mhz + (lo - off.omega_c_mhz) * i / n;
    double y = g(x);
    if ((y < 0.0) != (prev_y < 0.0)) {
      return cal_detail::bracketed_root(g, prev_x, x, prev_y, y, ytol,
                                        opts.max_root_iterations);
    }
    prev_x = x;
    prev_y = y;
  }
  throw CalibrationError("unreachable exchange target " +
                         std::to_string(j_target_mhz) + " MHz in band");
}

// Re-roots every non-target coupler of the cell to hard-OFF, iterating the
// coordinate descent to a fixed point.
inline CalibrationResult rebias_neighbors(const DeviceLayout& cell,
                                          const std::string& active_coupler,
                                          const BiasPoint& bias,
                                          const CalibrationOptions& opts = {}) {
  CalibrationResult result;
  result.bias = bias;

  std::vector<std::string> others;
  for (const auto& c : cell.couplers)
    if (c.id != active_coupler) others.push_back(c.id);

  DeviceLayout work = apply_bias(cell, bias);
  auto [ta, tb] = cal_detail::coupler_pair(cell, active_coupler);
  const int ia = qubit_ordinal(cell, ta), ib = qubit_ordinal(cell, tb);
  const double j_active_before =
      solve_single_excitation(work).exchange(ia, ib);

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    result.iterations = sweep;
    double moved = 0.0;
    for (const auto& cid : others) {
      OffBiasResult off = find_off_bias(work, cid, opts);
      moved = std::max(moved,
                       std::abs(work.coupler(cid).freq_mhz - off.omega_c_mhz));
      work.coupler(cid).freq_mhz = off.omega_c_mhz;
      result.bias.coupler_freq_mhz[cid] = off.omega_c_mhz;
    }
    // residuals at the common final bias
    ExchangeView view = solve_single_excitation(work);
    double worst = 0.0;
    for (const auto& cid : others) {
      auto [qa, qb] = cal_detail::coupler_pair(cell, cid);
      double j = view.exchange(qubit_ordinal(cell, qa), qubit_ordinal(cell, qb));
      result.achieved["J(" + cid + ")"] = j;
      worst = std::max(worst, std::abs(j));
    }
    double j_active = view.exchange(ia, ib);
    result.achieved["J(" + active_coupler + ")"] = j_active;
    result.achieved["J_active_drift"] = j_active - j_active_before;
    if (worst < opts.tol_off_mhz) {
      result.converged = true;
      break;
    }
    if (moved < 1e-6 && worst >= opts.tol_off_mhz) break;  // stuck
  }
  return result;
}

// Tunes the mover qubit until its dressed frequency matches the anchor's.
inline BiasPoint tune_resonance(const DeviceLayout& cell,
                                const std::string& mover,
                                const std::string& anchor,
                                const CalibrationOptions& opts = {}) {
  const TransmonSpec& mq = cell.qubit(mover);
  cell.qubit(anchor);  // existence check
  if (!mq.tunable || !mq.band)
    throw CalibrationError("mover qubit " + mover + " is not tunable");
  const int im = qubit_ordinal(cell, mover);
  const int ia = qubit_ordinal(cell, anchor);

  auto detuning = [&](double f) {
    DeviceLayout l = cell;
    l.qubit(mover).freq_idle_mhz = f;
    ExchangeView v = solve_single_excitation(l);
    return v.dressed_frequency(im) - v.dressed_frequency(ia);
  };

  double x0 = mq.freq_idle_mhz;
  double y0 = detuning(x0);
  double x1 = x0 - y0;  // dressed shifts are small; good first step
  const double lo = mq.band->min_mhz, hi = mq.band->max_mhz;
  for (int it = 0; it < 60; ++it) {
    if (std::abs(y0) < opts.resonance_tol_mhz) {
      BiasPoint b;
      b.qubit_freq_mhz[mover] = x0;
      return b;
    }
    x1 = std::clamp(x1, lo, hi);
    double y1 = detuning(x1);
    if (y1 == y0) break;
    double x2 = x1 - y1 * (x1 - x0) / (y1 - y0);
    x0 = x1;
    y0 = y1;
    x1 = x2;
    if ((x0 == lo || x0 == hi) && std::abs(y0) > opts.resonance_tol_mhz &&
        ((x1 < lo) || (x1 > hi)))
      throw CalibrationError("resonance unachievable within the mover band");
  }
  if (std::abs(y0) < opts.resonance_tol_mhz) {
    BiasPoint b;
    b.qubit_freq_mhz[mover] = x0;
    return b;
  }
  throw CalibrationError("resonance search did not converge");
}

// Soft decoupling: minimizes max(|ZZ|, |ZZZ|) over the coupler frequency by
// golden-section search around the hard-OFF point.  Considerably more
// expensive than find_off_bias since every step solves the full cell.
inline double soft_off_bias(const DeviceLayout& cell,
                            const std::string& coupler_id,
                            const CalibrationOptions& opts = {},
                            double window_mhz = 400.0) {
  OffBiasResult hard = find_off_bias(cell, coupler_id, opts);
  const CouplerSpec& c = cell.coupler(coupler_id);
  double a = std::max(c.band.min_mhz + opts.band_margin_mhz,
                      hard.omega_c_mhz - window_mhz);
  double b = std::min(c.band.max_mhz - opts.band_margin_mhz,
                      hard.omega_c_mhz + window_mhz);

  auto objective = [&](double w) {
    DeviceLayout l = cell;
    l.coupler(coupler_id).freq_mhz = w;
    PauliCoefficients pc = pauli_coefficients(solve_layout(l).eff);
    return std::max(pc.max_abs_of_weight(2), pc.max_abs_of_weight(3));
  };

  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 18; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = objective(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

// Convenience: OFF-bias every coupler of a cell (single coordinate-descent
// pass plus a re-check sweep).
inline BiasPoint all_off_bias(const DeviceLayout& cell,
                              const CalibrationOptions& opts = {}) {
  DeviceLayout work = cell;
  BiasPoint bias;
  for (int sweep = 0; sweep < 3; ++sweep) {
    double worst = 0.0;
    for (const auto& c : cell.couplers) {
      OffBiasResult off = find_off_bias(work, c.id, opts);
      work.coupler(c.id).freq_mhz = off.omega_c_mhz;
      bias.coupler_freq_mhz[c.id] = off.omega_c_mhz;
      worst = std::max(worst, std::abs(off.j_mhz));
    }
    ExchangeView view = solve_single_excitation(work);
    worst = 0.0;
    for (const auto& c : cell.couplers) {
      auto [qa, qb] = cal_detail::coupler_pair(cell, c.id);
      worst = std::max(worst, std::abs(view.exchange(qubit_ordinal(cell, qa),
                                                     qubit_ordinal(cell, qb))));
    }
    if (worst < opts.tol_off_mhz) break;
  }
  return bias;
}

}  // namespace qcell
