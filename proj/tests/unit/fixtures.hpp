#pragma once

#include "qcell/qcell.hpp"

namespace qcell::testfix {

// 2 transmons + 1 tunable coupler, the workhorse for exchange physics
inline DeviceLayout pair_with_coupler(double f1 = 6000.0, double f2 = 6100.0,
                                      double fc = 7050.0, double g_qc = 100.0,
                                      double g_direct = 8.0,
                                      double delta = -200.0) {
  DeviceLayout l;
  l.qubits = {TransmonSpec{"q1", f1, delta, 4, 20000.0, false, {}},
              TransmonSpec{"q2", f2, delta, 4, 20000.0, false, {}}};
  l.couplers = {CouplerSpec{"c", fc, {6500.0, 9500.0}, 3, 0.0}};
  l.edges = {{"q1", "c", g_qc, EdgeKind::QubitCoupler},
             {"q2", "c", g_qc, EdgeKind::QubitCoupler}};
  if (g_direct != 0.0)
    l.edges.push_back({"q1", "q2", g_direct, EdgeKind::Radial});
  l.validate();
  return l;
}

// 3 directly coupled transmons, no couplers; exact three-body testbed
inline DeviceLayout triangle(double j12 = 3.0, double j23 = 3.5,
                             double j13 = 2.5) {
  DeviceLayout l;
  l.qubits = {TransmonSpec{"a", 5900.0, -210.0, 4, 20000.0, false, {}},
              TransmonSpec{"b", 6020.0, -190.0, 4, 20000.0, false, {}},
              TransmonSpec{"x", 6150.0, -205.0, 4, 20000.0, false, {}}};
  l.edges = {{"a", "b", j12, EdgeKind::Side},
             {"b", "x", j23, EdgeKind::Side},
             {"a", "x", j13, EdgeKind::Side}};
  l.validate();
  return l;
}

// random dispersive perturbation instance (level table + exchange table)
struct RandomInstance {
  QubitLevelTable levels;
  LevelJTable jt;
};

inline RandomInstance random_dispersive(std::uint64_t seed, int n_qubits = 4,
                                        double j_lo = 1.0, double j_hi = 6.0) {
  SplitMix64 rng(seed);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * 0.5 * (rng.next_symmetric() + 1.0);
  };
  RandomInstance inst;
  inst.jt = LevelJTable(n_qubits);
  std::vector<double> freqs;
  for (int q = 0; q < n_qubits; ++q) {
    // spread frequencies so every pairwise squeezed gap stays >= ~40 MHz
    double f = 5600.0 + 400.0 * q + u(-60.0, 60.0);
    double d = u(-260.0, -160.0);
    inst.levels.ids.push_back("x" + std::to_string(q));
    inst.levels.level_energy.push_back(
        {0.0, f, 2.0 * f + d, 3.0 * f + 3.0 * d});
  }
  for (int a = 0; a < n_qubits; ++a)
    for (int b = a + 1; b < n_qubits; ++b)
      for (int ta = 0; ta < 3; ++ta)
        for (int tb = 0; tb < 3; ++tb)
          inst.jt.set(a, ta, b, tb, u(j_lo, j_hi));
  return inst;
}

}  // namespace qcell::testfix
