#include <iostream>
#include "qcell/qcell.hpp"

using namespace qcell;

// throwaway physics scratchpad used while bringing the library up
int main() {
  DeviceLayout l = generate_sycamore_like(2, 2);
  std::cout << "qubits=" << l.qubits.size() << " cells=" << l.cells.size() << "\n";

  // --- J extraction vs Eq. 1 on a 2-qubit + coupler system
  DeviceLayout pair;
  TransmonSpec q1{"q1", 6000.0, -200.0, 4, 20000.0, false, {}};
  TransmonSpec q2{"q2", 6100.0, -200.0, 4, 20000.0, false, {}};
  CouplerSpec c{"c", 7050.0, {6500.0, 9500.0}, 3, 0.0};
  pair.qubits = {q1, q2};
  pair.couplers = {c};
  pair.edges = {{"q1", "c", 100.0, EdgeKind::QubitCoupler},
                {"q2", "c", 100.0, EdgeKind::QubitCoupler},
                {"q1", "q2", 8.0, EdgeKind::Radial}};
  pair.validate();
  double j_exact = solve_single_excitation(pair).exchange(0, 1);
  double j_pert = perturbative_j(8.0, 100.0, 100.0, 7050.0, 6000.0, 6100.0);
  std::cout << "J exact=" << j_exact << " eq1=" << j_pert
            << " rel=" << std::abs(j_pert - j_exact) / std::abs(j_exact) << "\n";

  // --- OFF root
  auto off = find_off_bias(pair, "c");
  std::cout << "off omega=" << off.omega_c_mhz << " J=" << off.j_mhz
            << " bracketed=" << off.bracketed << "\n";
  double eq1_root_lo = 6500, eq1_root_hi = 9500;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (eq1_root_lo + eq1_root_hi);
    double v = perturbative_j(8.0, 100.0, 100.0, mid, 6000.0, 6100.0);
    (v < 0) ? eq1_root_lo = mid : eq1_root_hi = mid;
  }
  std::cout << "eq1 root=" << 0.5 * (eq1_root_lo + eq1_root_hi)
            << " (diff " << std::abs(off.omega_c_mhz - 0.5 * (eq1_root_lo + eq1_root_hi)) / 3000.0
            << " of band)\n";

  // --- closed forms vs generic engine on a random dispersive instance
  SplitMix64 rng(7);
  auto rnd = [&](double lo, double hi) {
    return lo + (hi - lo) * 0.5 * (rng.next_symmetric() + 1.0);
  };
  QubitLevelTable lv;
  const int nq = 4;
  for (int q = 0; q < nq; ++q) {
    lv.ids.push_back("x" + std::to_string(q));
    double f = rnd(5800, 6300), d = rnd(-260, -160);
    lv.level_energy.push_back({0.0, f, 2 * f + d, 3 * f + 3 * d});
  }
  LevelJTable jt(nq);
  for (int a = 0; a < nq; ++a)
    for (int b = a + 1; b < nq; ++b)
      for (int ta = 0; ta < 3; ++ta)
        for (int tb = 0; tb < 3; ++tb)
          jt.set(a, ta, b, tb, rnd(1.0, 6.0));

  std::vector<int> spect;
  for (int k = 2; k < nq; ++k) spect.push_back(k);
  double zz2_cf = alpha_zz_2nd(0, 1, jt, lv);
  double zz2_en = generic_pauli_order(PauliString::from_string("ZZII"), 2, jt, lv).value_mhz;
  double zz3_cf = alpha_zz_3rd(0, 1, jt, lv, spect);
  double zz3_en = generic_pauli_order(PauliString::from_string("ZZII"), 3, jt, lv).value_mhz;
  double zzz_cf = alpha_zzz_3rd(0, 1, 2, jt, lv);
  double zzz_en = generic_pauli_order(PauliString::from_string("ZZZI"), 3, jt, lv).value_mhz;
  std::cout << "zz2 cf=" << zz2_cf << " engine=" << zz2_en
            << " rel=" << std::abs(zz2_cf - zz2_en) / std::abs(zz2_en) << "\n";
  std::cout << "zz3 cf=" << zz3_cf << " engine=" << zz3_en
            << " rel=" << std::abs(zz3_cf - zz3_en) / std::abs(zz3_en) << "\n";
  std::cout << "zzz cf=" << zzz_cf << " engine=" << zzz_en
            << " rel=" << std::abs(zzz_cf - zzz_en) / std::abs(zzz_en) << "\n";

  // --- engine vs exact parity sum on a 3-qubit direct-coupled toy
  DeviceLayout toy;
  toy.qubits = {TransmonSpec{"a", 5900.0, -210.0, 4, 20000.0, false, {}},
                TransmonSpec{"b", 6020.0, -190.0, 4, 20000.0, false, {}},
                TransmonSpec{"x", 6150.0, -205.0, 4, 20000.0, false, {}}};
  toy.edges = {{"a", "b", 3.0, EdgeKind::Side},
               {"b", "x", 3.5, EdgeKind::Side},
               {"a", "x", 2.5, EdgeKind::Side}};
  toy.validate();
  TruncationPolicy tp;
  tp.total_excitation_cap = 6;
  SolveOptions so;
  so.policy = tp;
  auto sol = solve_layout(toy, so);
  auto pc = pauli_coefficients(sol.eff);
  QubitLevelTable blv = bare_qubit_levels(toy);
  LevelJTable bjt = sol.eff.j_table;
  PauliString zzz = PauliString::from_string("ZZZ");
  double ex = pc.get(zzz.z_mask);
  double en = generic_pauli_order(zzz, 3, bjt, blv).value_mhz;
  std::cout << "toy ZZZ exact=" << ex << " engine3=" << en
            << " rel=" << std::abs(en - ex) / std::abs(ex) << "\n";
  // scaling: all J x lambda -> alpha x lambda^3 (exact path, small J)
  for (double lam : {1.0, 0.5, 0.25}) {
    DeviceLayout t2 = toy;
    for (auto& e : t2.edges) e.strength_mhz *= lam;
    auto s2 = solve_layout(t2, so);
    std::cout << "  lam=" << lam << " ZZZ=" << pauli_coefficients(s2.eff).get(zzz.z_mask) << "\n";
  }
  return 0;
}
