#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
// random search over full 5-qubit cells: want ratio<0.8 at Gs=4 and ratio>1.2 at Gs=7
static DeviceLayout make_cell(const double fq[5], double d, double gr, double gs) {
  GeneratorParams gp;
  gp.jitter_mhz = 0.0;
  gp.anharmonicity_mhz = d;
  gp.g_radial_mhz = gr;
  gp.g_side_mhz = gs;
  gp.qubit_band = {4200.0, 7000.0};
  gp.coupler_band = {6400.0, 9500.0};
  gp.coupler_idle_mhz = 7300.0;
  DeviceLayout cell = generate_sycamore_like(2, 2, gp);
  // qubit order: corners (Q0_0, Q0_2, Q2_0, Q2_2), center Q1_1
  int k = 0;
  for (auto& q : cell.qubits) q.freq_idle_mhz = fq[k++];
  cell.validate();
  return cell;
}
static double ratio_of(const double fq[5], double d, double gr, double gs, double* zz) {
  DeviceLayout cell = make_cell(fq, d, gr, gs);
  DeviceLayout parked = apply_bias(cell, all_off_bias(cell));
  auto pc = pauli_coefficients(solve_layout(parked).eff);
  *zz = pc.max_abs_of_weight(2);
  return *zz > 0 ? pc.max_abs_of_weight(3) / *zz : 0.0;
}
int main(int argc, char** argv) {
  uint64_t seed = argc > 1 ? atoll(argv[1]) : 99;
  int n = argc > 2 ? atoi(argv[2]) : 150;
  SplitMix64 rng(seed);
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * 0.5 * (rng.next_symmetric() + 1.0); };
  for (int it = 0; it < n; ++it) {
    double fq[5];
    for (int k = 0; k < 4; ++k) fq[k] = u(4600, 5400);
    fq[4] = u(5700, 6300);
    double d = u(-250, -130);
    bool ok = true;
    for (int a = 0; a < 5 && ok; ++a)
      for (int b = a + 1; b < 5; ++b)
        if (std::abs(fq[a] - fq[b]) < 10.0) ok = false;
    if (!ok) continue;
    try {
      double zz7;
      double r7 = ratio_of(fq, d, 8.0, 7.0, &zz7);
      if (r7 < 1.15 || zz7 > 1.5) continue;
      double zz4;
      double r4 = ratio_of(fq, d, 8.0, 4.0, &zz4);
      if (r4 > 0.85) continue;
      std::cout << "HIT r4=" << r4 << " r7=" << r7 << " zz7=" << zz7
                << " f=(" << fq[0] << "," << fq[1] << "," << fq[2] << ","
                << fq[3] << "," << fq[4] << ") d=" << d << "\n";
    } catch (const Error&) {}
  }
  return 0;
}
