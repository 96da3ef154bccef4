#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;

int main(int argc, char** argv) {
  int mode = argc > 1 ? atoi(argv[1]) : 0;
  GeneratorParams gp;
  gp.g_side_mhz = 0.0;
  DeviceLayout cell = generate_sycamore_like(2, 2, gp);

  if (mode == 0) {
    // criterion 9: all couplers hard-OFF, G_side = 0
    BiasPoint off = all_off_bias(cell);
    DeviceLayout parked = apply_bias(cell, off);
    auto pc = pauli_coefficients(solve_layout(parked).eff);
    const auto& view = cell.cells.front();
    // NN side pairs: cyclic (sides[k], sides[k+1])
    std::set<uint32_t> nn;
    for (int k = 0; k < 4; ++k) {
      uint32_t m = (1u << qubit_ordinal(cell, view.sides[k])) |
                   (1u << qubit_ordinal(cell, view.sides[(k + 1) % 4]));
      nn.insert(m);
    }
    double worst_other = 0, worst_nn = 0;
    for (auto& [mask, a] : pc.alpha_mhz) {
      if (std::popcount(mask) < 2) continue;
      if (nn.count(mask)) worst_nn = std::max(worst_nn, std::abs(a));
      else worst_other = std::max(worst_other, std::abs(a));
    }
    std::cout << "OFF quiescence: worst non-NN=" << worst_other * 1e3
              << " kHz, worst NN side pair=" << worst_nn * 1e3 << " kHz\n";
  }
  if (mode == 1) {
    // phase scan exponents at G_radial = 4, OFF
    auto t0 = std::chrono::steady_clock::now();
    ScanOptions so;
    auto res = phase_scan(cell, 4.0, log_spaced_ratios(0.12, 1.0, 10), GateState::Off, so);
    auto t1 = std::chrono::steady_clock::now();
    std::cout << "l2=" << res.fit_zz.exponent << " l3=" << res.fit_zzz.exponent
              << " n2=" << res.fit_zz.n_points << " n3=" << res.fit_zzz.n_points
              << " crossover=" << (res.crossover ? std::to_string(res.crossover->ratio) : "none")
              << " [" << std::chrono::duration_cast<std::chrono::seconds>(t1-t0).count() << "s]\n";
    for (auto& r : res.rows)
      std::cout << "  r=" << r.ratio << " zz=" << r.zz_max_mhz << " (" << r.dominant_zz
                << ") zzz=" << r.zzz_max_mhz << " (" << r.dominant_zzz << ")\n";
  }
  if (mode == 2) {
    // crossover at G_radial = 8 vs 4 (criterion 6), OFF state
    for (double gr : {8.0, 4.0}) {
      auto res = phase_scan(cell, gr, log_spaced_ratios(0.15, 1.0, 9), GateState::Off, {});
      std::cout << "G_radial=" << gr << ": crossover="
                << (res.crossover ? std::to_string(res.crossover->ratio) : "none")
                << " l2=" << res.fit_zz.exponent << " l3=" << res.fit_zzz.exponent << "\n";
    }
  }
  if (mode == 3) {
    // calibration: ON targets and resonance
    GeneratorParams g2; g2.g_side_mhz = 2.0;
    DeviceLayout c2 = generate_sycamore_like(2, 2, g2);
    const auto& view = c2.cells.front();
    auto gpain = gate_pair(view);
    BiasPoint res = tune_resonance(c2, gpain.q3, gpain.q1);
    std::cout << "resonance: mover " << gpain.q3 << " -> " << res.qubit_freq_mhz[gpain.q3]
              << " (bare anchor " << c2.qubit(gpain.q1).freq_idle_mhz << ")\n";
    DeviceLayout cr = apply_bias(c2, res);
    BiasPoint off = all_off_bias(cr);
    cr = apply_bias(cr, off);
    for (double jt : {8.0, 20.0}) {
      double w = set_on_bias(cr, gpain.c13, jt);
      DeviceLayout on = cr; on.coupler(gpain.c13).freq_mhz = w;
      double j = solve_single_excitation(on).exchange(qubit_ordinal(cr, gpain.q1), qubit_ordinal(cr, gpain.q3));
      std::cout << "J target " << jt << ": omega=" << w << " achieved=" << j << "\n";
      auto rb = rebias_neighbors(on, gpain.c13, {});
      std::cout << "  rebias converged=" << rb.converged << " iters=" << rb.iterations
                << " Jdrift=" << rb.achieved["J_active_drift"] << "\n";
    }
  }
  return 0;
}
