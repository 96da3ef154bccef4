#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
int main(int argc, char** argv) {
  int mode = argc > 1 ? atoi(argv[1]) : 0;
  GeneratorParams gp;
  gp.g_side_mhz = 0.0;
  DeviceLayout cell = generate_sycamore_like(2, 2, gp);
  if (mode == 0) {
    BiasPoint off = all_off_bias(cell);
    DeviceLayout parked = apply_bias(cell, off);
    for (auto& [id, w] : off.coupler_freq_mhz) std::cout << id << " -> " << w << "\n";
    auto pc = pauli_coefficients(solve_layout(parked).eff);
    for (auto& [mask, a] : pc.alpha_mhz)
      if (std::popcount(mask) >= 2 && std::abs(a) > 2e-4)
        std::cout << PauliString{pc.n_qubits, mask}.str() << " " << a * 1e3 << " kHz\n";
    for (auto& q : parked.qubits) std::cout << q.id << " " << q.freq_idle_mhz << "\n";
  }
  if (mode == 2) {
    for (double gr : {8.0, 4.0}) {
      auto res = phase_scan(cell, gr, log_spaced_ratios(0.15, 1.0, 9), GateState::Off, {});
      std::cout << "G_radial=" << gr << ": crossover="
                << (res.crossover ? std::to_string(res.crossover->ratio) : "none")
                << " l2=" << res.fit_zz.exponent << " l3=" << res.fit_zzz.exponent << "\n";
    }
  }
  return 0;
}
