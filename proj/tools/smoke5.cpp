#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
int main(int argc, char** argv) {
  double ring = argc > 1 ? atof(argv[1]) : 200.0;
  double jitter = argc > 2 ? atof(argv[2]) : 25.0;
  uint64_t seed = argc > 3 ? atoll(argv[3]) : 1;
  double delta = argc > 4 ? atof(argv[4]) : -150.0;
  GeneratorParams gp;
  gp.g_side_mhz = 0.0;
  gp.jitter_mhz = jitter;
  gp.seed = seed;
  gp.anharmonicity_mhz = delta;
  gp.corner_palette_mhz = {5050.0, 5050.0 + ring};
  gp.center_palette_mhz = {6550.0, 6550.0 + ring};
  DeviceLayout cell = generate_sycamore_like(2, 2, gp);
  for (double gr : {8.0, 4.0}) {
    auto res = phase_scan(cell, gr, log_spaced_ratios(0.12, 1.0, 10), GateState::Off, {});
    std::cout << "ring=" << ring << " d=" << delta << " seed=" << seed
              << " Gr=" << gr << ": l2=" << res.fit_zz.exponent
              << " l3=" << res.fit_zzz.exponent
              << " cross=" << (res.crossover ? std::to_string(res.crossover->ratio) : "none")
              << " zz(1)=" << res.rows.back().zz_max_mhz
              << " zzz(1)=" << res.rows.back().zzz_max_mhz << "\n";
  }
  return 0;
}
