#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
int main(int argc, char** argv) {
  double jitter = argc > 1 ? atof(argv[1]) : 10.0;
  uint64_t seed = argc > 2 ? atoll(argv[2]) : 1;
  double delta = argc > 3 ? atof(argv[3]) : -150.0;
  GeneratorParams gp;
  gp.g_side_mhz = 0.0;
  gp.jitter_mhz = jitter;
  gp.seed = seed;
  gp.anharmonicity_mhz = delta;
  DeviceLayout cell = generate_sycamore_like(2, 2, gp);
  for (double gr : {4.0, 8.0}) {
    auto res = phase_scan(cell, gr, log_spaced_ratios(0.12, 1.0, 10), GateState::Off, {});
    std::cout << "jit=" << jitter << " seed=" << seed << " delta=" << delta
              << " Gr=" << gr << ": l2=" << res.fit_zz.exponent
              << " l3=" << res.fit_zzz.exponent
              << " cross=" << (res.crossover ? std::to_string(res.crossover->ratio) : "none")
              << " zz(1)=" << res.rows.back().zz_max_mhz
              << " zzz(1)=" << res.rows.back().zzz_max_mhz << "\n";
  }
  return 0;
}
