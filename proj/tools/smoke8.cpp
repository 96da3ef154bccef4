#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
int main(int argc, char** argv) {
  double ring = atof(argv[1]), delta = atof(argv[2]);
  uint64_t seed = atoll(argv[3]);
  double gr = argc > 4 ? atof(argv[4]) : 8.0;
  double r = argc > 5 ? atof(argv[5]) : 1.0;
  GeneratorParams gp;
  gp.jitter_mhz = 25.0;
  gp.seed = seed;
  gp.anharmonicity_mhz = delta;
  gp.corner_palette_mhz = {5050.0, 5050.0 + ring};
  gp.center_palette_mhz = {6550.0, 6550.0 + ring};
  gp.g_radial_mhz = gr;
  gp.g_side_mhz = r * gr;
  DeviceLayout cell = generate_sycamore_like(2, 2, gp);
  auto gpair = gate_pair(cell.cells.front());
  DeviceLayout parked = apply_bias(cell, all_off_bias(cell));
  auto pc = pauli_coefficients(solve_layout(parked).eff);
  double zz = pc.max_abs_of_weight(2), zzz = pc.max_abs_of_weight(3);
  std::cout << "ring=" << ring << " d=" << delta << " seed=" << seed
            << " Gr=" << gr << " r=" << r << ": ratio=" << zzz / zz
            << " zz=" << zz << " (" << pc.dominant_of_weight(2).str() << ") zzz=" << zzz
            << " (" << pc.dominant_of_weight(3).str() << ")\n";
  return 0;
}
