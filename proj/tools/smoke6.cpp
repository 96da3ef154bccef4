#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
// exact ZZ of a direct-coupled transmon pair vs coupling strength
int main(int argc, char** argv) {
  double det = argc > 1 ? atof(argv[1]) : 200.0;
  double delta = argc > 2 ? atof(argv[2]) : -150.0;
  DeviceLayout pair;
  pair.qubits = {TransmonSpec{"a", 5050.0, delta, 4, 20000.0, false, {}},
                 TransmonSpec{"b", 5050.0 + det, delta, 4, 20000.0, false, {}}};
  pair.edges = {{"a", "b", 1.0, EdgeKind::Side}};
  pair.validate();
  TruncationPolicy tp; tp.total_excitation_cap = 4;
  SolveOptions so; so.policy = tp;
  std::cout << "det=" << det << " delta=" << delta << ": ";
  double prev = 0;
  for (double g = 1.0; g <= 10.01; g += 1.0) {
    DeviceLayout l = pair;
    l.edges[0].strength_mhz = g;
    double a = pauli_coefficients(solve_layout(l, so).eff, 2).get(3u);
    if (g > 1 && (a < 0) != (prev < 0)) std::cout << "[DIP in (" << g-1 << "," << g << ")] ";
    prev = a;
    std::cout << g << ":" << a * 1e3 << " ";
  }
  std::cout << "kHz\n";
  return 0;
}
