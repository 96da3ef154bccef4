#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
// 4-qubit ring (no couplers): |ZZ|max and |ZZZ|max vs uniform side coupling
int main(int argc, char** argv) {
  double f2 = atof(argv[1]), f3 = atof(argv[2]), f4 = atof(argv[3]);
  double delta = atof(argv[4]);
  DeviceLayout ring;
  ring.qubits = {TransmonSpec{"q1", 5000.0, delta, 4, 20000.0, false, {}},
                 TransmonSpec{"q2", 5000.0 + f2, delta, 4, 20000.0, false, {}},
                 TransmonSpec{"q3", 5000.0 + f3, delta, 4, 20000.0, false, {}},
                 TransmonSpec{"q4", 5000.0 + f4, delta, 4, 20000.0, false, {}}};
  ring.edges = {{"q1", "q2", 1.0, EdgeKind::Side},
                {"q2", "q3", 1.0, EdgeKind::Side},
                {"q3", "q4", 1.0, EdgeKind::Side},
                {"q4", "q1", 1.0, EdgeKind::Side}};
  ring.validate();
  TruncationPolicy tp; tp.total_excitation_cap = 5;
  SolveOptions so; so.policy = tp;
  std::cout << "offsets " << f2 << "," << f3 << "," << f4 << " d=" << delta << ": ";
  for (double g : {2.0, 4.0, 5.0, 6.0, 8.0}) {
    DeviceLayout l = ring;
    for (auto& e : l.edges) e.strength_mhz = g;
    try {
      auto pc = pauli_coefficients(solve_layout(l, so).eff);
      double zz = pc.max_abs_of_weight(2), zzz = pc.max_abs_of_weight(3);
      std::cout << "g" << g << ":" << zzz / zz << "(zz=" << zz*1e3 << "k) ";
    } catch (const Error& e) { std::cout << "g" << g << ":ERR "; }
  }
  std::cout << "\n";
  return 0;
}
