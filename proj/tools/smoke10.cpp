#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
static double ratio_at(double f2, double f3, double f4, double d, double g, double* zz_out = nullptr) {
  DeviceLayout ring;
  ring.qubits = {TransmonSpec{"q1", 5000.0, d, 4, 20000.0, false, {}},
                 TransmonSpec{"q2", 5000.0 + f2, d, 4, 20000.0, false, {}},
                 TransmonSpec{"q3", 5000.0 + f3, d, 4, 20000.0, false, {}},
                 TransmonSpec{"q4", 5000.0 + f4, d, 4, 20000.0, false, {}}};
  ring.edges = {{"q1", "q2", g, EdgeKind::Side}, {"q2", "q3", g, EdgeKind::Side},
                {"q3", "q4", g, EdgeKind::Side}, {"q4", "q1", g, EdgeKind::Side}};
  ring.validate();
  TruncationPolicy tp; tp.total_excitation_cap = 5;
  SolveOptions so; so.policy = tp;
  auto pc = pauli_coefficients(solve_layout(ring, so).eff);
  double zz = pc.max_abs_of_weight(2), zzz = pc.max_abs_of_weight(3);
  if (zz_out) *zz_out = zz;
  return zz > 0 ? zzz / zz : 0.0;
}
int main(int argc, char** argv) {
  double p[4] = {atof(argv[1]), atof(argv[2]), atof(argv[3]), atof(argv[4])};
  double best = ratio_at(p[0], p[1], p[2], p[3], 7.0);
  double step = 30.0;
  for (int round = 0; round < 10; ++round) {
    bool improved = false;
    for (int k = 0; k < 4; ++k) {
      for (double s : {-step, step}) {
        double q[4] = {p[0], p[1], p[2], p[3]};
        q[k] += s;
        if (q[3] > -120 || q[3] < -260) continue;
        double r;
        try { r = ratio_at(q[0], q[1], q[2], q[3], 7.0); } catch (const Error&) { continue; }
        if (r > best) { best = r; p[0]=q[0]; p[1]=q[1]; p[2]=q[2]; p[3]=q[3]; improved = true; }
      }
    }
    std::cout << "round " << round << " best=" << best << " f=(" << p[0] << "," << p[1]
              << "," << p[2] << ") d=" << p[3] << "\n";
    if (!improved) step *= 0.5;
    if (step < 2) break;
  }
  std::cout << "ratio vs g: ";
  for (double g : {3.0, 4.0, 5.0, 6.0, 7.0, 8.0}) {
    double zz;
    double r = ratio_at(p[0], p[1], p[2], p[3], g, &zz);
    std::cout << "g" << g << ":" << r << "(zz=" << zz << ") ";
  }
  std::cout << "\n";
  return 0;
}
