#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
// random search: 4-ring patterns maximizing |ZZZ|max/|ZZ|max at g=8
int main(int argc, char** argv) {
  uint64_t seed = argc > 1 ? atoll(argv[1]) : 42;
  int n = argc > 2 ? atoi(argv[2]) : 120;
  SplitMix64 rng(seed);
  auto u = [&](double lo, double hi) { return lo + (hi - lo) * 0.5 * (rng.next_symmetric() + 1.0); };
  TruncationPolicy tp; tp.total_excitation_cap = 5;
  SolveOptions so; so.policy = tp;
  struct Best { double ratio, f2, f3, f4, d, zz, zzz; };
  std::vector<Best> bests;
  for (int it = 0; it < n; ++it) {
    double f2 = u(-400, 400), f3 = u(-400, 400), f4 = u(-400, 400);
    double d = u(-260, -120);
    // keep all pairwise detunings away from exact degeneracy
    double fs[4] = {0, f2, f3, f4};
    bool ok = true;
    for (int a = 0; a < 4 && ok; ++a)
      for (int b = a + 1; b < 4; ++b)
        if (std::abs(fs[a] - fs[b]) < 8.0) { ok = false; break; }
    if (!ok) continue;
    DeviceLayout ring;
    ring.qubits = {TransmonSpec{"q1", 5000.0, d, 4, 20000.0, false, {}},
                   TransmonSpec{"q2", 5000.0 + f2, d, 4, 20000.0, false, {}},
                   TransmonSpec{"q3", 5000.0 + f3, d, 4, 20000.0, false, {}},
                   TransmonSpec{"q4", 5000.0 + f4, d, 4, 20000.0, false, {}}};
    ring.edges = {{"q1", "q2", 8.0, EdgeKind::Side}, {"q2", "q3", 8.0, EdgeKind::Side},
                  {"q3", "q4", 8.0, EdgeKind::Side}, {"q4", "q1", 8.0, EdgeKind::Side}};
    ring.validate();
    try {
      auto pc = pauli_coefficients(solve_layout(ring, so).eff);
      double zz = pc.max_abs_of_weight(2), zzz = pc.max_abs_of_weight(3);
      if (zz > 0 && zzz / zz > 0.5)
        bests.push_back({zzz / zz, f2, f3, f4, d, zz, zzz});
    } catch (const Error&) {}
  }
  std::sort(bests.begin(), bests.end(), [](auto& a, auto& b) { return a.ratio > b.ratio; });
  for (size_t i = 0; i < std::min<size_t>(10, bests.size()); ++i)
    std::cout << "ratio=" << bests[i].ratio << " f=(" << bests[i].f2 << ","
              << bests[i].f3 << "," << bests[i].f4 << ") d=" << bests[i].d
              << " zz=" << bests[i].zz << " zzz=" << bests[i].zzz << "\n";
  return 0;
}
