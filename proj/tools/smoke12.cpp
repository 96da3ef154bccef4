#include <chrono>
#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
int main() {
  auto t0 = std::chrono::steady_clock::now();
  for (double gr : {8.0, 4.0}) {
    DeviceLayout cell = inversion_prone_cell(gr, 2.0);
    auto res = phase_scan(cell, gr, log_spaced_ratios(0.15, 1.0, 9), GateState::Off, {});
    std::cout << "Gr=" << gr << ": l2=" << res.fit_zz.exponent
              << " l3=" << res.fit_zzz.exponent;
    if (res.crossover)
      std::cout << " crossover=" << res.crossover->ratio
                << " bracket=[" << res.crossover->bracket_lo << ","
                << res.crossover->bracket_hi << "]";
    else std::cout << " crossover=none";
    std::cout << " ratio(1)=" << res.rows.back().zzz_max_mhz / res.rows.back().zz_max_mhz << "\n";
  }
  auto t1 = std::chrono::steady_clock::now();
  std::cout << "elapsed " << std::chrono::duration_cast<std::chrono::seconds>(t1 - t0).count() << "s\n";
  return 0;
}
