#include <chrono>
#include <iostream>
#include "qcell/qcell.hpp"
using namespace qcell;
int main(int argc, char** argv) {
  int mode = argc > 1 ? atoi(argv[1]) : 0;
  if (mode == 0) {
    // ideal gate: no stray, no noise
    PulseShape p = calibrated_pulse(20.0);
    std::cout << "plateau=" << p.plateau_ns << " duration=" << p.duration_ns() << "\n";
    NoiseModel off; off.decoherence = false;
    FidelityOptions fo; fo.phase_corrected = false;
    double e = process_error(p, {}, off, fo);
    std::cout << "ideal gate error=" << e << "\n";
    // criterion 7: 50 kHz Z1Z3 stray over a 50 ns ideal gate
    PulseShape p50 = calibrated_pulse(250.0 / 50.0, 0.02, 0.05);  // ~50 ns, negligible ramps
    std::cout << "p50 duration=" << p50.duration_ns() << "\n";
    StrayTerms st; st.z13 = 0.05;
    double e50 = process_error(p50, st, off, fo);
    std::cout << "criterion7 1-F=" << e50 << " (window [2.5e-4, 1e-3])\n";
    FidelityOptions foc; foc.phase_corrected = true;
    std::cout << "criterion7 phase-corrected 1-F=" << process_error(p50, st, off, foc) << "\n";
    // decoherence-only floor vs first-order estimate
    NoiseModel dec; // T1=T2=20us
    double ed = process_error(p, {}, dec, fo);
    // first-order: 1-F ~ (duration) * sum_q (1/T1 + 1/Tphi_eff...) with avg-fid coefficients
    std::cout << "decoherence-only error=" << ed << " duration=" << p.duration_ns() << "\n";
  }
  if (mode == 1) {
    auto t0 = std::chrono::steady_clock::now();
    DeviceLayout cell = generate_sycamore_like(2, 2);  // default G_side = 2
    GateBenchOptions opts;
    FidelityReport r = optimize_gate(cell, opts);
    auto t1 = std::chrono::steady_clock::now();
    std::cout << "cell=" << r.cell_label << " gside=" << r.gside_mhz
              << " J_opt=" << r.j_on_mhz << " duration=" << r.pulse_duration_ns << "\n"
              << "errors: dec=" << r.error_decoherence << " zz=" << r.error_with_zz
              << " zzz=" << r.error_with_zzz << "\n"
              << "stray: z13=" << r.stray.z13 << " z123=" << r.stray.z123
              << " z134=" << r.stray.z134 << " z135=" << r.stray.z135 << "\n"
              << "elapsed " << std::chrono::duration_cast<std::chrono::seconds>(t1 - t0).count() << "s\n";
  }
  return 0;
}
