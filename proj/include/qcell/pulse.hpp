#pragma once

#include <cmath>

#include "qcell/common.hpp"

namespace qcell {

// Flat-top Gaussian control envelope: Gaussian rise matched in value and
// slope to the plateau, constant plateau, symmetric fall.
struct PulseShape {
  double ramp_sigma_ns = 0.625;
  double ramp_duration_ns = 2.0;
  double plateau_ns = 0.0;
  double amplitude_mhz = 0.0;  // J/2pi at the plateau

  double duration_ns() const { return plateau_ns + 2.0 * ramp_duration_ns; }
};

inline double pulse_waveform(const PulseShape& p, double t_ns) {
  if (t_ns < 0.0 || t_ns > p.duration_ns())
    throw Error("pulse_waveform: t outside [0, duration]");
  const double r = p.ramp_duration_ns;
  const double s2 = 2.0 * p.ramp_sigma_ns * p.ramp_sigma_ns;
  if (t_ns < r) {
    double d = t_ns - r;
    return p.amplitude_mhz * std::exp(-d * d / s2);
  }
  if (t_ns > r + p.plateau_ns) {
    double d = t_ns - (r + p.plateau_ns);
    return p.amplitude_mhz * std::exp(-d * d / s2);
  }
  return p.amplitude_mhz;
}

// Integral of the waveform over [t0, t1] in MHz*ns, exact (erf pieces).
inline double pulse_area(const PulseShape& p, double t0_ns, double t1_ns) {
  const double r = p.ramp_duration_ns;
  const double s = p.ramp_sigma_ns;
  const double c = s * std::sqrt(kPi / 2.0);
  auto gauss_int = [&](double a, double b, double center) {
    // integral of exp(-(t-center)^2 / (2 s^2)) over [a, b]
    auto cdf = [&](double x) { return c * std::erf((x - center) / (s * std::sqrt(2.0))); };
    return cdf(b) - cdf(a);
  };
  t0_ns = std::max(0.0, t0_ns);
  t1_ns = std::min(p.duration_ns(), t1_ns);
  if (t1_ns <= t0_ns) return 0.0;

  double area = 0.0;
  // rising edge [0, r]
  double a = std::min(t0_ns, r), b = std::min(t1_ns, r);
  if (b > a) area += gauss_int(a, b, r);
  // plateau [r, r + plateau]
  a = std::clamp(t0_ns, r, r + p.plateau_ns);
  b = std::clamp(t1_ns, r, r + p.plateau_ns);
  if (b > a) area += (b - a);
  // falling edge [r + plateau, duration]
  a = std::max(t0_ns, r + p.plateau_ns);
  b = std::max(t1_ns, r + p.plateau_ns);
  if (b > a) area += gauss_int(a, b, r + p.plateau_ns);
  return p.amplitude_mhz * area;
}

// Plateau length realizing a full excitation swap: the pulse area must equal
// 1/4 cycle, i.e. integral J dt = 250 MHz*ns (phase 2*pi*area*1e-3 = pi/2).
inline double calibrate_plateau(double amplitude_mhz,
                                double ramp_sigma_ns = 0.625,
                                double ramp_duration_ns = 2.0) {
  if (amplitude_mhz <= 0.0) throw Error("pulse amplitude must be positive");
  const double target_area = 250.0;  // MHz*ns
  const double edge = ramp_sigma_ns * std::sqrt(kPi / 2.0) *
                      std::erf(ramp_duration_ns / (ramp_sigma_ns * std::sqrt(2.0)));
  double plateau = target_area / amplitude_mhz - 2.0 * edge;
  if (plateau < 0.0)
    throw Error("ramps alone exceed the iSWAP pulse area; lower the amplitude");
  return plateau;
}

inline PulseShape calibrated_pulse(double amplitude_mhz,
                                   double ramp_sigma_ns = 0.625,
                                   double ramp_duration_ns = 2.0) {
  PulseShape p;
  p.amplitude_mhz = amplitude_mhz;
  p.ramp_sigma_ns = ramp_sigma_ns;
  p.ramp_duration_ns = ramp_duration_ns;
  p.plateau_ns = calibrate_plateau(amplitude_mhz, ramp_sigma_ns, ramp_duration_ns);
  return p;
}

}  // namespace qcell
