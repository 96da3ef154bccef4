#pragma once

#include <array>
#include <complex>
#include <optional>

#include <Eigen/Dense>

#include "qcell/pauli.hpp"
#include "qcell/pulse.hpp"

namespace qcell {

enum class NoiseLevel { DecoherenceOnly, WithZz, WithZzz };

inline std::string to_string(NoiseLevel l) {
  switch (l) {
    case NoiseLevel::DecoherenceOnly: return "decoherence_only";
    case NoiseLevel::WithZz: return "with_zz";
    case NoiseLevel::WithZzz: return "with_zzz";
  }
  return "?";
}

struct NoiseModel {
  NoiseLevel level = NoiseLevel::DecoherenceOnly;
  double t1_q1_ns = 20000.0;
  double t1_q3_ns = 20000.0;
  double t2_q1_ns = 20000.0;  // defaults follow T2 = T1
  double t2_q3_ns = 20000.0;
  bool decoherence = true;

  void validate() const {
    if (t1_q1_ns <= 0 || t1_q3_ns <= 0 || t2_q1_ns <= 0 || t2_q3_ns <= 0)
      throw ValidationError("coherence times must be positive");
    if (t2_q1_ns > 2.0 * t1_q1_ns + 1e-9 || t2_q3_ns > 2.0 * t1_q3_ns + 1e-9)
      throw ValidationError("unphysical noise model: T2 must be <= 2*T1");
  }
};

// Stray Pauli coefficients at the ON bias, alpha convention (2^-N parity
// normalization).  Three-body entries are conditioned on the spectator
// Z eigenvalues z2, z4, z5.
struct StrayTerms {
  double z13 = 0.0;
  double z123 = 0.0;
  double z134 = 0.0;
  double z135 = 0.0;

  double effective_z13(int z2, int z4, int z5) const {
    return z13 + z123 * z2 + z134 * z4 + z135 * z5;
  }
};

struct SpectatorConfig {
  int z2 = +1, z4 = +1, z5 = +1;
};

// Two-qubit density matrix on (Q1, Q3); basis order 00, 01, 10, 11 with Q1
// the leading bit.
using Density = Eigen::Matrix4cd;

namespace gate_detail {

inline const Eigen::Matrix4cd& iswap_ideal() {
  static const Eigen::Matrix4cd u = [] {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    const std::complex<double> mi(0.0, -1.0);
    m(0, 0) = 1.0;
    m(3, 3) = 1.0;
    m(1, 2) = mi;
    m(2, 1) = mi;
    return m;
  }();
  return u;
}

// exp(-i theta (X1X3 + Y1Y3)/2): rotation within span{|01>, |10>}.
inline Eigen::Matrix4cd iswap_segment(double theta) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  const double c = std::cos(theta);
  const std::complex<double> ms(0.0, -std::sin(theta));
  u(1, 1) = c;
  u(2, 2) = c;
  u(1, 2) = ms;
  u(2, 1) = ms;
  return u;
}

// Calibrated-frame stray propagator: with both gate qubits' rotating frames
// pinned to their biased 0->1 transitions, a stray alpha on Z1Z3 leaves
// |00>, |01>, |10> stationary and advances |11> at the spectroscopic rate
// 4*alpha.
inline Eigen::Matrix4cd stray_segment(double alpha_eff_mhz, double dt_ns) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  const double phase = kPhasePerMhzNs * 4.0 * alpha_eff_mhz * dt_ns;
  u(3, 3) = std::exp(std::complex<double>(0.0, -phase));
  return u;
}

inline Eigen::Matrix4cd lift(const Eigen::Matrix2cd& k, int which) {
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          int row = which == 0 ? 2 * a + b : 2 * b + a;
          int col = which == 0 ? 2 * c + d : 2 * d + c;
          if (b == d) out(row, col) += k(a, c);
        }
  return out;
}

// Amplitude damping followed by pure dephasing on one qubit;
// 1/T_phi = 1/T2 - 1/(2 T1).
inline void apply_relaxation(Density& rho, int which, double t1, double t2,
                             double dt) {
  const double p = 1.0 - std::exp(-dt / t1);
  const double inv_tphi = std::max(0.0, 1.0 / t2 - 0.5 / t1);
  const double lam = 1.0 - std::exp(-2.0 * dt * inv_tphi);

  Eigen::Matrix2cd k0 = Eigen::Matrix2cd::Zero(), k1 = Eigen::Matrix2cd::Zero();
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - p);
  k1(0, 1) = std::sqrt(p);
  Eigen::Matrix4cd a0 = lift(k0, which), a1 = lift(k1, which);
  rho = (a0 * rho * a0.adjoint() + a1 * rho * a1.adjoint()).eval();

  if (lam > 0.0) {
    Eigen::Matrix2cd d0 = Eigen::Matrix2cd::Zero(),
                     d1 = Eigen::Matrix2cd::Zero();
    d0(0, 0) = 1.0;
    d0(1, 1) = std::sqrt(1.0 - lam);
    d1(1, 1) = std::sqrt(lam);
    Eigen::Matrix4cd b0 = lift(d0, which), b1 = lift(d1, which);
    rho = (b0 * rho * b0.adjoint() + b1 * rho * b1.adjoint()).eval();
  }
}

// Linear channel application; no physicality checks so the process
// reconstruction can push matrix units through it.
inline Density apply_channel(const Density& input, const PulseShape& pulse,
                             const StrayTerms& stray,
                             const std::optional<SpectatorConfig>& spectator,
                             const NoiseModel& noise, double dt_ns) {
  if (!spectator) {  // uniform average over the 8 spectator configurations
    Density acc = Density::Zero();
    for (int z2 : {+1, -1})
      for (int z4 : {+1, -1})
        for (int z5 : {+1, -1})
          acc += apply_channel(input, pulse, stray, SpectatorConfig{z2, z4, z5},
                               noise, dt_ns);
    return acc / 8.0;
  }

  const double alpha_eff =
      stray.effective_z13(spectator->z2, spectator->z4, spectator->z5);
  const double duration = pulse.duration_ns();
  const int steps = std::max(1, static_cast<int>(std::ceil(duration / dt_ns)));
  const double step = duration / steps;

  Density rho = input;
  for (int s = 0; s < steps; ++s) {
    const double t0 = s * step;
    // exact pulse area over the step: the exchange segment carries no
    // time-discretization error, only the stray/exchange splitting does
    const double theta = kPhasePerMhzNs * pulse_area(pulse, t0, t0 + step);
    Eigen::Matrix4cd u =
        stray_segment(alpha_eff, step) * iswap_segment(theta);
    rho = (u * rho * u.adjoint()).eval();
    if (noise.decoherence) {
      apply_relaxation(rho, 0, noise.t1_q1_ns, noise.t2_q1_ns, step);
      apply_relaxation(rho, 1, noise.t1_q3_ns, noise.t2_q3_ns, step);
    }
  }
  return rho;
}

}  // namespace gate_detail

// One full-pulse density-matrix propagation of the per-step model
//   rho -> Lambda(Q1) o Lambda(Q3) o U_stray o U_iSWAP [rho].
// spectator = nullopt averages uniformly over the 8 spectator
// configurations entering the three-body stray terms.
inline Density evolve(const Density& initial, const PulseShape& pulse,
                      const StrayTerms& stray,
                      const std::optional<SpectatorConfig>& spectator,
                      const NoiseModel& noise, double dt_ns = 0.1) {
  if (dt_ns <= 0.0 || dt_ns > 0.5)
    throw Error("evolve: dt must lie in (0, 0.5] ns");
  noise.validate();
  if (std::abs(initial.trace().real() - 1.0) > 1e-9 ||
      std::abs(initial.trace().imag()) > 1e-9)
    throw Error("evolve: initial density matrix must have unit trace");
  return gate_detail::apply_channel(initial, pulse, stray, spectator, noise,
                                    dt_ns);
}

struct FidelityOptions {
  double dt_ns = 0.1;
  bool phase_corrected = true;  // single-qubit Z freedom on the target
  bool spectator_average = true;
  SpectatorConfig spectator;  // used when spectator_average = false
};

namespace gate_detail {

inline double process_fidelity_vs(const std::array<Density, 16>& evolved,
                                  const Eigen::Matrix4cd& target) {
  // F_pro = (1/d^2) sum_ij tr[(U E_ij U^dag)^dag E(E_ij)]
  double acc = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
      e(i, j) = 1.0;
      Eigen::Matrix4cd ideal = target * e * target.adjoint();
      acc += (ideal.adjoint() * evolved[i * 4 + j]).trace().real();
    }
  return acc / 16.0;
}

inline double best_fidelity(const std::array<Density, 16>& evolved,
                            bool phase_corrected) {
  if (!phase_corrected) return process_fidelity_vs(evolved, iswap_ideal());
  auto fid = [&](double a, double b) {
    Eigen::Vector4cd d;
    d << 1.0, std::exp(std::complex<double>(0, a)),
        std::exp(std::complex<double>(0, b)),
        std::exp(std::complex<double>(0, a + b));
    Eigen::Matrix4cd target = d.asDiagonal() * iswap_ideal();
    return process_fidelity_vs(evolved, target);
  };
  double best = -1.0, ba = 0.0, bb = 0.0;
  const int n = 24;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double f = fid(kTwoPi * i / n, kTwoPi * j / n);
      if (f > best) {
        best = f;
        ba = kTwoPi * i / n;
        bb = kTwoPi * j / n;
      }
    }
  double span = kTwoPi / n;
  for (int round = 0; round < 24; ++round) {
    bool improved = false;
    for (double da : {-span, 0.0, span})
      for (double db : {-span, 0.0, span}) {
        if (da == 0.0 && db == 0.0) continue;
        double f = fid(ba + da, bb + db);
        if (f > best) {
          best = f;
          ba += da;
          bb += db;
          improved = true;
        }
      }
    if (!improved) span *= 0.5;
  }
  return best;
}

}  // namespace gate_detail

// Average gate error 1 - F_avg, F_avg = (d F_pro + 1)/(d + 1) with d = 4.
// The process map is reconstructed by propagating the complete basis of
// matrix units through the channel.
inline double process_error(const PulseShape& pulse, const StrayTerms& stray,
                            const NoiseModel& noise,
                            const FidelityOptions& opts = {}) {
  noise.validate();
  std::optional<SpectatorConfig> spec;
  if (!opts.spectator_average) spec = opts.spectator;

  std::array<Density, 16> evolved;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Density e = Density::Zero();
      e(i, j) = 1.0;
      evolved[i * 4 + j] =
          gate_detail::apply_channel(e, pulse, stray, spec, noise, opts.dt_ns);
    }
  double f_pro = gate_detail::best_fidelity(evolved, opts.phase_corrected);
  double f_avg = (4.0 * f_pro + 1.0) / 5.0;
  return 1.0 - f_avg;
}

}  // namespace qcell
