#pragma once

#include <complex>
#include <vector>

#include "levsim/model.hpp"

namespace levsim {

struct ModeAmplitudeState {
  std::complex<double> a_x{0.0, 0.0};
  std::complex<double> a_y{0.0, 0.0};
  double t = 0.0;
};

struct PhononState {
  double N_x = 0.0;
  double N_y = 0.0;
  double t = 0.0;
};

struct AmplitudeDerivative {
  std::complex<double> da_x, da_y;
};

struct PhononDerivative {
  double dN_x, dN_y;
};

// Rotating-frame amplitude equations with intensity-dependent rates
// Gamma_x = 2(gamma_gx + 24 gamma_cx |a_x|^2),
// Gamma_y = 2(gamma_gy - gamma_ay + 24 gamma_cy |a_y|^2).
AmplitudeDerivative amplitude_rhs(const ModeAmplitudeState& state,
                                  const DerivedParams& params,
                                  const SystemConfig& config);

// Population balance with the interference pump
//   i beta_x [conj(a_y) a_x - conj(a_x) a_y]   (and the y counterpart).
// The cubic feedback responds to the oscillation energy, which for the
// populations is the phonon number itself, so the damping here closes as
// 2[gamma_g -/+ gamma_a + 12 gamma_c (2N+1)]. The amplitude form would
// leave a gain-saturated mode pumping its population without bound.
PhononDerivative phonon_rhs(const PhononState& phonons,
                            const ModeAmplitudeState& amplitudes,
                            const SystemConfig& config,
                            const DerivedParams& params);

struct AmplitudeTrajectory {
  std::vector<double> t;
  std::vector<std::complex<double>> a_x, a_y;
};

struct CoupledTrajectory {
  std::vector<double> t;
  std::vector<std::complex<double>> a_x, a_y;
  std::vector<double> N_x, N_y;
  long negative_clamps = 0;  // times a phonon component was clamped at 0
};

// Fixed-step classical RK4. Throws StepTooLarge at the first non-finite
// state, reporting the step index.
AmplitudeTrajectory integrate_amplitudes(const ModeAmplitudeState& initial,
                                         const SystemConfig& config,
                                         const DerivedParams& params,
                                         double t_end, double dt,
                                         int record_stride = 1);

// Co-integrates amplitudes and populations as one 6-dimensional system.
CoupledTrajectory integrate_coupled(const ModeAmplitudeState& amplitudes0,
                                    const PhononState& phonons0,
                                    const SystemConfig& config,
                                    const DerivedParams& params,
                                    double t_end, double dt,
                                    int record_stride = 1);

struct PositionSeries {
  std::vector<double> t;
  std::vector<double> Q;
};

// Carrier re-multiplication Q_j = Q0 Re{a_j exp[i(omega_0 -/+ omega_r/2) t]}
// (minus for x, plus for y). The output grid is oversampled relative to the
// amplitude grid; amplitudes are linearly interpolated.
PositionSeries reconstruct_position(const AmplitudeTrajectory& trajectory,
                                    const DerivedParams& params,
                                    const SystemConfig& config, Mode mode,
                                    int oversample = 32);

}  // namespace levsim
