#pragma once

#include <cstdint>
#include <vector>

#include "levsim/model.hpp"

namespace levsim {

struct PhaseSpaceState {
  double Q_x = 0.0, P_x = 0.0;
  double Q_y = 0.0, P_y = 0.0;
  double t = 0.0;
};

// Amplitudes of the three white-noise channels per mode. The cooling
// back-action channel is multiplicative (applied with Q_j^2).
struct NoiseChannels {
  double sigma_T_x = 0.0;   // sqrt(2 kB T gamma_gj / (hbar omega_j))
  double sigma_T_y = 0.0;
  double sigma_Fa_x = 0.0;  // sqrt(D_tj)
  double sigma_Fa_y = 0.0;
  double cool_x = 0.0;      // 12 sqrt(Gamma_cj^2 / gamma_cj)
  double cool_y = 0.0;
};

NoiseChannels noise_channels(const SystemConfig& config);

// Default Langevin initial state from the configured mode amplitudes:
// Q_j = Q0 Re(a_j0), P_j = -Q0 Im(a_j0).
PhaseSpaceState initial_phase_space(const SystemConfig& config);

// Largest step that still resolves the carrier.
double max_langevin_dt(const SystemConfig& config);

// One Euler-Maruyama update (Ito convention; multiplicative channel uses the
// pre-step Q_j^2). `normals` supplies the six independent standard normals
// in the order T_x, Fa_x, Fc_x, T_y, Fa_y, Fc_y.
PhaseSpaceState langevin_step(const PhaseSpaceState& state,
                              const SystemConfig& config,
                              const DerivedParams& params,
                              const NoiseChannels& noise, double dt,
                              const double normals[6]);

struct PhaseTrajectory {
  std::vector<double> t, Q_x, P_x, Q_y, P_y;
};

PhaseTrajectory simulate_trajectory(const PhaseSpaceState& initial,
                                    const SystemConfig& config,
                                    const DerivedParams& params, double t_end,
                                    double dt, std::uint64_t seed,
                                    int record_stride = 1);

struct EnsembleResult {
  std::vector<double> t;  // strided sample times
  std::vector<double> mean_Q_x, var_Q_x;
  std::vector<double> mean_P_x, var_P_x;
  std::vector<double> mean_Q_y, var_Q_y;
  std::vector<double> mean_P_y, var_P_y;
  // intensity I_j = |a_j|^2 with a = (Q + iP)/2, one series per trajectory
  std::vector<std::vector<double>> intensity_x;
  std::vector<std::vector<double>> intensity_y;
  int n_traj = 0;
  std::uint64_t master_seed = 0;
  double dt = 0.0;
  int record_stride = 1;
};

// Trajectories run in parallel with per-trajectory streams seeded from
// (master_seed, index); the aggregation order is fixed, so results are
// bit-identical for any thread count.
EnsembleResult ensemble_run(const SystemConfig& config,
                            const DerivedParams& params, int n_traj,
                            double t_end, double dt, std::uint64_t master_seed,
                            int record_stride = 1);

struct G2Point {
  double tau;
  double g2;
  double stderr_;
};

// Classical estimator g2(tau) = <I(t) I(t+tau)> / <I(t)>^2 pooled over the
// ensemble and the stationary window (first `warmup_frac` of each trajectory
// discarded). Standard errors by jackknife over trajectories. Lags snap to
// the sample stride.
std::vector<G2Point> estimate_g2(const EnsembleResult& ensemble, Mode mode,
                                 const std::vector<double>& tau_grid,
                                 double warmup_frac = 0.2);

}  // namespace levsim
