#pragma once

#include <complex>
#include <vector>

#include "levsim/model.hpp"

namespace levsim {

struct OccupancyPair {
  double N_x = 0.0;
  double N_y = 0.0;

  double of(Mode m) const { return m == Mode::x ? N_x : N_y; }
};

// Gamma_j = 2 [gamma_gj + 12 gamma_cj (2 N_j + 1)]
double effective_damping(const SystemConfig& config, Mode mode,
                         double mean_phonons);

struct Susceptibility {
  Mode mode;
  double omega;               // rad/s
  std::complex<double> chi;   // m/N
};

// chi_j(w) = (1 + A_v + B_v) / (m ((w_j^2 - w^2) + i w Gamma_j)) with the
// sideband terms A_v, B_v of the opposite mode at w -/+ omega_r. Reduces to
// the bare Lorentzian at delta = 0. Throws PoleHit when a denominator
// underflows the guard threshold.
Susceptibility susceptibility(double omega, const SystemConfig& config,
                              const DerivedParams& params, Mode mode,
                              const OccupancyPair& occupancy);

struct NoiseBudget {
  double S_T;  // 2 m gamma_gj kB T            (N^2/Hz)
  double S_H;  // hbar m omega_j D_tj          (N^2/Hz)
  double S_C;  // 36 hbar m omega_j Gc^2/gc [4N^2+4N+1]  (N^2/Hz)

  double white_total() const { return S_T + S_H + S_C; }
};

NoiseBudget noise_budget(const SystemConfig& config,
                         const DerivedParams& params, Mode mode,
                         double mean_phonons);

// Flat imprecision floor l_j^2 / (eta^2 phi).
double shot_noise_floor(const SystemConfig& config, const DerivedParams& params,
                        Mode mode);

// <|q_j(w)|^2> = |chi_j|^2 (S_T + S_H + S_C) + l_j^2/(eta^2 phi)
double position_psd(double omega, const SystemConfig& config,
                    const DerivedParams& params, Mode mode,
                    const OccupancyPair& occupancy);

struct ForcePsd {
  double S_T, S_H, S_C;
  double S_s;    // shot-noise floor referred through the susceptibility
  double total;  // N^2/Hz
};

// <|F_j(w)|^2> = S_T + S_H + S_C + S_s(w),
// S_s(w) = (l_j^2/(eta^2 phi)) / |chi_j(w)|^2. Normalizing by the
// DerivedParams scale S_s0_j gives the dimensionless ratio S_s/S_s0 used in
// comparison plots.
ForcePsd force_psd(double omega, const SystemConfig& config,
                   const DerivedParams& params, Mode mode,
                   const OccupancyPair& occupancy);

struct SensitivityMinimum {
  double omega;     // rad/s
  double sqrt_psd;  // N/sqrt(Hz)
};

std::vector<double> linspace(double lo, double hi, int points);

// Local minima of sqrt(force_psd) over the grid, each refined by a local
// re-scan plus golden-section search (relative omega tolerance 1e-9).
// Plateau ties resolve toward lower omega. Grid-boundary minima are not
// reported.
std::vector<SensitivityMinimum> find_sensitivity_minima(
    const SystemConfig& config, const DerivedParams& params, Mode mode,
    const std::vector<double>& omega_grid, const OccupancyPair& occupancy);

}  // namespace levsim
