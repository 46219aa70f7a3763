#include "levsim/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "levsim/constants.hpp"
#include "levsim/errors.hpp"

namespace levsim {
namespace {

struct ModeView {
  double omega_j, omega_v;  // own / opposite trap frequency
  double Gamma_j, Gamma_v;  // effective dampings
};

ModeView mode_view(const SystemConfig& c, Mode mode, const OccupancyPair& occ) {
  if (mode == Mode::x) {
    return {c.omega_x, c.omega_y, effective_damping(c, Mode::x, occ.N_x),
            effective_damping(c, Mode::y, occ.N_y)};
  }
  return {c.omega_y, c.omega_x, effective_damping(c, Mode::y, occ.N_y),
          effective_damping(c, Mode::x, occ.N_x)};
}

const char* denominator_name(int which) {
  switch (which) {
    case 0: return "carrier";
    case 1: return "lower sideband";
    default: return "upper sideband";
  }
}

}  // namespace

double effective_damping(const SystemConfig& config, Mode mode,
                         double mean_phonons) {
  if (!(mean_phonons >= 0.0)) fail(ErrorCode::OutOfRange, "mean_phonons");
  const double gamma_g = mode == Mode::x ? config.gamma_gx : config.gamma_gy;
  const double gamma_c = mode == Mode::x ? config.gamma_cx : config.gamma_cy;
  return 2.0 * (gamma_g + 12.0 * gamma_c * (2.0 * mean_phonons + 1.0));
}

Susceptibility susceptibility(double omega, const SystemConfig& config,
                              const DerivedParams& params, Mode mode,
                              const OccupancyPair& occupancy) {
  if (!(omega >= 0.0)) fail(ErrorCode::OutOfRange, "omega");
  const ModeView v = mode_view(config, mode, occupancy);
  const double m = params.mass;
  const double wr = params.omega_r;
  const std::complex<double> i{0.0, 1.0};

  // guard only against exact poles (undamped resonance hit dead-on)
  const double eps = 1e-300 * m * v.omega_j * v.omega_j;

  const std::complex<double> den_j =
      m * ((v.omega_j * v.omega_j - omega * omega) + i * omega * v.Gamma_j);
  const std::complex<double> den_a =
      m * ((v.omega_v * v.omega_v - (omega - wr) * (omega - wr)) +
           i * (omega - wr) * v.Gamma_v);
  const std::complex<double> den_b =
      m * ((v.omega_v * v.omega_v - (omega + wr) * (omega + wr)) +
           i * (omega + wr) * v.Gamma_v);

  const std::complex<double> dens[3] = {den_j, den_a, den_b};
  for (int k = 0; k < 3; ++k) {
    if (std::abs(dens[k]) < eps) {
      fail(ErrorCode::PoleHit,
           std::string("susceptibility: ") + denominator_name(k) +
               " denominator vanished");
    }
  }

  const double half_drive = params.kappa * config.delta / 2.0;
  const std::complex<double> numer = 1.0 + half_drive / den_a + half_drive / den_b;

  Susceptibility out;
  out.mode = mode;
  out.omega = omega;
  out.chi = numer / den_j;
  return out;
}

NoiseBudget noise_budget(const SystemConfig& config, const DerivedParams& params,
                         Mode mode, double mean_phonons) {
  if (!(mean_phonons >= 0.0)) fail(ErrorCode::OutOfRange, "mean_phonons");
  const double m = params.mass;
  const double omega_j = mode == Mode::x ? config.omega_x : config.omega_y;
  const double gamma_g = mode == Mode::x ? config.gamma_gx : config.gamma_gy;
  const double gamma_c = mode == Mode::x ? config.gamma_cx : config.gamma_cy;
  const double Gamma_c = mode == Mode::x ? config.Gamma_cx : config.Gamma_cy;
  const double D_t = mode == Mode::x ? config.D_tx : config.D_ty;

  NoiseBudget b;
  b.S_T = 2.0 * m * gamma_g * constants::k_boltzmann * config.temperature;
  b.S_H = constants::hbar * m * omega_j * D_t;
  if (gamma_c > 0.0) {
    const double N = mean_phonons;
    b.S_C = 36.0 * constants::hbar * m * omega_j * (Gamma_c * Gamma_c / gamma_c) *
            (4.0 * N * N + 4.0 * N + 1.0);
  } else {
    b.S_C = 0.0;
  }
  return b;
}

double shot_noise_floor(const SystemConfig& config, const DerivedParams& params,
                        Mode mode) {
  const double l = mode == Mode::x ? params.l_x : params.l_y;
  return l * l / (config.eta * config.eta * config.phi);
}

double position_psd(double omega, const SystemConfig& config,
                    const DerivedParams& params, Mode mode,
                    const OccupancyPair& occupancy) {
  const Susceptibility chi = susceptibility(omega, config, params, mode, occupancy);
  const NoiseBudget b = noise_budget(config, params, mode, occupancy.of(mode));
  return std::norm(chi.chi) * b.white_total() + shot_noise_floor(config, params, mode);
}

ForcePsd force_psd(double omega, const SystemConfig& config,
                   const DerivedParams& params, Mode mode,
                   const OccupancyPair& occupancy) {
  const Susceptibility chi = susceptibility(omega, config, params, mode, occupancy);
  const NoiseBudget b = noise_budget(config, params, mode, occupancy.of(mode));
  ForcePsd out;
  out.S_T = b.S_T;
  out.S_H = b.S_H;
  out.S_C = b.S_C;
  out.S_s = shot_noise_floor(config, params, mode) / std::norm(chi.chi);
  out.total = out.S_T + out.S_H + out.S_C + out.S_s;
  return out;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) fail(ErrorCode::EmptyGrid, "linspace: bad range");
  std::vector<double> grid(points);
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = lo + i * step;
  grid.back() = hi;
  return grid;
}

std::vector<SensitivityMinimum> find_sensitivity_minima(
    const SystemConfig& config, const DerivedParams& params, Mode mode,
    const std::vector<double>& omega_grid, const OccupancyPair& occupancy) {
  if (omega_grid.empty()) fail(ErrorCode::EmptyGrid, "find_sensitivity_minima");

  const auto value = [&](double w) {
    return std::sqrt(force_psd(w, config, params, mode, occupancy).total);
  };

  std::vector<double> vals(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i) vals[i] = value(omega_grid[i]);

  std::vector<SensitivityMinimum> minima;
  for (std::size_t i = 1; i + 1 < omega_grid.size(); ++i) {
    // strictly below the left neighbour, not above the right: plateau ties
    // resolve to the lowest omega of the plateau
    if (!(vals[i] < vals[i - 1] && vals[i] <= vals[i + 1])) continue;

    double lo = omega_grid[i - 1];
    double hi = omega_grid[i + 1];

    // Narrow features (sideband dips) can be much sharper than the grid, so
    // contract the bracket by repeated local scans before polishing.
    for (int round = 0; round < 3; ++round) {
      const int k = 32;
      double best_w = lo, best_v = value(lo);
      for (int j = 1; j <= k; ++j) {
        const double w = lo + (hi - lo) * j / k;
        const double v = value(w);
        if (v < best_v) {
          best_v = v;
          best_w = w;
        }
      }
      const double cell = (hi - lo) / k;
      lo = std::max(lo, best_w - cell);
      hi = std::min(hi, best_w + cell);
    }

    // golden-section polish to relative omega tolerance 1e-9
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = value(x1), f2 = value(x2);
    while ((b - a) > 1e-9 * std::max(std::abs(a), 1.0)) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = value(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = value(x2);
      }
    }
    const double w_min = f1 <= f2 ? x1 : x2;
    minima.push_back({w_min, value(w_min)});
  }
  return minima;
}

}  // namespace levsim
