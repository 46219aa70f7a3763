#include "levsim/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levsim/constants.hpp"
#include "levsim/errors.hpp"
#include "levsim/parallel.hpp"
#include "levsim/rng.hpp"

namespace levsim {
namespace {

double thermal_amplitude(double temperature, double gamma_g, double omega) {
  if (temperature <= 0.0 || gamma_g <= 0.0) return 0.0;
  return std::sqrt(2.0 * constants::k_boltzmann * temperature * gamma_g /
                   (constants::hbar * omega));
}

double cooling_amplitude(double Gamma_c, double gamma_c, const char* name) {
  if (gamma_c > 0.0) return 12.0 * std::sqrt(Gamma_c * Gamma_c / gamma_c);
  if (Gamma_c != 0.0) {
    fail(ErrorCode::OutOfRange,
         std::string(name) + ": cooling back-action without cooling (gamma_c = 0)");
  }
  return 0.0;
}

void check_step(const SystemConfig& config, double t_end, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::OutOfRange, "dt must be > 0");
  if (!(t_end > 0.0)) fail(ErrorCode::OutOfRange, "t_end must be > 0");
  if (dt > max_langevin_dt(config)) {
    fail(ErrorCode::OutOfRange,
         "dt too coarse to resolve the carrier (limit 2*pi/(64*max omega))");
  }
}

// Noise draws happen only for active channels, so zero-noise runs stay
// deterministic and cheap; the stream layout is fixed by the configuration.
struct ActiveChannels {
  bool thermal_x, diffusion_x, cooling_x;
  bool thermal_y, diffusion_y, cooling_y;
};

ActiveChannels active_channels(const NoiseChannels& n) {
  return {n.sigma_T_x > 0.0,  n.sigma_Fa_x > 0.0, n.cool_x > 0.0,
          n.sigma_T_y > 0.0,  n.sigma_Fa_y > 0.0, n.cool_y > 0.0};
}

}  // namespace

NoiseChannels noise_channels(const SystemConfig& config) {
  NoiseChannels n;
  n.sigma_T_x = thermal_amplitude(config.temperature, config.gamma_gx, config.omega_x);
  n.sigma_T_y = thermal_amplitude(config.temperature, config.gamma_gy, config.omega_y);
  n.sigma_Fa_x = std::sqrt(config.D_tx);
  n.sigma_Fa_y = std::sqrt(config.D_ty);
  n.cool_x = cooling_amplitude(config.Gamma_cx, config.gamma_cx, "Gamma_cx");
  n.cool_y = cooling_amplitude(config.Gamma_cy, config.gamma_cy, "Gamma_cy");
  return n;
}

PhaseSpaceState initial_phase_space(const SystemConfig& config) {
  PhaseSpaceState s;
  s.Q_x = config.Q0 * config.a_x0.real();
  s.P_x = -config.Q0 * config.a_x0.imag();
  s.Q_y = config.Q0 * config.a_y0.real();
  s.P_y = -config.Q0 * config.a_y0.imag();
  s.t = 0.0;
  return s;
}

double max_langevin_dt(const SystemConfig& config) {
  return constants::two_pi / (64.0 * std::max(config.omega_x, config.omega_y));
}

PhaseSpaceState langevin_step(const PhaseSpaceState& state,
                              const SystemConfig& config,
                              const DerivedParams& params,
                              const NoiseChannels& noise, double dt,
                              const double normals[6]) {
  const double coupling =
      params.kappa * config.delta / (params.mass * std::sqrt(config.omega_x * config.omega_y));
  const double cos_mod = std::cos(params.omega_r * state.t);
  const double sqrt_dt = std::sqrt(dt);

  const double Qx2 = state.Q_x * state.Q_x;
  const double Qy2 = state.Q_y * state.Q_y;

  PhaseSpaceState out;
  out.Q_x = state.Q_x + config.omega_x * state.P_x * dt;
  out.Q_y = state.Q_y + config.omega_y * state.P_y * dt;

  double drift_Px = -config.omega_x * state.Q_x -
                    2.0 * (config.gamma_gx + 24.0 * config.gamma_cx * Qx2) * state.P_x -
                    coupling * cos_mod * state.Q_y;
  double drift_Py = -config.omega_y * state.Q_y -
                    2.0 * (config.gamma_gy - config.gamma_ay + 24.0 * config.gamma_cy * Qy2) * state.P_y -
                    coupling * cos_mod * state.Q_x;

  const double noise_Px = noise.sigma_T_x * normals[0] +
                          noise.sigma_Fa_x * normals[1] +
                          noise.cool_x * Qx2 * normals[2];
  const double noise_Py = noise.sigma_T_y * normals[3] +
                          noise.sigma_Fa_y * normals[4] +
                          noise.cool_y * Qy2 * normals[5];

  out.P_x = state.P_x + drift_Px * dt + noise_Px * sqrt_dt;
  out.P_y = state.P_y + drift_Py * dt + noise_Py * sqrt_dt;
  out.t = state.t + dt;

  if (!std::isfinite(out.Q_x) || !std::isfinite(out.P_x) ||
      !std::isfinite(out.Q_y) || !std::isfinite(out.P_y)) {
    fail(ErrorCode::NonFinite, "non-finite phase-space state");
  }
  return out;
}

PhaseTrajectory simulate_trajectory(const PhaseSpaceState& initial,
                                    const SystemConfig& config,
                                    const DerivedParams& params, double t_end,
                                    double dt, std::uint64_t seed,
                                    int record_stride) {
  check_step(config, t_end, dt);
  if (record_stride < 1) record_stride = 1;
  const NoiseChannels noise = noise_channels(config);
  const ActiveChannels w = active_channels(noise);
  NormalSampler draw(seed);

  const long steps = static_cast<long>(std::llround(t_end / dt));
  PhaseTrajectory traj;
  const std::size_t cap = static_cast<std::size_t>(steps / record_stride) + 2;
  traj.t.reserve(cap);
  traj.Q_x.reserve(cap);
  traj.P_x.reserve(cap);
  traj.Q_y.reserve(cap);
  traj.P_y.reserve(cap);

  PhaseSpaceState s = initial;
  const auto record = [&]() {
    traj.t.push_back(s.t);
    traj.Q_x.push_back(s.Q_x);
    traj.P_x.push_back(s.P_x);
    traj.Q_y.push_back(s.Q_y);
    traj.P_y.push_back(s.P_y);
  };

  record();
  double normals[6] = {0, 0, 0, 0, 0, 0};
  for (long n = 0; n < steps; ++n) {
    if (w.thermal_x) normals[0] = draw();
    if (w.diffusion_x) normals[1] = draw();
    if (w.cooling_x) normals[2] = draw();
    if (w.thermal_y) normals[3] = draw();
    if (w.diffusion_y) normals[4] = draw();
    if (w.cooling_y) normals[5] = draw();
    try {
      s = langevin_step(s, config, params, noise, dt, normals);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonFinite) {
        fail(ErrorCode::NonFinite,
             "non-finite phase-space state at step " + std::to_string(n + 1));
      }
      throw;
    }
    if ((n + 1) % record_stride == 0 || n + 1 == steps) record();
  }
  return traj;
}

EnsembleResult ensemble_run(const SystemConfig& config,
                            const DerivedParams& params, int n_traj,
                            double t_end, double dt, std::uint64_t master_seed,
                            int record_stride) {
  if (n_traj < 2) {
    fail(ErrorCode::InvalidArgument,
         "ensemble_run: n_traj must be >= 2 (variance undefined)");
  }
  check_step(config, t_end, dt);
  if (record_stride < 1) record_stride = 1;

  const PhaseSpaceState initial = initial_phase_space(config);

  EnsembleResult result;
  result.n_traj = n_traj;
  result.master_seed = master_seed;
  result.dt = dt;
  result.record_stride = record_stride;
  result.intensity_x.resize(n_traj);
  result.intensity_y.resize(n_traj);

  const long steps = static_cast<long>(std::llround(t_end / dt));
  std::vector<long> sample_steps;  // step indices that get recorded
  for (long n = 0; n < steps; ++n) {
    if ((n + 1) % record_stride == 0 || n + 1 == steps) sample_steps.push_back(n + 1);
  }
  const std::size_t n_samples = sample_steps.size();
  result.t.resize(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) result.t[k] = sample_steps[k] * dt;

  // Quadrature sums are accumulated per trajectory slab and reduced in index
  // order afterwards, so the result does not depend on thread scheduling.
  std::vector<std::vector<double>> quad_samples(n_traj);

  parallel_for(static_cast<std::size_t>(n_traj), [&](std::size_t idx) {
    PhaseTrajectory traj;
    try {
      traj = simulate_trajectory(initial, config, params, t_end, dt,
                                 trajectory_seed(master_seed, idx), record_stride);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonFinite) {
        fail(ErrorCode::NonFinite,
             "trajectory " + std::to_string(idx) + ": " + e.what());
      }
      throw;
    }
    // drop the t=0 record to align with sample_steps
    auto& quads = quad_samples[idx];
    quads.resize(4 * n_samples);
    auto& ix = result.intensity_x[idx];
    auto& iy = result.intensity_y[idx];
    ix.resize(n_samples);
    iy.resize(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
      const double qx = traj.Q_x[k + 1], px = traj.P_x[k + 1];
      const double qy = traj.Q_y[k + 1], py = traj.P_y[k + 1];
      quads[4 * k + 0] = qx;
      quads[4 * k + 1] = px;
      quads[4 * k + 2] = qy;
      quads[4 * k + 3] = py;
      ix[k] = 0.25 * (qx * qx + px * px);  // |a|^2, a = (Q + iP)/2
      iy[k] = 0.25 * (qy * qy + py * py);
    }
  });

  const auto finalize = [&](int comp, std::vector<double>& mean,
                            std::vector<double>& var) {
    mean.assign(n_samples, 0.0);
    var.assign(n_samples, 0.0);
    for (int i = 0; i < n_traj; ++i) {
      const auto& quads = quad_samples[i];
      for (std::size_t k = 0; k < n_samples; ++k) {
        const double v = quads[4 * k + comp];
        mean[k] += v;
        var[k] += v * v;
      }
    }
    for (std::size_t k = 0; k < n_samples; ++k) {
      const double sum = mean[k];
      mean[k] = sum / n_traj;
      var[k] = std::max(0.0, (var[k] - sum * sum / n_traj) / (n_traj - 1));
    }
  };
  finalize(0, result.mean_Q_x, result.var_Q_x);
  finalize(1, result.mean_P_x, result.var_P_x);
  finalize(2, result.mean_Q_y, result.var_Q_y);
  finalize(3, result.mean_P_y, result.var_P_y);
  return result;
}

std::vector<G2Point> estimate_g2(const EnsembleResult& ensemble, Mode mode,
                                 const std::vector<double>& tau_grid,
                                 double warmup_frac) {
  if (ensemble.n_traj < 2) {
    fail(ErrorCode::InsufficientData, "estimate_g2: need at least 2 trajectories");
  }
  if (!(warmup_frac >= 0.0 && warmup_frac < 1.0)) {
    fail(ErrorCode::InvalidArgument, "warmup_frac must be in [0, 1)");
  }
  const auto& series =
      mode == Mode::x ? ensemble.intensity_x : ensemble.intensity_y;
  const std::size_t total = series.front().size();
  const std::size_t start = static_cast<std::size_t>(warmup_frac * total);
  const std::size_t window = total - start;
  const double sample_dt = ensemble.dt * ensemble.record_stride;

  std::vector<std::size_t> lags;
  lags.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    if (tau < 0.0) fail(ErrorCode::InvalidArgument, "estimate_g2: negative tau");
    const auto lag = static_cast<std::size_t>(std::llround(tau / sample_dt));
    if (lag + 2 > window) {
      fail(ErrorCode::InsufficientData,
           "estimate_g2: stationary window shorter than requested tau");
    }
    lags.push_back(lag);
  }

  const int n = ensemble.n_traj;
  // Per-trajectory first moments and lag products; pooled ratio with
  // jackknife-over-trajectories standard errors.
  std::vector<double> mean_i(n, 0.0);
  std::vector<std::vector<double>> corr_i(n, std::vector<double>(lags.size(), 0.0));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const auto& I = series[i];
    double m = 0.0;
    for (std::size_t k = start; k < total; ++k) m += I[k];
    mean_i[i] = m / window;
    for (std::size_t j = 0; j < lags.size(); ++j) {
      const std::size_t lag = lags[j];
      const std::size_t count = window - lag;
      double acc = 0.0;
      for (std::size_t k = start; k + lag < total; ++k) acc += I[k] * I[k + lag];
      corr_i[i][j] = acc / count;
    }
  });

  double sum_mean = 0.0;
  for (int i = 0; i < n; ++i) sum_mean += mean_i[i];

  std::vector<G2Point> out;
  out.reserve(lags.size());
  for (std::size_t j = 0; j < lags.size(); ++j) {
    double sum_corr = 0.0;
    for (int i = 0; i < n; ++i) sum_corr += corr_i[i][j];
    const double mean_all = sum_mean / n;
    const double g2 = (sum_corr / n) / (mean_all * mean_all);

    double jk_mean = 0.0;
    std::vector<double> jk(n);
    for (int i = 0; i < n; ++i) {
      const double m = (sum_mean - mean_i[i]) / (n - 1);
      const double c = (sum_corr - corr_i[i][j]) / (n - 1);
      jk[i] = c / (m * m);
      jk_mean += jk[i];
    }
    jk_mean /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) var += (jk[i] - jk_mean) * (jk[i] - jk_mean);
    const double se = std::sqrt(var * (n - 1) / n);

    out.push_back({lags[j] * sample_dt, g2, se});
  }
  return out;
}

}  // namespace levsim
