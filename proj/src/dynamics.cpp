#include "levsim/dynamics.hpp"

#include <array>
#include <cmath>
#include <string>

#include "levsim/constants.hpp"
#include "levsim/errors.hpp"

namespace levsim {
namespace {

struct Rates {
  double Gamma_x;
  double Gamma_y;
};

Rates amplitude_rates(const SystemConfig& c, const std::complex<double>& a_x,
                      const std::complex<double>& a_y) {
  return {2.0 * (c.gamma_gx + 24.0 * c.gamma_cx * std::norm(a_x)),
          2.0 * (c.gamma_gy - c.gamma_ay + 24.0 * c.gamma_cy * std::norm(a_y))};
}

template <std::size_t N, typename Rhs>
void rk4_step(std::array<double, N>& y, double t, double dt, const Rhs& rhs) {
  std::array<double, N> k1, k2, k3, k4, tmp;
  rhs(y, t, k1);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  rhs(tmp, t + 0.5 * dt, k2);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  rhs(tmp, t + 0.5 * dt, k3);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
  rhs(tmp, t + dt, k4);
  for (std::size_t i = 0; i < N; ++i) {
    y[i] += dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
  }
}

template <std::size_t N>
bool all_finite(const std::array<double, N>& y) {
  for (double v : y) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

long step_count(double t_end, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::OutOfRange, "dt must be > 0");
  if (!(t_end > 0.0)) fail(ErrorCode::OutOfRange, "t_end must be > 0");
  return static_cast<long>(std::llround(t_end / dt));
}

}  // namespace

AmplitudeDerivative amplitude_rhs(const ModeAmplitudeState& state,
                                  const DerivedParams& params,
                                  const SystemConfig& config) {
  const auto [Gx, Gy] = amplitude_rates(config, state.a_x, state.a_y);
  const std::complex<double> i{0.0, 1.0};
  AmplitudeDerivative d;
  d.da_x = -0.5 * i * (params.Delta - i * Gx) * state.a_x - i * params.beta_x * state.a_y;
  d.da_y = -i * params.beta_y * state.a_x + 0.5 * i * (params.Delta + i * Gy) * state.a_y;
  return d;
}

PhononDerivative phonon_rhs(const PhononState& phonons,
                            const ModeAmplitudeState& amplitudes,
                            const SystemConfig& config,
                            const DerivedParams& params) {
  const double Gx = 2.0 * (config.gamma_gx +
                           12.0 * config.gamma_cx * (2.0 * phonons.N_x + 1.0));
  const double Gy = 2.0 * (config.gamma_gy - config.gamma_ay +
                           12.0 * config.gamma_cy * (2.0 * phonons.N_y + 1.0));
  // i bx [conj(ay) ax - conj(ax) ay] = 2 bx Im(conj(ax) ay); antisymmetric
  // between the modes up to the beta_x/beta_y ratio.
  const double exchange = 2.0 * std::imag(std::conj(amplitudes.a_x) * amplitudes.a_y);
  PhononDerivative d;
  d.dN_x = -Gx * phonons.N_x + (config.D_tx - 6.0 * config.gamma_cx) +
           params.beta_x * exchange;
  d.dN_y = -Gy * phonons.N_y + (config.gamma_ay + config.D_ty - 6.0 * config.gamma_cy) -
           params.beta_y * exchange;
  return d;
}

AmplitudeTrajectory integrate_amplitudes(const ModeAmplitudeState& initial,
                                         const SystemConfig& config,
                                         const DerivedParams& params,
                                         double t_end, double dt,
                                         int record_stride) {
  const long steps = step_count(t_end, dt);
  if (record_stride < 1) record_stride = 1;

  std::array<double, 4> y{initial.a_x.real(), initial.a_x.imag(),
                          initial.a_y.real(), initial.a_y.imag()};
  const auto rhs = [&](const std::array<double, 4>& s, double /*t*/,
                       std::array<double, 4>& out) {
    const ModeAmplitudeState st{{s[0], s[1]}, {s[2], s[3]}, 0.0};
    const AmplitudeDerivative d = amplitude_rhs(st, params, config);
    out = {d.da_x.real(), d.da_x.imag(), d.da_y.real(), d.da_y.imag()};
  };

  AmplitudeTrajectory traj;
  traj.t.reserve(steps / record_stride + 2);
  traj.a_x.reserve(steps / record_stride + 2);
  traj.a_y.reserve(steps / record_stride + 2);
  const auto record = [&](double t) {
    traj.t.push_back(t);
    traj.a_x.emplace_back(y[0], y[1]);
    traj.a_y.emplace_back(y[2], y[3]);
  };

  record(initial.t);
  for (long n = 0; n < steps; ++n) {
    rk4_step(y, initial.t + n * dt, dt, rhs);
    if (!all_finite(y)) {
      fail(ErrorCode::StepTooLarge,
           "non-finite amplitude state at step " + std::to_string(n + 1));
    }
    if ((n + 1) % record_stride == 0 || n + 1 == steps) {
      record(initial.t + (n + 1) * dt);
    }
  }
  return traj;
}

CoupledTrajectory integrate_coupled(const ModeAmplitudeState& amplitudes0,
                                    const PhononState& phonons0,
                                    const SystemConfig& config,
                                    const DerivedParams& params,
                                    double t_end, double dt,
                                    int record_stride) {
  const long steps = step_count(t_end, dt);
  if (record_stride < 1) record_stride = 1;

  std::array<double, 6> y{amplitudes0.a_x.real(), amplitudes0.a_x.imag(),
                          amplitudes0.a_y.real(), amplitudes0.a_y.imag(),
                          phonons0.N_x, phonons0.N_y};
  const auto rhs = [&](const std::array<double, 6>& s, double /*t*/,
                       std::array<double, 6>& out) {
    const ModeAmplitudeState amp{{s[0], s[1]}, {s[2], s[3]}, 0.0};
    const PhononState ph{s[4], s[5], 0.0};
    const AmplitudeDerivative da = amplitude_rhs(amp, params, config);
    const PhononDerivative dn = phonon_rhs(ph, amp, config, params);
    out = {da.da_x.real(), da.da_x.imag(), da.da_y.real(), da.da_y.imag(),
           dn.dN_x, dn.dN_y};
  };

  CoupledTrajectory traj;
  const auto record = [&](double t) {
    traj.t.push_back(t);
    traj.a_x.emplace_back(y[0], y[1]);
    traj.a_y.emplace_back(y[2], y[3]);
    traj.N_x.push_back(y[4]);
    traj.N_y.push_back(y[5]);
  };

  record(amplitudes0.t);
  for (long n = 0; n < steps; ++n) {
    rk4_step(y, amplitudes0.t + n * dt, dt, rhs);
    if (!all_finite(y)) {
      fail(ErrorCode::StepTooLarge,
           "non-finite coupled state at step " + std::to_string(n + 1));
    }
    for (int k = 4; k <= 5; ++k) {
      if (y[k] < 0.0) {
        y[k] = 0.0;
        ++traj.negative_clamps;
      }
    }
    if ((n + 1) % record_stride == 0 || n + 1 == steps) {
      record(amplitudes0.t + (n + 1) * dt);
    }
  }
  return traj;
}

PositionSeries reconstruct_position(const AmplitudeTrajectory& trajectory,
                                    const DerivedParams& params,
                                    const SystemConfig& config, Mode mode,
                                    int oversample) {
  if (trajectory.t.size() < 2) {
    fail(ErrorCode::InsufficientData, "reconstruct_position: trajectory too short");
  }
  if (oversample < 1) oversample = 1;

  const double carrier = mode == Mode::x ? params.omega_0 - 0.5 * params.omega_r
                                         : params.omega_0 + 0.5 * params.omega_r;
  const auto& amp = mode == Mode::x ? trajectory.a_x : trajectory.a_y;

  // Sample spacing: `oversample` points per carrier period, never coarser
  // than the amplitude grid.
  const double period = constants::two_pi / std::max(std::abs(carrier), 1e-300);
  const double amp_dt = trajectory.t[1] - trajectory.t[0];
  const double dt = std::min(period / oversample, amp_dt);

  const double t0 = trajectory.t.front();
  const double t1 = trajectory.t.back();
  const std::size_t n = static_cast<std::size_t>((t1 - t0) / dt) + 1;

  PositionSeries series;
  series.t.reserve(n);
  series.Q.reserve(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::min(t0 + i * dt, t1);
    while (seg + 2 < trajectory.t.size() && trajectory.t[seg + 1] < t) ++seg;
    const double w = (t - trajectory.t[seg]) /
                     (trajectory.t[seg + 1] - trajectory.t[seg]);
    const std::complex<double> a = (1.0 - w) * amp[seg] + w * amp[seg + 1];
    const std::complex<double> phase{std::cos(carrier * t), std::sin(carrier * t)};
    series.t.push_back(t);
    series.Q.push_back(config.Q0 * std::real(a * phase));
  }
  return series;
}

}  // namespace levsim
