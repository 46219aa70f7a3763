#pragma once

#include <complex>
#include <optional>
#include <string>

#include <json.hpp>

namespace levsim {

enum class Mode { x, y };

// Frequency numbers in config files are either already angular (rad/s) or
// ordinary (Hz, multiplied by 2*pi on load). Internal storage is always
// angular.
enum class FrequencyConvention { angular, ordinary };

struct SystemConfig {
  double omega_x = 0.0;   // trap frequency, x mode (rad/s)
  double omega_y = 0.0;   // trap frequency, y mode (rad/s)
  double gamma_gx = 0.0;  // gas damping (rad/s)
  double gamma_gy = 0.0;
  double gamma_ay = 0.0;  // linear feedback amplification, y mode (rad/s)
  double gamma_cx = 0.0;  // nonlinear feedback cooling (rad/s)
  double gamma_cy = 0.0;
  double Gamma_cx = 0.0;  // cooling back-action (rad/s)
  double Gamma_cy = 0.0;
  double D_tx = 0.0;      // momentum diffusion (rad/s)
  double D_ty = 0.0;
  double delta = 0.0;     // potential rotation angle, dimensionless
  std::optional<double> omega_r;          // modulation frequency; default omega_1
  std::optional<double> Delta_detuning;   // direct override of Delta (rad/s)
  double temperature = 0.0;   // K
  double diameter = 100e-9;   // m
  double density = 2200.0;    // kg/m^3
  double eta = 2e-9;          // optomechanical coupling coefficient
  double phi = 5e16;          // photon flux (photons/s)
  double Q0 = 300.0;          // initial oscillation amplitude
  double N0 = 1e5;            // initial phonon number
  std::complex<double> a_x0{1.0, 0.0};  // initial mode amplitudes
  std::complex<double> a_y0{0.0, 0.0};
  std::optional<double> N_x0;  // initial phonon numbers; default N0
  std::optional<double> N_y0;
  FrequencyConvention convention = FrequencyConvention::ordinary;

  double initial_phonons(Mode m) const {
    if (m == Mode::x) return N_x0.value_or(N0);
    return N_y0.value_or(N0);
  }
};

// Everything the solvers consume, computed once at load time.
struct DerivedParams {
  double mass = 0.0;     // kg
  double omega_0 = 0.0;  // carrier frequency sqrt(wx^2+wy^2)/2 (rad/s)
  double omega_1 = 0.0;  // (wy^2-wx^2)/(2 w0) (rad/s)
  double omega_3 = 0.0;  // delta * omega_1 (rad/s)
  double beta_x = 0.0;   // omega_3 sqrt(wx/wy) (rad/s)
  double beta_y = 0.0;   // omega_3 sqrt(wy/wx) (rad/s)
  double beta = 0.0;     // sqrt(beta_x beta_y) = omega_3 (rad/s)
  double kappa = 0.0;    // trap stiffness asymmetry m(wy^2-wx^2)/2 (N/m)
  double omega_r = 0.0;  // resolved modulation frequency (rad/s)
  double Delta = 0.0;    // omega_1 - omega_r unless overridden (rad/s)
  double Gamma_bal = 0.0;    // gamma_gx + (gamma_gy - gamma_ay)
  double Gamma_x_lin = 0.0;  // 2 gamma_gx
  double Gamma_y_lin = 0.0;  // 2 (gamma_gy - gamma_ay)
  double l_x = 0.0;      // oscillator length sqrt(hbar/2m w) (m)
  double l_y = 0.0;
  double S_s0_x = 0.0;   // shot-noise force scale m^2 l^2 w^4 / eta^2 phi (N^2/Hz)
  double S_s0_y = 0.0;
};

double mass_from_geometry(double diameter, double density);

SystemConfig config_from_json(const nlohmann::json& doc);
SystemConfig load_config(const std::string& path);

// Resolved snapshot (angular units, all defaults applied); round-trips
// through config_from_json with convention "angular".
nlohmann::json config_to_json(const SystemConfig& config);

void validate(const SystemConfig& config);

DerivedParams derive_parameters(const SystemConfig& config);

}  // namespace levsim
