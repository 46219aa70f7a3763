#include "levsim/model.hpp"

#include <cmath>
#include <fstream>

#include "levsim/constants.hpp"
#include "levsim/errors.hpp"

namespace levsim {
namespace {

using nlohmann::json;

double require_number(const json& doc, const std::string& key) {
  if (!doc.contains(key)) fail(ErrorCode::MissingKey, key);
  if (!doc.at(key).is_number()) fail(ErrorCode::ParseError, key + ": expected a number");
  return doc.at(key).get<double>();
}

double number_or(const json& doc, const std::string& key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number()) fail(ErrorCode::ParseError, key + ": expected a number");
  return doc.at(key).get<double>();
}

std::optional<double> optional_number(const json& doc, const std::string& key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  if (!doc.at(key).is_number()) fail(ErrorCode::ParseError, key + ": expected a number");
  return doc.at(key).get<double>();
}

void check_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) fail(ErrorCode::OutOfRange, name);
}

void check_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) fail(ErrorCode::OutOfRange, name);
}

}  // namespace

double mass_from_geometry(double diameter, double density) {
  check_positive(diameter, "diameter");
  check_positive(density, "density");
  return density * constants::pi * diameter * diameter * diameter / 6.0;
}

SystemConfig config_from_json(const json& doc) {
  if (!doc.is_object()) fail(ErrorCode::ParseError, "config document must be an object");

  SystemConfig c;
  std::string conv = "ordinary";
  if (doc.contains("frequency_unit_convention")) {
    conv = doc.at("frequency_unit_convention").get<std::string>();
  } else if (doc.contains("convention")) {
    conv = doc.at("convention").get<std::string>();
  }
  if (conv == "angular") {
    c.convention = FrequencyConvention::angular;
  } else if (conv == "ordinary") {
    c.convention = FrequencyConvention::ordinary;
  } else {
    fail(ErrorCode::ParseError, "frequency_unit_convention: expected 'angular' or 'ordinary'");
  }
  const double scale =
      c.convention == FrequencyConvention::ordinary ? constants::two_pi : 1.0;

  c.omega_x = scale * require_number(doc, "omega_x");
  c.omega_y = scale * require_number(doc, "omega_y");
  c.gamma_gx = scale * number_or(doc, "gamma_gx", 0.0);
  c.gamma_gy = scale * number_or(doc, "gamma_gy", 0.0);
  c.gamma_ay = scale * number_or(doc, "gamma_ay", 0.0);
  c.gamma_cx = scale * number_or(doc, "gamma_cx", 0.0);
  c.gamma_cy = scale * number_or(doc, "gamma_cy", 0.0);
  c.Gamma_cx = scale * number_or(doc, "Gamma_cx", 0.0);
  c.Gamma_cy = scale * number_or(doc, "Gamma_cy", 0.0);
  c.D_tx = scale * number_or(doc, "D_tx", 0.0);
  c.D_ty = scale * number_or(doc, "D_ty", 0.0);
  c.delta = number_or(doc, "delta", 0.0);
  if (auto wr = optional_number(doc, "omega_r")) c.omega_r = scale * *wr;
  if (auto dd = optional_number(doc, "Delta_detuning")) c.Delta_detuning = scale * *dd;
  c.temperature = number_or(doc, "temperature", 0.0);
  c.diameter = number_or(doc, "diameter", 100e-9);
  c.density = number_or(doc, "density", 2200.0);
  c.eta = number_or(doc, "eta", 2e-9);
  c.phi = number_or(doc, "phi", 5e16);
  c.Q0 = number_or(doc, "Q0", 300.0);
  c.N0 = number_or(doc, "N0", 1e5);
  c.a_x0 = {number_or(doc, "a_x0_re", 1.0), number_or(doc, "a_x0_im", 0.0)};
  c.a_y0 = {number_or(doc, "a_y0_re", 0.0), number_or(doc, "a_y0_im", 0.0)};
  c.N_x0 = optional_number(doc, "N_x0");
  c.N_y0 = optional_number(doc, "N_y0");

  validate(c);
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, std::string("config parse: ") + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const SystemConfig& c) {
  json doc;
  doc["frequency_unit_convention"] = "angular";
  doc["omega_x"] = c.omega_x;
  doc["omega_y"] = c.omega_y;
  doc["gamma_gx"] = c.gamma_gx;
  doc["gamma_gy"] = c.gamma_gy;
  doc["gamma_ay"] = c.gamma_ay;
  doc["gamma_cx"] = c.gamma_cx;
  doc["gamma_cy"] = c.gamma_cy;
  doc["Gamma_cx"] = c.Gamma_cx;
  doc["Gamma_cy"] = c.Gamma_cy;
  doc["D_tx"] = c.D_tx;
  doc["D_ty"] = c.D_ty;
  doc["delta"] = c.delta;
  if (c.omega_r) doc["omega_r"] = *c.omega_r;
  if (c.Delta_detuning) doc["Delta_detuning"] = *c.Delta_detuning;
  doc["temperature"] = c.temperature;
  doc["diameter"] = c.diameter;
  doc["density"] = c.density;
  doc["eta"] = c.eta;
  doc["phi"] = c.phi;
  doc["Q0"] = c.Q0;
  doc["N0"] = c.N0;
  doc["a_x0_re"] = c.a_x0.real();
  doc["a_x0_im"] = c.a_x0.imag();
  doc["a_y0_re"] = c.a_y0.real();
  doc["a_y0_im"] = c.a_y0.imag();
  if (c.N_x0) doc["N_x0"] = *c.N_x0;
  if (c.N_y0) doc["N_y0"] = *c.N_y0;
  return doc;
}

void validate(const SystemConfig& c) {
  check_positive(c.omega_x, "omega_x");
  check_positive(c.omega_y, "omega_y");
  check_nonnegative(c.gamma_gx, "gamma_gx");
  check_nonnegative(c.gamma_gy, "gamma_gy");
  check_nonnegative(c.gamma_ay, "gamma_ay");
  check_nonnegative(c.gamma_cx, "gamma_cx");
  check_nonnegative(c.gamma_cy, "gamma_cy");
  check_nonnegative(c.Gamma_cx, "Gamma_cx");
  check_nonnegative(c.Gamma_cy, "Gamma_cy");
  check_nonnegative(c.D_tx, "D_tx");
  check_nonnegative(c.D_ty, "D_ty");
  if (!(c.delta >= 0.0 && c.delta <= 0.1)) fail(ErrorCode::OutOfRange, "delta");
  if (c.omega_r && !(*c.omega_r > 0.0)) fail(ErrorCode::OutOfRange, "omega_r");
  check_nonnegative(c.temperature, "temperature");
  check_positive(c.diameter, "diameter");
  check_positive(c.density, "density");
  check_positive(c.eta, "eta");
  check_positive(c.phi, "phi");
  check_nonnegative(c.N0, "N0");
  if (c.N_x0 && *c.N_x0 < 0.0) fail(ErrorCode::OutOfRange, "N_x0");
  if (c.N_y0 && *c.N_y0 < 0.0) fail(ErrorCode::OutOfRange, "N_y0");
  if (!std::isfinite(c.Q0)) fail(ErrorCode::OutOfRange, "Q0");
}

DerivedParams derive_parameters(const SystemConfig& c) {
  validate(c);
  if (c.delta != 0.0 && c.omega_x == c.omega_y) {
    fail(ErrorCode::DegenerateTrap,
         "coupling requested (delta != 0) with omega_x == omega_y");
  }

  DerivedParams p;
  p.mass = mass_from_geometry(c.diameter, c.density);
  p.omega_0 = std::sqrt(c.omega_x * c.omega_x + c.omega_y * c.omega_y) / 2.0;
  p.omega_1 = (c.omega_y * c.omega_y - c.omega_x * c.omega_x) / (2.0 * p.omega_0);
  p.omega_3 = c.delta * p.omega_1;
  p.beta_x = p.omega_3 * std::sqrt(c.omega_x / c.omega_y);
  p.beta_y = p.omega_3 * std::sqrt(c.omega_y / c.omega_x);
  p.beta = std::sqrt(p.beta_x * p.beta_y);
  p.kappa = p.mass * (c.omega_y * c.omega_y - c.omega_x * c.omega_x) / 2.0;
  p.omega_r = c.omega_r.value_or(p.omega_1);
  p.Delta = c.Delta_detuning.value_or(p.omega_1 - p.omega_r);
  p.Gamma_bal = c.gamma_gx + (c.gamma_gy - c.gamma_ay);
  p.Gamma_x_lin = 2.0 * c.gamma_gx;
  p.Gamma_y_lin = 2.0 * (c.gamma_gy - c.gamma_ay);
  p.l_x = std::sqrt(constants::hbar / (2.0 * p.mass * c.omega_x));
  p.l_y = std::sqrt(constants::hbar / (2.0 * p.mass * c.omega_y));
  const double eta2phi = c.eta * c.eta * c.phi;
  p.S_s0_x = p.mass * p.mass * p.l_x * p.l_x * std::pow(c.omega_x, 4) / eta2phi;
  p.S_s0_y = p.mass * p.mass * p.l_y * p.l_y * std::pow(c.omega_y, 4) / eta2phi;

  for (double v : {p.mass, p.omega_0, p.omega_1, p.omega_3, p.beta_x, p.beta_y,
                   p.beta, p.kappa, p.omega_r, p.Delta, p.Gamma_bal, p.l_x,
                   p.l_y, p.S_s0_x, p.S_s0_y}) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "derived parameter not finite");
  }
  return p;
}

}  // namespace levsim
