#pragma once

#include <complex>
#include <random>
#include <vector>

#include "levsim/model.hpp"

namespace levsim::test {

// A plain valid configuration in angular units; tweak fields per test.
inline SystemConfig base_config() {
  SystemConfig c;
  c.omega_x = 130e3;
  c.omega_y = 160e3;
  c.gamma_gx = 0.06;
  c.gamma_gy = 0.06;
  c.gamma_ay = 0.12;
  c.delta = 1e-4;
  c.convention = FrequencyConvention::angular;
  return c;
}

inline nlohmann::json base_json() {
  return nlohmann::json{
      {"frequency_unit_convention", "angular"}, {"omega_x", 130e3},
      {"omega_y", 160e3},                       {"gamma_gx", 0.06},
      {"gamma_gy", 0.06},                       {"gamma_ay", 0.12},
      {"delta", 1e-4},
  };
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace levsim::test
