#pragma once

namespace levsim::constants {

inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

}  // namespace levsim::constants
