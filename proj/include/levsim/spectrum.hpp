#pragma once

#include <complex>
#include <vector>

#include "levsim/model.hpp"

namespace levsim {

struct ComplexMatrix2 {
  std::complex<double> h11, h12, h21, h22;

  std::complex<double> trace() const { return h11 + h22; }
  std::complex<double> determinant() const { return h11 * h22 - h12 * h21; }
};

enum class PtPhase { PTSymmetric, ExceptionalPoint, PTBroken, NonBalanced };

const char* pt_phase_name(PtPhase phase);

struct EigenPair {
  std::complex<double> lambda_plus;   // sorted: descending Re, then descending Im
  std::complex<double> lambda_minus;
  PtPhase phase;
};

// Effective damping rates entering the mode Hamiltonian. Linear regime:
// Gamma_x = 2 gamma_gx, Gamma_y = 2 (gamma_gy - gamma_ay).
struct DampingPair {
  double Gamma_x;
  double Gamma_y;
};

DampingPair linear_damping_pair(const SystemConfig& config);

// H = [[(Delta - i Gx)/2, beta_x], [beta_y, -(Delta + i Gy)/2]]
ComplexMatrix2 build_hamiltonian(const DerivedParams& params, const DampingPair& gamma);

// Discriminant -Gamma^2 + 4(beta^2 + gamma_gx (gamma_gy - gamma_ay)) whose
// sign classifies the balanced phases; zero at the exceptional point.
double pt_discriminant(const DerivedParams& params);

// Closed-form eigenvalues in the linear regime, including the detuning term.
// At Delta = 0 this is -i Gamma/2 +/- sqrt(discriminant)/2.
EigenPair eigenvalues_closed_form(const DerivedParams& params);

// Roots of the characteristic polynomial with a cancellation-safe branch
// choice; falls back to the same classification rule.
EigenPair eigenvalues_numeric(const ComplexMatrix2& H);

struct SweepRow {
  double beta;
  EigenPair eig;
};

// One row per coupling value; the rotation angle is overridden per point
// (delta = beta / omega_1). A non-monotone grid is sorted ascending.
std::vector<SweepRow> sweep_coupling(const SystemConfig& config,
                                     std::vector<double> beta_grid);

}  // namespace levsim
