#include "levsim/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "levsim/errors.hpp"

namespace levsim {
namespace {

constexpr double kBalanceRelTol = 1e-9;
constexpr double kEpDiscFloor = 1e-30;

// Balanced gain/loss means Gamma_x + Gamma_y = 0 within relative tolerance;
// the discriminant sign then separates the real-spectrum phase from the
// broken phase, with a tolerance band around zero for the exceptional point.
PtPhase classify_phase(double Gamma_x, double Gamma_y, double beta_sq) {
  const double scale = std::max({std::abs(Gamma_x), std::abs(Gamma_y), kEpDiscFloor});
  if (std::abs(Gamma_x + Gamma_y) > kBalanceRelTol * scale) return PtPhase::NonBalanced;

  const double Gamma = 0.5 * (Gamma_x + Gamma_y);
  const double disc = -Gamma * Gamma + 4.0 * beta_sq + Gamma_x * Gamma_y;
  const double disc_scale = std::max({Gamma * Gamma, 4.0 * beta_sq,
                                      std::abs(Gamma_x * Gamma_y), kEpDiscFloor});
  if (std::abs(disc) < 1e-9 * disc_scale) return PtPhase::ExceptionalPoint;
  return disc > 0.0 ? PtPhase::PTSymmetric : PtPhase::PTBroken;
}

// Descending real part, ties by descending imaginary part.
void sort_pair(std::complex<double>& plus, std::complex<double>& minus) {
  const double scale = std::max({std::abs(plus), std::abs(minus), 1e-300});
  const double dre = plus.real() - minus.real();
  bool swap;
  if (std::abs(dre) > 1e-12 * scale) {
    swap = dre < 0.0;
  } else {
    swap = plus.imag() < minus.imag();
  }
  if (swap) std::swap(plus, minus);
}

}  // namespace

const char* pt_phase_name(PtPhase phase) {
  switch (phase) {
    case PtPhase::PTSymmetric: return "PTSymmetric";
    case PtPhase::ExceptionalPoint: return "ExceptionalPoint";
    case PtPhase::PTBroken: return "PTBroken";
    case PtPhase::NonBalanced: return "NonBalanced";
  }
  return "Unknown";
}

DampingPair linear_damping_pair(const SystemConfig& config) {
  return {2.0 * config.gamma_gx, 2.0 * (config.gamma_gy - config.gamma_ay)};
}

ComplexMatrix2 build_hamiltonian(const DerivedParams& params, const DampingPair& gamma) {
  for (double v : {params.Delta, gamma.Gamma_x, gamma.Gamma_y, params.beta_x, params.beta_y}) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "hamiltonian input not finite");
  }
  const std::complex<double> i{0.0, 1.0};
  ComplexMatrix2 H;
  H.h11 = 0.5 * (params.Delta - i * gamma.Gamma_x);
  H.h12 = params.beta_x;
  H.h21 = params.beta_y;
  H.h22 = -0.5 * (params.Delta + i * gamma.Gamma_y);
  return H;
}

double pt_discriminant(const DerivedParams& params) {
  const double Gamma = params.Gamma_bal;
  // gamma_gx (gamma_gy - gamma_ay) = Gamma_x_lin Gamma_y_lin / 4
  return -Gamma * Gamma +
         4.0 * params.beta * params.beta + params.Gamma_x_lin * params.Gamma_y_lin;
}

EigenPair eigenvalues_closed_form(const DerivedParams& params) {
  const double Gx = params.Gamma_x_lin;
  const double Gy = params.Gamma_y_lin;
  const double Gamma = params.Gamma_bal;  // (Gx + Gy)/2
  const double D = params.Delta;
  const std::complex<double> i{0.0, 1.0};

  // Roots of the characteristic polynomial of the linear-regime matrix,
  // written out: -i Gamma/2 +/- sqrt(disc)/2 with
  // disc = -Gamma^2 + Delta^2 + i Delta (Gy - Gx) + 4 beta^2 + Gx Gy.
  // At Delta = 0 the square root reduces to the real discriminant above.
  const std::complex<double> disc =
      std::complex<double>(-Gamma * Gamma + D * D + 4.0 * params.beta * params.beta + Gx * Gy,
                           D * (Gy - Gx));
  const std::complex<double> s = std::sqrt(disc);

  EigenPair out;
  out.lambda_plus = -i * (Gamma / 2.0) + 0.5 * s;
  out.lambda_minus = -i * (Gamma / 2.0) - 0.5 * s;
  sort_pair(out.lambda_plus, out.lambda_minus);
  out.phase = classify_phase(Gx, Gy, params.beta * params.beta);
  return out;
}

EigenPair eigenvalues_numeric(const ComplexMatrix2& H) {
  for (const auto& h : {H.h11, H.h12, H.h21, H.h22}) {
    if (!std::isfinite(h.real()) || !std::isfinite(h.imag())) {
      fail(ErrorCode::NonFinite, "matrix entry not finite");
    }
  }
  const std::complex<double> tr = H.trace();
  const std::complex<double> det = H.determinant();
  const std::complex<double> s = std::sqrt(tr * tr - 4.0 * det);

  // Pick the branch that avoids cancellation, recover the other root from
  // the product.
  std::complex<double> l1 =
      std::abs(tr + s) >= std::abs(tr - s) ? 0.5 * (tr + s) : 0.5 * (tr - s);
  std::complex<double> l2 = (l1 == std::complex<double>{0.0, 0.0}) ? l1 : det / l1;

  EigenPair out;
  out.lambda_plus = l1;
  out.lambda_minus = l2;
  sort_pair(out.lambda_plus, out.lambda_minus);
  out.phase = classify_phase(-2.0 * H.h11.imag(), 2.0 * H.h22.imag(),
                             (H.h12 * H.h21).real());
  return out;
}

std::vector<SweepRow> sweep_coupling(const SystemConfig& config,
                                     std::vector<double> beta_grid) {
  if (beta_grid.empty()) fail(ErrorCode::EmptyGrid, "sweep_coupling: empty beta grid");
  std::sort(beta_grid.begin(), beta_grid.end());

  DerivedParams base = derive_parameters(config);
  if (base.omega_1 == 0.0) {
    fail(ErrorCode::DegenerateTrap, "sweep_coupling: omega_1 = 0, coupling cannot be set");
  }

  std::vector<SweepRow> rows;
  rows.reserve(beta_grid.size());
  const double rx = std::sqrt(config.omega_x / config.omega_y);
  for (double beta : beta_grid) {
    if (!(beta >= 0.0)) fail(ErrorCode::OutOfRange, "sweep_coupling: beta < 0");
    DerivedParams p = base;  // delta override: delta = beta / omega_1
    p.omega_3 = beta;
    p.beta_x = beta * rx;
    p.beta_y = beta / rx;
    p.beta = beta;
    rows.push_back({beta, eigenvalues_closed_form(p)});
  }
  return rows;
}

}  // namespace levsim
