#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <random>

#include "helpers.hpp"
#include "levsim/errors.hpp"
#include "levsim/spectrum.hpp"

using namespace levsim;
using cplx = std::complex<double>;

namespace {

// Independent oracle: dense eigensolver on the same 2x2.
std::pair<cplx, cplx> eigen_oracle(const ComplexMatrix2& H) {
  Eigen::Matrix2cd M;
  M << H.h11, H.h12, H.h21, H.h22;
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(M, false);
  cplx a = solver.eigenvalues()(0);
  cplx b = solver.eigenvalues()(1);
  // same ordering rule: descending Re, ties by descending Im
  if (a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag())) {
    std::swap(a, b);
  }
  return {a, b};
}

SystemConfig balanced_config(double gamma, double delta) {
  SystemConfig c = test::base_config();
  c.gamma_gx = gamma;
  c.gamma_gy = gamma;
  c.gamma_ay = 2.0 * gamma;
  c.delta = delta;
  c.Delta_detuning = 0.0;
  return c;
}

}  // namespace

TEST_CASE("hamiltonian layout") {
  SystemConfig c = balanced_config(0.06, 0.0);
  const DerivedParams p = derive_parameters(c);
  const ComplexMatrix2 H = build_hamiltonian(p, linear_damping_pair(c));
  // balanced gain/loss: diagonal is (-i gamma_gx, +i gamma_gx)
  CHECK(H.h11 == cplx{0.0, -0.06});
  CHECK(H.h22 == cplx{0.0, +0.06});
  CHECK(H.h12 == cplx{0.0, 0.0});
  CHECK(H.h21 == cplx{0.0, 0.0});

  // zero everything -> zero matrix
  SystemConfig z = test::base_config();
  z.gamma_gx = z.gamma_gy = z.gamma_ay = 0.0;
  z.delta = 0.0;
  z.Delta_detuning = 0.0;
  const ComplexMatrix2 Z = build_hamiltonian(derive_parameters(z), linear_damping_pair(z));
  CHECK(std::abs(Z.h11) == 0.0);
  CHECK(std::abs(Z.h22) == 0.0);
}

TEST_CASE("closed form on the balanced gain/loss line") {
  const double gamma = 0.06;

  SUBCASE("real pair above the exceptional point") {
    SystemConfig c = balanced_config(gamma, 0.0);
    DerivedParams p = derive_parameters(c);
    const double beta = 5.0 * gamma;
    p.beta = p.beta_x = p.beta_y = beta;
    p.omega_3 = beta;
    const EigenPair e = eigenvalues_closed_form(p);
    const double expect = std::sqrt(beta * beta - gamma * gamma);
    CHECK(e.lambda_plus.real() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(e.lambda_minus.real() == doctest::Approx(-expect).epsilon(1e-12));
    CHECK(std::abs(e.lambda_plus.imag()) < 1e-14);
    CHECK(e.phase == PtPhase::PTSymmetric);
  }

  SUBCASE("degenerate zero at beta = gamma") {
    SystemConfig c = balanced_config(gamma, 0.0);
    DerivedParams p = derive_parameters(c);
    p.beta = p.beta_x = p.beta_y = gamma;
    p.omega_3 = gamma;
    const EigenPair e = eigenvalues_closed_form(p);
    CHECK(std::abs(e.lambda_plus) < 1e-12);
    CHECK(std::abs(e.lambda_minus) < 1e-12);
    CHECK(e.phase == PtPhase::ExceptionalPoint);
    // oracle: numeric eigensolver on the same matrix
    const auto [o1, o2] = eigen_oracle(build_hamiltonian(p, linear_damping_pair(c)));
    CHECK(std::abs(o1) < 1e-12);
    CHECK(std::abs(o2) < 1e-12);
  }

  SUBCASE("pure imaginary pair at beta = 0") {
    SystemConfig c = balanced_config(gamma, 0.0);
    const DerivedParams p = derive_parameters(c);  // delta = 0 -> beta = 0
    const EigenPair e = eigenvalues_closed_form(p);
    CHECK(e.lambda_plus.imag() == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(e.lambda_minus.imag() == doctest::Approx(-gamma).epsilon(1e-12));
    CHECK(std::abs(e.lambda_plus.real()) < 1e-14);
    CHECK(e.phase == PtPhase::PTBroken);
    const auto [o1, o2] = eigen_oracle(build_hamiltonian(p, linear_damping_pair(c)));
    CHECK(std::abs(o1 - e.lambda_plus) < 1e-12);
    CHECK(std::abs(o2 - e.lambda_minus) < 1e-12);
  }
}

TEST_CASE("numeric eigenvalues: diagonal and defective cases") {
  ComplexMatrix2 D{cplx{3.0, -1.0}, 0.0, 0.0, cplx{-2.0, 0.5}};
  const EigenPair e = eigenvalues_numeric(D);
  CHECK(std::abs(e.lambda_plus - cplx{3.0, -1.0}) < 1e-14);
  CHECK(std::abs(e.lambda_minus - cplx{-2.0, 0.5}) < 1e-14);

  // defective matrix [[0,1],[0,0]]: repeated eigenvalue, both entries equal
  ComplexMatrix2 J{0.0, 1.0, 0.0, 0.0};
  const EigenPair j = eigenvalues_numeric(J);
  CHECK(std::abs(j.lambda_plus) == 0.0);
  CHECK(std::abs(j.lambda_minus) == 0.0);
}

TEST_CASE("closed form agrees with the numeric route everywhere") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    SystemConfig c = test::base_config();
    c.gamma_gx = 2.0 * u(rng);
    c.gamma_gy = 2.0 * u(rng);
    c.gamma_ay = 3.0 * u(rng);
    c.delta = 0.1 * u(rng);
    if (u(rng) < 0.3) c.Delta_detuning = 4.0 * u(rng) - 2.0;
    const DerivedParams p = derive_parameters(c);
    const ComplexMatrix2 H = build_hamiltonian(p, linear_damping_pair(c));
    const EigenPair cf = eigenvalues_closed_form(p);
    const EigenPair nm = eigenvalues_numeric(H);

    const double scale =
        std::max({std::abs(cf.lambda_plus), std::abs(cf.lambda_minus), 1e-6});
    CHECK(std::abs(cf.lambda_plus - nm.lambda_plus) <= 1e-10 * scale);
    CHECK(std::abs(cf.lambda_minus - nm.lambda_minus) <= 1e-10 * scale);
    CHECK(cf.phase == nm.phase);

    // trace identity: sum = -i (Gx + Gy)/2
    const DampingPair g = linear_damping_pair(c);
    const cplx tr_expect{0.0, -(g.Gamma_x + g.Gamma_y) / 2.0};
    CHECK(std::abs(cf.lambda_plus + cf.lambda_minus - tr_expect) <= 1e-10 * scale);

    // third route: dense eigensolver
    const auto [o1, o2] = eigen_oracle(H);
    CHECK(std::abs(nm.lambda_plus - o1) <= 1e-9 * scale);
    CHECK(std::abs(nm.lambda_minus - o2) <= 1e-9 * scale);
  }
}

TEST_CASE("balanced spectrum is symmetric under sign-flipped conjugation") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    SystemConfig c = balanced_config(0.02 + u(rng), 0.0);
    DerivedParams p = derive_parameters(c);
    const double beta = 2.0 * c.gamma_gx * u(rng);
    p.beta = p.beta_x = p.beta_y = beta;
    p.omega_3 = beta;
    const EigenPair e = eigenvalues_closed_form(p);

    // the set {l+, l-} maps to itself under l -> -conj(l)
    const cplx m1 = -std::conj(e.lambda_plus);
    const cplx m2 = -std::conj(e.lambda_minus);
    const double direct = std::abs(m1 - e.lambda_minus) + std::abs(m2 - e.lambda_plus);
    const double fixed = std::abs(m1 - e.lambda_plus) + std::abs(m2 - e.lambda_minus);
    const double scale = std::max({std::abs(e.lambda_plus), 1e-12});
    CHECK(std::min(direct, fixed) <= 1e-10 * scale);
  }
}

TEST_CASE("phase classification is scale invariant") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    SystemConfig c = test::base_config();
    c.gamma_gx = u(rng);
    c.gamma_gy = u(rng);
    c.gamma_ay = u(rng) < 0.5 ? c.gamma_gx + c.gamma_gy : 2.0 * u(rng);
    c.delta = 0.1 * u(rng);
    c.Delta_detuning = 0.0;
    const DerivedParams p = derive_parameters(c);
    const PtPhase before = eigenvalues_closed_form(p).phase;

    const double scale = std::exp(8.0 * (u(rng) - 0.5));
    SystemConfig s = c;
    s.gamma_gx *= scale;
    s.gamma_gy *= scale;
    s.gamma_ay *= scale;
    DerivedParams q = derive_parameters(s);
    q.beta = q.beta_x = q.beta_y = p.beta * scale;
    q.omega_3 = p.omega_3 * scale;
    CHECK(eigenvalues_closed_form(q).phase == before);
  }
}

TEST_CASE("sweep over coupling") {
  SystemConfig c = balanced_config(0.06, 1e-4);
  const double gamma = 0.06;

  SUBCASE("phase sequence across the exceptional point") {
    const auto rows = sweep_coupling(c, {0.2 * gamma, 0.9999 * gamma, 3.0 * gamma});
    CHECK(rows[0].eig.phase == PtPhase::PTBroken);
    CHECK(rows[2].eig.phase == PtPhase::PTSymmetric);
  }

  SUBCASE("grid = {0} gives the pure imaginary pair") {
    const auto rows = sweep_coupling(c, {0.0});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].eig.lambda_plus.imag() == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(rows[0].eig.lambda_minus.imag() == doctest::Approx(-gamma).epsilon(1e-12));
  }

  SUBCASE("reversed grids are re-sorted") {
    const auto rows = sweep_coupling(c, {0.3, 0.2, 0.1});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].beta == doctest::Approx(0.1));
    CHECK(rows[2].beta == doctest::Approx(0.3));
  }

  SUBCASE("empty grid is rejected") {
    CHECK_THROWS_AS(sweep_coupling(c, {}), Error);
  }
}
