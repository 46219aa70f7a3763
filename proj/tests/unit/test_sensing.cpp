#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "levsim/constants.hpp"
#include "levsim/errors.hpp"
#include "levsim/presets.hpp"
#include "levsim/sensing.hpp"

using namespace levsim;

namespace {

SystemConfig sensing_config(double delta) {
  const auto doc = preset_document("fig9");
  auto config = doc.at("config");
  config["delta"] = delta;
  return config_from_json(config);
}

}  // namespace

TEST_CASE("effective damping") {
  SystemConfig c = sensing_config(0.0);
  CHECK(effective_damping(c, Mode::x, 0.0) ==
        doctest::Approx(2.0 * (c.gamma_gx + 12.0 * c.gamma_cx)).epsilon(1e-14));
  SystemConfig lin = c;
  lin.gamma_cx = 0.0;
  CHECK(effective_damping(lin, Mode::x, 1e5) ==
        doctest::Approx(2.0 * c.gamma_gx).epsilon(1e-14));
  CHECK(effective_damping(c, Mode::x, 1e4) > 0.0);
  CHECK_THROWS_AS(effective_damping(c, Mode::x, -1.0), Error);
}

TEST_CASE("bare susceptibility limits") {
  SystemConfig c = sensing_config(0.0);
  const DerivedParams p = derive_parameters(c);
  const OccupancyPair occ{0.0, 0.0};

  SUBCASE("static compliance at omega = 0") {
    const auto chi = susceptibility(0.0, c, p, Mode::x, occ);
    CHECK(std::abs(chi.chi) ==
          doctest::Approx(1.0 / (p.mass * c.omega_x * c.omega_x)).epsilon(1e-12));
  }

  SUBCASE("resonant peak magnitude") {
    const double Gx = effective_damping(c, Mode::x, 0.0);
    const auto chi = susceptibility(c.omega_x, c, p, Mode::x, occ);
    CHECK(std::abs(chi.chi) ==
          doctest::Approx(1.0 / (p.mass * c.omega_x * Gx)).epsilon(1e-12));
    CHECK(chi.chi.imag() < 0.0);  // dissipative response
  }

  SUBCASE("exact pole with zero damping raises PoleHit") {
    SystemConfig z = sensing_config(0.0);
    z.gamma_gx = 0.0;
    z.gamma_cx = 0.0;
    z.Gamma_cx = 0.0;
    const DerivedParams pz = derive_parameters(z);
    CHECK_THROWS_AS(susceptibility(z.omega_x, z, pz, Mode::x, occ), Error);
  }
}

TEST_CASE("coupled susceptibility reduces continuously to the bare one") {
  SystemConfig weak = sensing_config(1e-12);
  SystemConfig bare = sensing_config(0.0);
  const DerivedParams pw = derive_parameters(weak);
  const DerivedParams pb = derive_parameters(bare);
  const OccupancyPair occ{0.0, 0.0};
  const auto grid = linspace(0.5 * bare.omega_x,
                             1.5 * (bare.omega_y + pb.omega_r), 2000);
  for (double w : grid) {
    const auto a = susceptibility(w, weak, pw, Mode::x, occ);
    const auto b = susceptibility(w, bare, pb, Mode::x, occ);
    CHECK(std::abs(a.chi - b.chi) <= 1e-6 * std::abs(b.chi));
  }
}

TEST_CASE("noise budget values") {
  SystemConfig c = sensing_config(1e-3);
  const DerivedParams p = derive_parameters(c);

  // independent arithmetic oracle for the thermal force density
  const double S_T_oracle = 2.0 * mass_from_geometry(100e-9, 2200.0) * 0.06 *
                            1.380649e-23 * 1.0;
  const NoiseBudget b = noise_budget(c, p, Mode::x, 0.0);
  CHECK(b.S_T == doctest::Approx(S_T_oracle).epsilon(1e-10));
  CHECK(std::sqrt(b.S_T) == doctest::Approx(1.381475e-21).epsilon(1e-6));
  CHECK(b.S_H == doctest::Approx(1.579213e-43).epsilon(1e-6));
  CHECK(b.S_C >= 0.0);

  // occupancy raises the back-action term by [4N^2+4N+1]
  const NoiseBudget hot = noise_budget(c, p, Mode::x, 10.0);
  CHECK(hot.S_C == doctest::Approx(b.S_C * 441.0).epsilon(1e-12));
}

TEST_CASE("position PSD floor and shape") {
  SystemConfig c = sensing_config(0.0);
  const DerivedParams p = derive_parameters(c);
  const OccupancyPair occ{0.0, 0.0};
  const double floor = shot_noise_floor(c, p, Mode::x);

  SUBCASE("all force noises zero leaves the flat floor") {
    SystemConfig quiet = sensing_config(0.0);
    quiet.temperature = 0.0;
    quiet.D_tx = quiet.D_ty = 0.0;
    quiet.Gamma_cx = quiet.Gamma_cy = 0.0;
    const DerivedParams pq = derive_parameters(quiet);
    for (double w : {0.5 * c.omega_x, c.omega_x, 2.0 * c.omega_x}) {
      CHECK(position_psd(w, quiet, pq, Mode::x, occ) ==
            doctest::Approx(shot_noise_floor(quiet, pq, Mode::x)).epsilon(1e-12));
    }
  }

  SUBCASE("floor is a hard lower bound; resonance peaks above it") {
    double peak = 0.0, off = 0.0;
    for (double w : linspace(0.9 * c.omega_x, 1.1 * c.omega_x, 4001)) {
      const double v = position_psd(w, c, p, Mode::x, occ);
      CHECK(v >= floor);
      peak = std::max(peak, v);
    }
    off = position_psd(0.5 * c.omega_x, c, p, Mode::x, occ);
    CHECK(peak > 100.0 * off);
  }
}

TEST_CASE("force PSD composition and rolloff") {
  SystemConfig c = sensing_config(0.0);
  const DerivedParams p = derive_parameters(c);
  const OccupancyPair occ{0.0, 0.0};

  SUBCASE("white budget is a lower bound everywhere") {
    for (double w : linspace(0.5 * c.omega_x, 2.5 * c.omega_y, 3001)) {
      const ForcePsd f = force_psd(w, c, p, Mode::x, occ);
      CHECK(f.total >= f.S_T + f.S_H + f.S_C);
      CHECK(f.S_s >= 0.0);
    }
  }

  SUBCASE("resonance minimizes the referred shot noise") {
    const ForcePsd on = force_psd(c.omega_x, c, p, Mode::x, occ);
    for (double w : {0.8 * c.omega_x, 0.95 * c.omega_x, 1.05 * c.omega_x}) {
      CHECK(force_psd(w, c, p, Mode::x, occ).S_s > on.S_s);
    }
    // near-resonant total is essentially the white budget
    CHECK(on.total == doctest::Approx(on.S_T + on.S_H + on.S_C).epsilon(1e-4));
  }

  SUBCASE("free-mass rolloff: S_s grows as omega^4") {
    const double w1 = 10.0 * c.omega_x;
    const double w2 = 100.0 * c.omega_x;
    const double s1 = force_psd(w1, c, p, Mode::x, occ).S_s;
    const double s2 = force_psd(w2, c, p, Mode::x, occ).S_s;
    const double slope = std::log(s2 / s1) / std::log(10.0);
    CHECK(slope == doctest::Approx(4.0).epsilon(0.01));
  }

  SUBCASE("normalizing by the scale factor reproduces the damping ratio") {
    // S_s(omega_j)/S_s0 = (Gamma_j/omega_j)^2 for the bare mode
    const double Gx = effective_damping(c, Mode::x, 0.0);
    const ForcePsd on = force_psd(c.omega_x, c, p, Mode::x, occ);
    CHECK(on.S_s / p.S_s0_x ==
          doctest::Approx(std::pow(Gx / c.omega_x, 2)).epsilon(1e-10));
  }
}

TEST_CASE("sensitivity minima") {
  const OccupancyPair occ{0.0, 0.0};

  SUBCASE("bare mode has exactly one minimum, at the resonance") {
    SystemConfig c = sensing_config(0.0);
    const DerivedParams p = derive_parameters(c);
    const auto grid = linspace(0.5 * c.omega_x, 1.5 * c.omega_x, 10001);
    const auto minima = find_sensitivity_minima(c, p, Mode::x, grid, occ);
    REQUIRE(minima.size() == 1);
    CHECK(minima[0].omega == doctest::Approx(c.omega_x).epsilon(1e-4));
  }

  SUBCASE("empty grid is rejected") {
    SystemConfig c = sensing_config(0.0);
    const DerivedParams p = derive_parameters(c);
    CHECK_THROWS_AS(find_sensitivity_minima(c, p, Mode::x, {}, occ), Error);
  }

  SUBCASE("strong coupling splits each mode: reciprocal sideband minima") {
    SystemConfig c = sensing_config(1e-3);
    const DerivedParams p = derive_parameters(c);
    const double lo = 0.5 * c.omega_x;
    const double hi = 1.5 * (c.omega_y + p.omega_r);
    const auto grid = linspace(lo, hi, 40001);
    const double cell = (hi - lo) / 40000.0;

    const auto near = [&](const std::vector<SensitivityMinimum>& ms, double w) {
      double best = 1e300;
      double val = 0.0;
      for (const auto& m : ms) {
        if (std::abs(m.omega - w) < best) {
          best = std::abs(m.omega - w);
          val = m.sqrt_psd;
        }
      }
      REQUIRE(best <= cell);
      return val;
    };

    const auto mx = find_sensitivity_minima(c, p, Mode::x, grid, occ);
    near(mx, c.omega_x);
    near(mx, c.omega_y + p.omega_r);
    const auto my = find_sensitivity_minima(c, p, Mode::y, grid, occ);
    near(my, c.omega_y);
    near(my, c.omega_x - p.omega_r);
  }
}
