#include "levsim/presets.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "levsim/csv.hpp"
#include "levsim/dynamics.hpp"
#include "levsim/errors.hpp"
#include "levsim/langevin.hpp"
#include "levsim/manifest.hpp"
#include "levsim/model.hpp"
#include "levsim/sensing.hpp"
#include "levsim/spectrum.hpp"

namespace levsim {
namespace {

using nlohmann::json;

// Each preset bundles a base configuration, the run parameters of its
// pipeline, and an "assumed" block documenting every choice that is not part
// of the published parameter list.

const char* kFig2 = R"json({
  "description": "eigenvalue bifurcation of the balanced gain/loss pair vs coupling",
  "config": {
    "frequency_unit_convention": "ordinary",
    "omega_x": 130e3, "omega_y": 160e3,
    "gamma_gx": 0.06, "gamma_gy": 0.06, "gamma_ay": 0.12,
    "gamma_cx": 0.0, "gamma_cy": 0.0,
    "Delta_detuning": 0.0
  },
  "run": { "beta_min": 0.0, "beta_max_in_gamma_gx": 4.0, "points": 1001 },
  "assumed": {
    "beta_grid": "0..4*gamma_gx, 1001 points; the sweep overrides delta per point"
  }
})json";

const char* kFig3 = R"json({
  "description": "mode amplitude evolution, uncoupled vs coupled (Rabi exchange)",
  "config": {
    "frequency_unit_convention": "ordinary",
    "omega_x": 130e3, "omega_y": 160e3,
    "gamma_gx": 0.06, "gamma_gy": 0.06, "gamma_ay": 0.12,
    "gamma_cx": 0.0, "gamma_cy": 0.0,
    "Delta_detuning": 1e-2,
    "delta": 1e-4, "Q0": 300.0
  },
  "run": { "t_end_uncoupled": 5.0, "t_end_coupled": 0.5, "dt": 5e-5 },
  "assumed": {
    "a_x0": "1 (x seeded)",
    "a_y0": "0 for the coupled run; 1 for the uncoupled run so the gain mode is visible"
  }
})json";

const char* kFig4 = R"json({
  "description": "phonon population evolution, uncoupled vs coupled",
  "config": {
    "frequency_unit_convention": "ordinary",
    "omega_x": 130e3, "omega_y": 160e3,
    "gamma_gx": 0.06, "gamma_gy": 0.06, "gamma_ay": 0.12,
    "gamma_cx": 0.0, "gamma_cy": 0.0,
    "Delta_detuning": 1e-2,
    "delta": 1e-4, "Q0": 300.0, "N0": 1e5,
    "a_x0_re": 316.22776601683796
  },
  "run": { "t_end_uncoupled": 5.0, "t_end_coupled": 0.6, "dt": 5e-5 },
  "assumed": {
    "D_t": "0 (not part of this parameter list)",
    "a_x0": "sqrt(N0): coherent amplitude carrying the initial population, so the exchange pump acts at population scale",
    "a_y0": "sqrt(N0) for the uncoupled run; 0 for the coupled run (x seeded)"
  }
})json";

const char* kFig5 = R"json({
  "description": "second-order coherence of the near-balanced coupled pair (thermal state)",
  "config": {
    "frequency_unit_convention": "angular",
    "omega_x": 40.0, "omega_y": 80.0,
    "gamma_gx": 1.0, "gamma_gy": 1.0, "gamma_ay": 1.8,
    "delta": 0.1, "omega_r": 40.0,
    "temperature": 300.0, "Q0": 0.0
  },
  "run": { "t_end": 12.0, "dt": 5e-6, "n_traj": 64, "warmup_frac": 0.2,
           "record_stride": 2000, "tau_max": 4.0, "tau_points": 41, "seed": 20250 },
  "assumed": {
    "scaling": "frequencies and rates scaled down so the stationary window is reachable with the Euler-Maruyama step; the coherence classification is scale invariant",
    "balance": "gain trimmed 10% below exact balance: the stochastic stepper needs a dissipation margin to reach a stationary state",
    "omega_r": "omega_y - omega_x (lab-frame exchange resonance)"
  }
})json";

const char* kFig6 = R"json({
  "description": "position dynamics with one lasing mode, uncoupled vs coupled",
  "config": {
    "frequency_unit_convention": "ordinary",
    "omega_x": 130e3, "omega_y": 160e3,
    "gamma_gx": 0.06, "gamma_gy": 0.06, "gamma_ay": 100.0,
    "gamma_cx": 1e-5, "gamma_cy": 1e-5,
    "Gamma_cx": 1e-6, "Gamma_cy": 1e-6,
    "delta": 1e-3, "Q0": 300.0,
    "Delta_detuning": 0.0,
    "a_y0_re": 0.1
  },
  "run": { "t_end": 0.05, "dt": 1e-6 },
  "assumed": {
    "Delta_detuning": "0 (resonant modulation; required for efficient transfer)",
    "a_y0": "0.1 seed so the uncoupled gain mode can rise"
  }
})json";

const char* kFig7 = R"json({
  "description": "phonon dynamics with one lasing mode: saturation and transfer",
  "config": {
    "frequency_unit_convention": "ordinary",
    "omega_x": 130e3, "omega_y": 160e3,
    "gamma_gx": 0.06, "gamma_gy": 0.06, "gamma_ay": 100.0,
    "gamma_cx": 1e-5, "gamma_cy": 1e-5,
    "Gamma_cx": 1e-6, "Gamma_cy": 1e-6,
    "D_tx": 1e3, "D_ty": 1e3,
    "delta": 1e-3, "Q0": 300.0, "N0": 1e5,
    "Delta_detuning": 0.0,
    "a_y0_re": 0.1
  },
  "run": { "t_end": 0.1, "dt": 1e-6 },
  "assumed": { "as": "fig6" }
})json";

const char* kFig8 = R"json({
  "description": "second-order coherence across the lasing transfer",
  "config": {
    "frequency_unit_convention": "angular",
    "omega_x": 150.0, "omega_y": 200.0,
    "gamma_gx": 0.5, "gamma_gy": 0.5, "gamma_ay": 20.0,
    "gamma_cx": 8.125e-3, "gamma_cy": 8.125e-3,
    "delta": 0.1, "omega_r": 50.0,
    "temperature": 1.15e-9,
    "Q0": 20.0, "a_x0_re": 0.0, "a_y0_re": 1.0
  },
  "run": { "t_end": 10.0, "dt": 1e-5, "n_traj": 64, "warmup_frac": 0.2,
           "record_stride": 1000, "tau_max": 4.0, "tau_points": 41, "seed": 20251 },
  "assumed": {
    "scaling": "scaled rates as in fig5; the lasing mode saturates at amplitude 20 in quadrature units",
    "temperature": "chosen so the damped mode carries a visible thermal signal at this scale",
    "omega_r": "omega_y - omega_x (lab-frame exchange resonance)"
  }
})json";

const char* kFig9 = R"json({
  "description": "force noise PSD and sensitivity minima, weak vs strong coupling",
  "config": {
    "frequency_unit_convention": "angular",
    "omega_x": 130e3, "omega_y": 160e3,
    "gamma_gx": 0.06, "gamma_gy": 0.06, "gamma_ay": 0.0,
    "gamma_cx": 1e-4, "gamma_cy": 1e-4,
    "Gamma_cx": 1e-5, "Gamma_cy": 1e-5,
    "D_tx": 10e3, "D_ty": 10e3,
    "eta": 2e-9, "phi": 5e16, "temperature": 1.0,
    "diameter": 100e-9, "density": 2200.0,
    "omega_r": 30e3, "delta": 1e-3
  },
  "run": { "points": 20001, "minima_points": 40001, "deltas": [1e-5, 1e-3] },
  "assumed": {
    "frequency_unit_convention": "angular: the quoted sensitivity scale is reproduced under this reading",
    "omega_r": "omega_y - omega_x, which merges each sideband response with the opposite carrier",
    "occupancies": "N_x = N_y = 0 (feedback-cooled modes)"
  }
})json";

json parse_preset(const char* text) { return json::parse(text); }

struct FigureOutputs {
  std::vector<std::string> files;
  std::vector<std::uint64_t> seeds;
};

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_amplitude_panels(const std::string& outdir, const std::string& stem_a,
                            const std::string& stem_b, const AmplitudeTrajectory& traj,
                            FigureOutputs& out) {
  CsvWriter ax(join(outdir, stem_a), {"t", "re_a", "im_a", "abs_a"});
  CsvWriter ay(join(outdir, stem_b), {"t", "re_a", "im_a", "abs_a"});
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    ax.row({traj.t[i], traj.a_x[i].real(), traj.a_x[i].imag(), std::abs(traj.a_x[i])});
    ay.row({traj.t[i], traj.a_y[i].real(), traj.a_y[i].imag(), std::abs(traj.a_y[i])});
  }
  ax.close();
  ay.close();
  out.files.push_back(join(outdir, stem_a));
  out.files.push_back(join(outdir, stem_b));
}

void write_phonon_panels(const std::string& outdir, const std::string& stem_x,
                         const std::string& stem_y, const CoupledTrajectory& traj,
                         double N0, FigureOutputs& out) {
  CsvWriter nx(join(outdir, stem_x), {"t", "N", "N_over_N0"});
  CsvWriter ny(join(outdir, stem_y), {"t", "N", "N_over_N0"});
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    nx.row({traj.t[i], traj.N_x[i], traj.N_x[i] / N0});
    ny.row({traj.t[i], traj.N_y[i], traj.N_y[i] / N0});
  }
  nx.close();
  ny.close();
  out.files.push_back(join(outdir, stem_x));
  out.files.push_back(join(outdir, stem_y));
}

void write_g2_csv(const std::string& path, const std::vector<G2Point>& points) {
  CsvWriter w(path, {"tau", "g2", "stderr"});
  for (const auto& p : points) w.row({p.tau, p.g2, p.stderr_});
  w.close();
}

void write_gnuplot_stub(const std::string& outdir, const std::string& fig,
                        const std::vector<std::string>& files,
                        const std::string& using_spec, FigureOutputs& out) {
  const std::string path = join(outdir, "plot_" + fig + ".gp");
  std::ofstream gp(path);
  if (!gp) fail(ErrorCode::IoError, "cannot open " + path);
  gp << "set datafile separator ','\n";
  gp << "set key autotitle columnhead\n";
  bool first = true;
  for (const auto& f : files) {
    gp << (first ? "plot " : "replot ") << "'"
       << std::filesystem::path(f).filename().string() << "' using " << using_spec
       << " with lines\n";
    first = false;
  }
  gp << "pause -1\n";
  out.files.push_back(path);
}

json patched(const json& base, const std::string& key, const json& value) {
  json copy = base;
  copy[key] = value;
  return copy;
}

FigureOutputs run_fig2(const json& doc, const std::string& outdir) {
  FigureOutputs out;
  const SystemConfig config = config_from_json(doc.at("config"));
  const auto& run = doc.at("run");
  const double beta_max = run.at("beta_max_in_gamma_gx").get<double>() * config.gamma_gx;
  const auto grid = linspace(run.at("beta_min").get<double>(), beta_max,
                             run.at("points").get<int>());
  const auto rows = sweep_coupling(config, grid);

  const std::string path = join(outdir, "fig2.csv");
  CsvWriter csv(path, {"beta", "re_plus", "im_plus", "re_minus", "im_minus", "phase"});
  for (const auto& r : rows) {
    csv.row({format_double(r.beta), format_double(r.eig.lambda_plus.real()),
             format_double(r.eig.lambda_plus.imag()),
             format_double(r.eig.lambda_minus.real()),
             format_double(r.eig.lambda_minus.imag()), pt_phase_name(r.eig.phase)});
  }
  csv.close();
  out.files.push_back(path);
  write_gnuplot_stub(outdir, "fig2", {path}, "1:2", out);
  return out;
}

FigureOutputs run_fig3(const json& doc, const std::string& outdir) {
  FigureOutputs out;
  const auto& run = doc.at("run");
  const double dt = run.at("dt").get<double>();

  json uncoupled_doc = patched(doc.at("config"), "delta", 0.0);
  uncoupled_doc["a_y0_re"] = 1.0;
  const SystemConfig uncoupled = config_from_json(uncoupled_doc);
  const SystemConfig coupled = config_from_json(doc.at("config"));

  const ModeAmplitudeState init_u{uncoupled.a_x0, uncoupled.a_y0, 0.0};
  const auto traj_u = integrate_amplitudes(init_u, uncoupled, derive_parameters(uncoupled),
                                           run.at("t_end_uncoupled").get<double>(), dt, 20);
  write_amplitude_panels(outdir, "fig3a.csv", "fig3c.csv", traj_u, out);

  const ModeAmplitudeState init_c{coupled.a_x0, coupled.a_y0, 0.0};
  const auto traj_c = integrate_amplitudes(init_c, coupled, derive_parameters(coupled),
                                           run.at("t_end_coupled").get<double>(), dt, 4);
  write_amplitude_panels(outdir, "fig3b.csv", "fig3d.csv", traj_c, out);
  write_gnuplot_stub(outdir, "fig3", out.files, "1:4", out);
  return out;
}

FigureOutputs run_fig4(const json& doc, const std::string& outdir) {
  FigureOutputs out;
  const auto& run = doc.at("run");
  const double dt = run.at("dt").get<double>();

  json uncoupled_doc = patched(doc.at("config"), "delta", 0.0);
  uncoupled_doc["a_y0_re"] = uncoupled_doc["a_x0_re"];
  const SystemConfig uncoupled = config_from_json(uncoupled_doc);
  const SystemConfig coupled = config_from_json(doc.at("config"));

  const auto integrate = [&](const SystemConfig& c, double t_end, int stride) {
    const ModeAmplitudeState amp0{c.a_x0, c.a_y0, 0.0};
    const PhononState ph0{c.initial_phonons(Mode::x), c.initial_phonons(Mode::y), 0.0};
    return integrate_coupled(amp0, ph0, c, derive_parameters(c), t_end, dt, stride);
  };

  const auto traj_u = integrate(uncoupled, run.at("t_end_uncoupled").get<double>(), 20);
  write_phonon_panels(outdir, "fig4a.csv", "fig4c.csv", traj_u, uncoupled.N0, out);
  const auto traj_c = integrate(coupled, run.at("t_end_coupled").get<double>(), 4);
  write_phonon_panels(outdir, "fig4b.csv", "fig4d.csv", traj_c, coupled.N0, out);
  write_gnuplot_stub(outdir, "fig4", out.files, "1:3", out);
  return out;
}

FigureOutputs run_g2_figure(const json& doc, const std::string& outdir,
                            const std::string& fig, bool delta_variants) {
  FigureOutputs out;
  const auto& run = doc.at("run");
  const double t_end = run.at("t_end").get<double>();
  const double dt = run.at("dt").get<double>();
  const int n_traj = run.at("n_traj").get<int>();
  const double warmup = run.at("warmup_frac").get<double>();
  const int stride = run.at("record_stride").get<int>();
  const auto seed = run.at("seed").get<std::uint64_t>();
  const auto tau_grid = linspace(0.0, run.at("tau_max").get<double>() - 0.0,
                                 run.at("tau_points").get<int>());

  const auto one = [&](const SystemConfig& config, std::uint64_t s)
      -> std::pair<std::vector<G2Point>, std::vector<G2Point>> {
    const auto ens = ensemble_run(config, derive_parameters(config), n_traj, t_end,
                                  dt, s, stride);
    return {estimate_g2(ens, Mode::x, tau_grid, warmup),
            estimate_g2(ens, Mode::y, tau_grid, warmup)};
  };

  if (!delta_variants) {
    const SystemConfig config = config_from_json(doc.at("config"));
    const auto [g2x, g2y] = one(config, seed);
    write_g2_csv(join(outdir, fig + "a.csv"), g2x);
    write_g2_csv(join(outdir, fig + "b.csv"), g2y);
    out.files.push_back(join(outdir, fig + "a.csv"));
    out.files.push_back(join(outdir, fig + "b.csv"));
    out.seeds.push_back(seed);
  } else {
    const SystemConfig uncoupled =
        config_from_json(patched(doc.at("config"), "delta", 0.0));
    const SystemConfig coupled = config_from_json(doc.at("config"));
    const auto [g2x_u, g2y_u] = one(uncoupled, seed);
    const auto [g2x_c, g2y_c] = one(coupled, seed + 1);
    write_g2_csv(join(outdir, fig + "a.csv"), g2x_u);
    write_g2_csv(join(outdir, fig + "b.csv"), g2x_c);
    write_g2_csv(join(outdir, fig + "c.csv"), g2y_u);
    write_g2_csv(join(outdir, fig + "d.csv"), g2y_c);
    for (const char* p : {"a", "b", "c", "d"}) {
      out.files.push_back(join(outdir, fig + p + ".csv"));
    }
    out.seeds.push_back(seed);
    out.seeds.push_back(seed + 1);
  }
  write_gnuplot_stub(outdir, fig, out.files, "1:2", out);
  return out;
}

FigureOutputs run_fig6(const json& doc, const std::string& outdir) {
  FigureOutputs out;
  const auto& run = doc.at("run");
  const double dt = run.at("dt").get<double>();
  const double t_end = run.at("t_end").get<double>();

  const SystemConfig uncoupled =
      config_from_json(patched(doc.at("config"), "delta", 0.0));
  const SystemConfig coupled = config_from_json(doc.at("config"));

  const auto integrate = [&](const SystemConfig& c) {
    const ModeAmplitudeState init{c.a_x0, c.a_y0, 0.0};
    return integrate_amplitudes(init, c, derive_parameters(c), t_end, dt, 50);
  };
  write_amplitude_panels(outdir, "fig6a.csv", "fig6c.csv", integrate(uncoupled), out);
  write_amplitude_panels(outdir, "fig6b.csv", "fig6d.csv", integrate(coupled), out);
  write_gnuplot_stub(outdir, "fig6", out.files, "1:4", out);
  return out;
}

FigureOutputs run_fig7(const json& doc, const std::string& outdir) {
  FigureOutputs out;
  const auto& run = doc.at("run");
  const double dt = run.at("dt").get<double>();
  const double t_end = run.at("t_end").get<double>();

  const SystemConfig uncoupled =
      config_from_json(patched(doc.at("config"), "delta", 0.0));
  const SystemConfig coupled = config_from_json(doc.at("config"));

  const auto integrate = [&](const SystemConfig& c) {
    const ModeAmplitudeState amp0{c.a_x0, c.a_y0, 0.0};
    const PhononState ph0{c.initial_phonons(Mode::x), c.initial_phonons(Mode::y), 0.0};
    return integrate_coupled(amp0, ph0, c, derive_parameters(c), t_end, dt, 50);
  };
  write_phonon_panels(outdir, "fig7a.csv", "fig7c.csv", integrate(uncoupled),
                      uncoupled.N0, out);
  write_phonon_panels(outdir, "fig7b.csv", "fig7d.csv", integrate(coupled),
                      coupled.N0, out);
  write_gnuplot_stub(outdir, "fig7", out.files, "1:3", out);
  return out;
}

FigureOutputs run_fig9(const json& doc, const std::string& outdir) {
  FigureOutputs out;
  const auto& run = doc.at("run");
  const int points = run.at("points").get<int>();
  const int minima_points = run.at("minima_points").get<int>();
  const std::vector<double> deltas = run.at("deltas").get<std::vector<double>>();
  const OccupancyPair occ{0.0, 0.0};

  const char* panel[2][2] = {{"fig9a.csv", "fig9b.csv"}, {"fig9c.csv", "fig9d.csv"}};

  const std::string minima_path = join(outdir, "fig9_minima.csv");
  CsvWriter minima_csv(minima_path, {"delta", "mode", "omega_min", "sensitivity"});

  for (int mi = 0; mi < 2; ++mi) {
    const Mode mode = mi == 0 ? Mode::x : Mode::y;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
      const SystemConfig config =
          config_from_json(patched(doc.at("config"), "delta", deltas[di]));
      const DerivedParams params = derive_parameters(config);
      const double lo = 0.5 * config.omega_x;
      const double hi = 1.5 * (config.omega_y + params.omega_r);
      const double S_s0 = mode == Mode::x ? params.S_s0_x : params.S_s0_y;

      const std::string path = join(outdir, panel[mi][di]);
      CsvWriter csv(path, {"omega", "S_T", "S_H", "S_C", "S_s", "total",
                           "sqrt_total", "s_s_over_s_s0"});
      for (double w : linspace(lo, hi, points)) {
        const ForcePsd f = force_psd(w, config, params, mode, occ);
        csv.row({w, f.S_T, f.S_H, f.S_C, f.S_s, f.total, std::sqrt(f.total),
                 f.S_s / S_s0});
      }
      csv.close();
      out.files.push_back(path);

      for (const auto& m : find_sensitivity_minima(
               config, params, mode, linspace(lo, hi, minima_points), occ)) {
        minima_csv.row({format_double(deltas[di]), mode == Mode::x ? "x" : "y",
                        format_double(m.omega), format_double(m.sqrt_psd)});
      }
    }
  }
  minima_csv.close();
  out.files.push_back(minima_path);
  write_gnuplot_stub(outdir, "fig9",
                     {out.files.begin(), out.files.end() - 1}, "1:8", out);
  return out;
}

}  // namespace

json preset_document(const std::string& figure_id) {
  if (figure_id == "fig2") return parse_preset(kFig2);
  if (figure_id == "fig3") return parse_preset(kFig3);
  if (figure_id == "fig4") return parse_preset(kFig4);
  if (figure_id == "fig5") return parse_preset(kFig5);
  if (figure_id == "fig6") return parse_preset(kFig6);
  if (figure_id == "fig7") return parse_preset(kFig7);
  if (figure_id == "fig8") return parse_preset(kFig8);
  if (figure_id == "fig9") return parse_preset(kFig9);
  fail(ErrorCode::UnknownFigure, "no computable preset named '" + figure_id + "'");
}

std::vector<std::string> preset_ids() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

std::vector<std::string> run_repro(const std::string& figure_id,
                                   const std::string& outdir) {
  const json doc = preset_document(figure_id);
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create output directory: " + outdir);

  const auto start = std::chrono::steady_clock::now();
  FigureOutputs out;
  if (figure_id == "fig2") out = run_fig2(doc, outdir);
  else if (figure_id == "fig3") out = run_fig3(doc, outdir);
  else if (figure_id == "fig4") out = run_fig4(doc, outdir);
  else if (figure_id == "fig5") out = run_g2_figure(doc, outdir, "fig5", false);
  else if (figure_id == "fig6") out = run_fig6(doc, outdir);
  else if (figure_id == "fig7") out = run_fig7(doc, outdir);
  else if (figure_id == "fig8") out = run_g2_figure(doc, outdir, "fig8", true);
  else if (figure_id == "fig9") out = run_fig9(doc, outdir);

  RunManifest manifest;
  manifest.subcommand = "repro";
  manifest.argv = {"repro", figure_id, "--outdir", outdir};
  manifest.config = config_to_json(config_from_json(doc.at("config")));
  manifest.flags = doc.at("run");
  manifest.seeds = out.seeds;
  manifest.outputs = out.files;
  manifest.duration_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest.extra = {{"preset", doc}};
  const std::string mpath = join(outdir, figure_id + ".manifest.json");
  write_manifest(manifest, mpath);
  out.files.push_back(mpath);
  return out.files;
}

}  // namespace levsim
