#include "levsim/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levsim/csv.hpp"
#include "levsim/dynamics.hpp"
#include "levsim/errors.hpp"
#include "levsim/langevin.hpp"
#include "levsim/manifest.hpp"
#include "levsim/model.hpp"
#include "levsim/presets.hpp"
#include "levsim/sensing.hpp"
#include "levsim/spectrum.hpp"

namespace levsim {
namespace {

Mode parse_mode(const std::string& name) {
  if (name == "x") return Mode::x;
  if (name == "y") return Mode::y;
  fail(ErrorCode::InvalidArgument, "mode must be 'x' or 'y'");
}

std::string manifest_path_for(const std::string& out_path) {
  std::filesystem::path p(out_path);
  p.replace_extension(".manifest.json");
  return p.string();
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void emit_manifest(const std::string& subcommand,
                   const std::vector<std::string>& argv, const SystemConfig& config,
                   const nlohmann::json& flags, const std::vector<std::uint64_t>& seeds,
                   const std::vector<std::string>& outputs, const Timer& timer,
                   const nlohmann::json& extra = {}) {
  RunManifest m;
  m.subcommand = subcommand;
  m.argv = argv;
  m.config = config_to_json(config);
  m.flags = flags;
  m.seeds = seeds;
  m.outputs = outputs;
  m.duration_s = timer.seconds();
  m.extra = extra;
  write_manifest(m, manifest_path_for(outputs.front()));
}

struct EigenOptions {
  std::string config_path, out;
  double beta_min = 0.0, beta_max = 0.0;
  int points = 1001;
};

void run_eigen(const EigenOptions& o, const std::vector<std::string>& argv) {
  Timer timer;
  const SystemConfig config = load_config(o.config_path);
  const auto rows = sweep_coupling(config, linspace(o.beta_min, o.beta_max, o.points));
  CsvWriter csv(o.out, {"beta", "re_plus", "im_plus", "re_minus", "im_minus", "phase"});
  for (const auto& r : rows) {
    csv.row({format_double(r.beta), format_double(r.eig.lambda_plus.real()),
             format_double(r.eig.lambda_plus.imag()),
             format_double(r.eig.lambda_minus.real()),
             format_double(r.eig.lambda_minus.imag()), pt_phase_name(r.eig.phase)});
  }
  csv.close();
  emit_manifest("eigen", argv, config,
                {{"beta_min", o.beta_min}, {"beta_max", o.beta_max},
                 {"points", o.points}, {"out", o.out}},
                {}, {o.out}, timer);
}

struct SimulateOptions {
  std::string config_path, out, position_out, position_mode = "x";
  double t_end = 0.0, dt = 0.0;
  int record_stride = 1, oversample = 32;
};

void run_simulate(const SimulateOptions& o, const std::vector<std::string>& argv) {
  Timer timer;
  const SystemConfig config = load_config(o.config_path);
  const DerivedParams params = derive_parameters(config);
  const ModeAmplitudeState initial{config.a_x0, config.a_y0, 0.0};
  const auto traj = integrate_amplitudes(initial, config, params, o.t_end, o.dt,
                                         o.record_stride);

  CsvWriter csv(o.out, {"t", "re_ax", "im_ax", "re_ay", "im_ay"});
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    csv.row({traj.t[i], traj.a_x[i].real(), traj.a_x[i].imag(),
             traj.a_y[i].real(), traj.a_y[i].imag()});
  }
  csv.close();
  std::vector<std::string> outputs{o.out};

  if (!o.position_out.empty()) {
    const Mode mode = parse_mode(o.position_mode);
    const auto series = reconstruct_position(traj, params, config, mode, o.oversample);
    CsvWriter pos(o.position_out, {"t", "Q"});
    for (std::size_t i = 0; i < series.t.size(); ++i) {
      pos.row({series.t[i], series.Q[i]});
    }
    pos.close();
    outputs.push_back(o.position_out);
  }

  emit_manifest("simulate", argv, config,
                {{"t_end", o.t_end}, {"dt", o.dt}, {"record_stride", o.record_stride},
                 {"out", o.out}, {"position_out", o.position_out},
                 {"position_mode", o.position_mode}, {"oversample", o.oversample}},
                {}, outputs, timer);
}

struct PhononOptions {
  std::string config_path, out;
  double t_end = 0.0, dt = 0.0;
  int record_stride = 1;
  bool strict = false;
};

void run_phonon(const PhononOptions& o, const std::vector<std::string>& argv) {
  Timer timer;
  const SystemConfig config = load_config(o.config_path);
  const DerivedParams params = derive_parameters(config);
  const ModeAmplitudeState amp0{config.a_x0, config.a_y0, 0.0};
  const PhononState ph0{config.initial_phonons(Mode::x),
                        config.initial_phonons(Mode::y), 0.0};
  const auto traj =
      integrate_coupled(amp0, ph0, config, params, o.t_end, o.dt, o.record_stride);
  if (o.strict && traj.negative_clamps > 0) {
    fail(ErrorCode::NonFinite,
         "strict mode: phonon population clamped at zero " +
             std::to_string(traj.negative_clamps) + " times");
  }

  CsvWriter csv(o.out, {"t", "re_ax", "im_ax", "re_ay", "im_ay", "Nx", "Ny"});
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    csv.row({traj.t[i], traj.a_x[i].real(), traj.a_x[i].imag(), traj.a_y[i].real(),
             traj.a_y[i].imag(), traj.N_x[i], traj.N_y[i]});
  }
  csv.close();
  emit_manifest("phonon", argv, config,
                {{"t_end", o.t_end}, {"dt", o.dt}, {"record_stride", o.record_stride},
                 {"strict", o.strict}, {"out", o.out}},
                {}, {o.out}, timer,
                {{"negative_clamps", traj.negative_clamps}});
}

struct LangevinOptions {
  std::string config_path, out;
  double t_end = 0.0, dt = 0.0;
  int n_traj = 1;
  std::uint64_t seed = 12345;
  int record_stride = 1;
};

void run_langevin(const LangevinOptions& o, const std::vector<std::string>& argv) {
  Timer timer;
  const SystemConfig config = load_config(o.config_path);
  const DerivedParams params = derive_parameters(config);

  if (o.n_traj <= 1) {
    const auto traj = simulate_trajectory(initial_phase_space(config), config, params,
                                          o.t_end, o.dt, o.seed, o.record_stride);
    CsvWriter csv(o.out, {"t", "Qx", "Px", "Qy", "Py"});
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
      csv.row({traj.t[i], traj.Q_x[i], traj.P_x[i], traj.Q_y[i], traj.P_y[i]});
    }
    csv.close();
  } else {
    const auto ens = ensemble_run(config, params, o.n_traj, o.t_end, o.dt, o.seed,
                                  o.record_stride);
    CsvWriter csv(o.out, {"t", "mean_Qx", "var_Qx", "mean_Px", "var_Px", "mean_Qy",
                          "var_Qy", "mean_Py", "var_Py"});
    for (std::size_t i = 0; i < ens.t.size(); ++i) {
      csv.row({ens.t[i], ens.mean_Q_x[i], ens.var_Q_x[i], ens.mean_P_x[i],
               ens.var_P_x[i], ens.mean_Q_y[i], ens.var_Q_y[i], ens.mean_P_y[i],
               ens.var_P_y[i]});
    }
    csv.close();
  }
  emit_manifest("langevin", argv, config,
                {{"t_end", o.t_end}, {"dt", o.dt}, {"n_traj", o.n_traj},
                 {"record_stride", o.record_stride}, {"out", o.out}},
                {o.seed}, {o.out}, timer);
}

struct G2Options {
  std::string config_path, out, mode = "x";
  double t_end = 0.0, dt = 0.0, warmup_frac = 0.2, tau_max = 0.0;
  int n_traj = 256, tau_points = 64, record_stride = 1;
  std::uint64_t seed = 12345;
};

void run_g2(const G2Options& o, const std::vector<std::string>& argv) {
  Timer timer;
  const SystemConfig config = load_config(o.config_path);
  const DerivedParams params = derive_parameters(config);
  const auto ens = ensemble_run(config, params, o.n_traj, o.t_end, o.dt, o.seed,
                                o.record_stride);
  const auto tau_grid = linspace(0.0, o.tau_max, o.tau_points);
  const auto g2 = estimate_g2(ens, parse_mode(o.mode), tau_grid, o.warmup_frac);

  CsvWriter csv(o.out, {"tau", "g2", "stderr"});
  for (const auto& p : g2) csv.row({p.tau, p.g2, p.stderr_});
  csv.close();
  emit_manifest("g2", argv, config,
                {{"mode", o.mode}, {"t_end", o.t_end}, {"dt", o.dt},
                 {"n_traj", o.n_traj}, {"warmup_frac", o.warmup_frac},
                 {"tau_max", o.tau_max}, {"tau_points", o.tau_points},
                 {"record_stride", o.record_stride}, {"out", o.out}},
                {o.seed}, {o.out}, timer);
}

struct PsdOptions {
  std::string config_path, out, mode = "x";
  double omega_min = -1.0, omega_max = -1.0;
  int points = 20001;
  double N_x = 0.0, N_y = 0.0;
};

void resolve_grid(const SystemConfig& config, const DerivedParams& params,
                  PsdOptions& o) {
  if (o.omega_min < 0.0) o.omega_min = 0.5 * config.omega_x;
  if (o.omega_max < 0.0) o.omega_max = 1.5 * (config.omega_y + params.omega_r);
}

void run_force_psd(PsdOptions o, const std::vector<std::string>& argv) {
  Timer timer;
  const SystemConfig config = load_config(o.config_path);
  const DerivedParams params = derive_parameters(config);
  resolve_grid(config, params, o);
  const Mode mode = parse_mode(o.mode);
  const OccupancyPair occ{o.N_x, o.N_y};

  CsvWriter csv(o.out, {"omega", "S_T", "S_H", "S_C", "S_s", "total", "sqrt_total"});
  for (double w : linspace(o.omega_min, o.omega_max, o.points)) {
    const ForcePsd f = force_psd(w, config, params, mode, occ);
    csv.row({w, f.S_T, f.S_H, f.S_C, f.S_s, f.total, std::sqrt(f.total)});
  }
  csv.close();
  emit_manifest("force-psd", argv, config,
                {{"mode", o.mode}, {"omega_min", o.omega_min},
                 {"omega_max", o.omega_max}, {"points", o.points},
                 {"N_x", o.N_x}, {"N_y", o.N_y}, {"out", o.out}},
                {}, {o.out}, timer);
}

void run_minima(PsdOptions o, const std::string& which,
                const std::vector<std::string>& argv) {
  Timer timer;
  const SystemConfig config = load_config(o.config_path);
  const DerivedParams params = derive_parameters(config);
  resolve_grid(config, params, o);
  const OccupancyPair occ{o.N_x, o.N_y};
  const auto grid = linspace(o.omega_min, o.omega_max, o.points);

  std::vector<Mode> modes;
  if (which == "both") {
    modes = {Mode::x, Mode::y};
  } else {
    modes = {parse_mode(which)};
  }

  CsvWriter csv(o.out, {"mode", "omega_min", "sensitivity"});
  for (Mode mode : modes) {
    for (const auto& m : find_sensitivity_minima(config, params, mode, grid, occ)) {
      csv.row({std::string(mode == Mode::x ? "x" : "y"), format_double(m.omega),
               format_double(m.sqrt_psd)});
    }
  }
  csv.close();
  emit_manifest("minima", argv, config,
                {{"mode", which}, {"omega_min", o.omega_min},
                 {"omega_max", o.omega_max}, {"points", o.points},
                 {"N_x", o.N_x}, {"N_y", o.N_y}, {"out", o.out}},
                {}, {o.out}, timer);
}

const std::vector<std::string> kSubcommands = {
    "eigen", "simulate", "phonon", "langevin", "g2", "force-psd", "minima", "repro"};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  if (!args.empty() && !args.front().empty() && args.front()[0] != '-') {
    bool known = false;
    for (const auto& s : kSubcommands) known = known || s == args.front();
    if (!known) {
      err << "error: UnknownSubcommand: '" << args.front() << "'" << std::endl;
      return 2;
    }
  }

  CLI::App app{"coupled-mode levitated nanoparticle simulator"};
  app.require_subcommand(0, 1);

  EigenOptions eigen_opts;
  auto* eigen = app.add_subcommand("eigen", "eigenvalue sweep over coupling strength");
  eigen->add_option("--config", eigen_opts.config_path, "config file")->required();
  eigen->add_option("--beta-min", eigen_opts.beta_min, "sweep start (rad/s)");
  eigen->add_option("--beta-max", eigen_opts.beta_max, "sweep end (rad/s)")->required();
  eigen->add_option("--points", eigen_opts.points, "grid points");
  eigen->add_option("--out", eigen_opts.out, "output CSV")->required();

  SimulateOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "mode amplitude integration");
  simulate->add_option("--config", sim_opts.config_path, "config file")->required();
  simulate->add_option("--t-end", sim_opts.t_end, "duration (s)")->required();
  simulate->add_option("--dt", sim_opts.dt, "step (s)")->required();
  simulate->add_option("--record-stride", sim_opts.record_stride, "record every Nth step");
  simulate->add_option("--out", sim_opts.out, "output CSV")->required();
  simulate->add_option("--position-out", sim_opts.position_out,
                       "also reconstruct the carrier-frame position");
  simulate->add_option("--position-mode", sim_opts.position_mode, "x or y");
  simulate->add_option("--oversample", sim_opts.oversample, "samples per carrier period");

  PhononOptions ph_opts;
  auto* phonon = app.add_subcommand("phonon", "joint amplitude + phonon integration");
  phonon->add_option("--config", ph_opts.config_path, "config file")->required();
  phonon->add_option("--t-end", ph_opts.t_end, "duration (s)")->required();
  phonon->add_option("--dt", ph_opts.dt, "step (s)")->required();
  phonon->add_option("--record-stride", ph_opts.record_stride, "record every Nth step");
  phonon->add_flag("--strict", ph_opts.strict, "fail if a population is clamped at 0");
  phonon->add_option("--out", ph_opts.out, "output CSV")->required();

  LangevinOptions lg_opts;
  auto* langevin = app.add_subcommand("langevin", "stochastic phase-space integration");
  langevin->add_option("--config", lg_opts.config_path, "config file")->required();
  langevin->add_option("--t-end", lg_opts.t_end, "duration (s)")->required();
  langevin->add_option("--dt", lg_opts.dt, "step (s)")->required();
  langevin->add_option("--n-traj", lg_opts.n_traj,
                       "1: single trajectory; >1: ensemble statistics");
  langevin->add_option("--seed", lg_opts.seed, "master seed");
  langevin->add_option("--record-stride", lg_opts.record_stride, "record every Nth step");
  langevin->add_option("--out", lg_opts.out, "output CSV")->required();

  G2Options g2_opts;
  auto* g2 = app.add_subcommand("g2", "second-order coherence estimation");
  g2->add_option("--config", g2_opts.config_path, "config file")->required();
  g2->add_option("--mode", g2_opts.mode, "x or y")->required();
  g2->add_option("--t-end", g2_opts.t_end, "duration (s)")->required();
  g2->add_option("--dt", g2_opts.dt, "step (s)")->required();
  g2->add_option("--n-traj", g2_opts.n_traj, "ensemble size");
  g2->add_option("--seed", g2_opts.seed, "master seed");
  g2->add_option("--warmup-frac", g2_opts.warmup_frac, "discarded fraction");
  g2->add_option("--tau-max", g2_opts.tau_max, "largest delay (s)")->required();
  g2->add_option("--tau-points", g2_opts.tau_points, "delay grid points");
  g2->add_option("--record-stride", g2_opts.record_stride, "intensity sample stride");
  g2->add_option("--out", g2_opts.out, "output CSV")->required();

  PsdOptions psd_opts;
  auto* force = app.add_subcommand("force-psd", "force noise power spectral density");
  force->add_option("--config", psd_opts.config_path, "config file")->required();
  force->add_option("--mode", psd_opts.mode, "x or y")->required();
  force->add_option("--omega-min", psd_opts.omega_min, "grid start (rad/s)");
  force->add_option("--omega-max", psd_opts.omega_max, "grid end (rad/s)");
  force->add_option("--points", psd_opts.points, "grid points");
  force->add_option("--Nx", psd_opts.N_x, "x-mode occupancy");
  force->add_option("--Ny", psd_opts.N_y, "y-mode occupancy");
  force->add_option("--out", psd_opts.out, "output CSV")->required();

  PsdOptions min_opts;
  min_opts.points = 40001;
  std::string min_mode = "both";
  auto* minima = app.add_subcommand("minima", "force sensitivity minima");
  minima->add_option("--config", min_opts.config_path, "config file")->required();
  minima->add_option("--mode", min_mode, "x, y or both");
  minima->add_option("--omega-min", min_opts.omega_min, "grid start (rad/s)");
  minima->add_option("--omega-max", min_opts.omega_max, "grid end (rad/s)");
  minima->add_option("--points", min_opts.points, "grid points");
  minima->add_option("--Nx", min_opts.N_x, "x-mode occupancy");
  minima->add_option("--Ny", min_opts.N_y, "y-mode occupancy");
  minima->add_option("--out", min_opts.out, "output CSV")->required();

  std::string figure_id, outdir = ".";
  auto* repro = app.add_subcommand("repro", "run a bundled preset study");
  repro->add_option("figure", figure_id, "preset id (fig2..fig9)")->required();
  repro->add_option("--outdir", outdir, "output directory");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("levsim");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (eigen->parsed()) run_eigen(eigen_opts, args);
    else if (simulate->parsed()) run_simulate(sim_opts, args);
    else if (phonon->parsed()) run_phonon(ph_opts, args);
    else if (langevin->parsed()) run_langevin(lg_opts, args);
    else if (g2->parsed()) run_g2(g2_opts, args);
    else if (force->parsed()) run_force_psd(psd_opts, args);
    else if (minima->parsed()) run_minima(min_opts, min_mode, args);
    else if (repro->parsed()) {
      for (const auto& path : run_repro(figure_id, outdir)) {
        out << path << '\n';
      }
    } else {
      out << app.help() << std::endl;
    }
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help() << std::endl;
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << e.what() << std::endl;
    return 2;
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << std::endl;
    return is_config_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: RuntimeError: " << e.what() << std::endl;
    return 1;
  }
}

}  // namespace levsim
