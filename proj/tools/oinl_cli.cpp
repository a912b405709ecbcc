// Command-line front end: `simulate` runs a ratio scan, `kernel-table` dumps
// dipole-kernel term magnitudes.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "oinl/oinl.hpp"

namespace {

constexpr int exit_partial_failure = 6;

struct SimulateOptions {
  std::string config_path;
  std::string mode;
  std::string out_dir;
  std::optional<std::size_t> grid;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::string step_log;
  std::string dump_ground;
  bool no_plot = false;
};

struct KernelOptions {
  double wavenumber = 0.0;
  double kr_min = 0.1;
  double kr_max = 10.0;
  std::size_t count = 50;
  std::vector<double> thetas{0.0, oinl::pi / 4.0, oinl::pi / 2.0};
  std::string out;
};

void print_summary(const oinl::SimulationConfig& cfg, const oinl::ScanTable& table) {
  const auto& ex = cfg.experiment;
  const double omega = oinl::trap_frequency_from_doughnut(ex.doughnut, ex.species.mass);
  const auto tf = oinl::tf_ground_state(ex.species, omega, ex.protocol.atom_number, ex.protocol.axial_length);
  std::printf("omega_perp = 2pi x %.2f Hz, a_ho = %.4f um, R_TF = %.4f um\n", omega / oinl::two_pi,
              std::sqrt(oinl::hbar / (ex.species.mass * omega)) * 1e6, tf.radius * 1e6);
  std::printf("%-10s %-9s %-10s %-9s %-9s %-8s %s\n", "ratio", "mode", "N-/N", "epsilon", "phi_V", "budget", "flags");
  for (const auto& r : table.rows) {
    if (!r.ok()) {
      std::printf("%-10.6g %-9s FAILED: %s\n", r.ratio, oinl::to_string(r.mode).c_str(), r.error.c_str());
      continue;
    }
    std::string flags;
    if (r.ratio > oinl::recommended_max_intensity_ratio) flags += "above-operating-limit ";
    if (r.budget > ex.numerics.budget_threshold) flags += "budget ";
    std::printf("%-10.6g %-9s %-10.6f %-9.4f %-9.4f %-8.4f %s\n", r.ratio, oinl::to_string(r.mode).c_str(), r.fraction,
                r.epsilon, r.phi_v, r.budget, flags.c_str());
  }
  std::printf("operating limit: intensity ratio must not exceed about %.3g for T gamma_dec << 1\n",
              oinl::recommended_max_intensity_ratio);
}

int run_simulate(const SimulateOptions& opt) {
  auto cfg = oinl::load_config(opt.config_path);
  auto& num = cfg.experiment.numerics;
  if (!opt.mode.empty()) {
    if (opt.mode == "all") {
      cfg.scan.modes = {oinl::Mode::tf_analytic, oinl::Mode::integral_exact_ground, oinl::Mode::full_numeric};
    } else if (auto m = oinl::parse_mode(opt.mode)) {
      cfg.scan.modes = {*m};
    } else {
      throw oinl::DomainError("unknown mode '" + opt.mode + "'");
    }
  }
  if (!opt.out_dir.empty()) cfg.scan.output_dir = opt.out_dir;
  if (opt.grid) {
    if (!oinl::is_power_of_two(*opt.grid)) throw oinl::DomainError("--grid must be a power of two");
    num.grid_points = *opt.grid;
  }
  if (opt.dt) num.solver.dt_real = *opt.dt;
  if (opt.seed) num.seed = *opt.seed;
  if (opt.no_plot) cfg.scan.plot_files = false;
  if (!opt.step_log.empty()) cfg.scan.step_log = opt.step_log;
  cfg.experiment.validate();

  if (!opt.dump_ground.empty()) {
    const auto ground = oinl::prepare_ground_state(cfg.experiment, oinl::Mode::full_numeric);
    const auto sys = oinl::scale_to_dimensionless(cfg.experiment.species, cfg.experiment.doughnut,
                                                  cfg.experiment.protocol);
    oinl::write_field_csv(ground.psi, opt.dump_ground, sys.length_unit);
  }

  const auto table = oinl::run_scan(cfg);
  const auto files = oinl::write_outputs(table, cfg.scan.output_dir, cfg.scan.plot_files);
  print_summary(cfg, table);
  for (const auto& r : table.rows)
    for (const auto& w : r.warnings)
      std::fprintf(stderr, "warning [%s %.6g]: %s\n", oinl::to_string(r.mode).c_str(), r.ratio, w.c_str());
  for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
  for (const auto& r : table.rows)
    if (!r.ok()) return exit_partial_failure;
  return 0;
}

int run_kernel_table(const KernelOptions& opt) {
  if (!(opt.kr_max > opt.kr_min) || !(opt.kr_min > 0.0) || opt.count < 2)
    throw oinl::DomainError("kernel-table: need 0 < kr-min < kr-max and count >= 2");
  const double k = opt.wavenumber > 0.0 ? opt.wavenumber : oinl::two_pi / 780e-9;
  std::vector<double> kr(opt.count);
  const double ratio = std::pow(opt.kr_max / opt.kr_min, 1.0 / static_cast<double>(opt.count - 1));
  for (std::size_t i = 0; i < opt.count; ++i) kr[i] = opt.kr_min * std::pow(ratio, static_cast<double>(i));

  std::string text = "kR,theta,near,intermediate,far\n";
  char buf[160];
  for (const auto& row : oinl::kernel_table(k, kr, opt.thetas)) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n", row.kr, row.theta, row.near, row.intermediate,
                  row.far);
    text += buf;
  }
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.out);
    if (!out) throw oinl::IoError(opt.out, "cannot open for writing");
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interference-scheme simulator for optically induced nonlinearities in a two-component BEC"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run the N_- scan over gaussian intensity ratios");
  simulate->add_option("--config", sim.config_path, "Configuration file")->required();
  simulate->add_option("--mode", sim.mode, "tf | integral | numeric | all (overrides the config)");
  simulate->add_option("--out", sim.out_dir, "Output directory (overrides the config)");
  simulate->add_option("--grid", sim.grid, "Grid points per side (power of two)");
  simulate->add_option("--dt", sim.dt, "Real-time step in units of 1/omega_perp");
  simulate->add_option("--seed", sim.seed, "Seed for the noise initial guess");
  simulate->add_option("--step-log", sim.step_log, "Per-step norm log prefix for full numeric runs");
  simulate->add_option("--dump-ground", sim.dump_ground, "Write the doughnut-trap ground state as CSV");
  simulate->add_flag("--no-plot", sim.no_plot, "Skip the per-mode plot files");

  KernelOptions ker;
  auto* kernel = app.add_subcommand("kernel-table", "Tabulate |near|, |intermediate|, |far| dipole-kernel terms");
  kernel->add_option("--k-l", ker.wavenumber, "Laser wavenumber k_L in 1/m (default 2pi/780nm)");
  kernel->add_option("--kr-min", ker.kr_min, "Smallest k_L R");
  kernel->add_option("--kr-max", ker.kr_max, "Largest k_L R");
  kernel->add_option("--count", ker.count, "Number of k_L R samples (log spaced)");
  kernel->add_option("--theta", ker.thetas, "Angles to the dipole axis, rad")->delimiter(',');
  kernel->add_option("--out", ker.out, "Output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (kernel->parsed()) return run_kernel_table(ker);
  } catch (const oinl::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
