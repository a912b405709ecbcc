// Acceptance suite: one PASS/FAIL line per criterion.  Criterion 10 (grid
// refinement to 512^2) only runs with --slow; --only N runs a single criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oinl/oinl.hpp"

using namespace oinl;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const double scan_ratios[] = {0.0005, 0.001, 0.0015, 0.002, 0.0025};

ExperimentConfig paper() { return ExperimentConfig::paper_defaults(); }

double omega_paper() {
  const auto c = paper();
  return trap_frequency_from_doughnut(c.doughnut, c.species.mass);
}

const GroundState& doughnut_ground_256() {
  static const GroundState gs = prepare_ground_state(paper(), Mode::full_numeric);
  return gs;
}

Outcome trap_frequency() {
  const double omega = omega_paper();
  const double target = two_pi * 576.0;
  const double rel = std::abs(omega / target - 1.0);
  return {rel < 0.01, fmt("omega = 2pi x %.3f Hz, relative deviation %.2e (limit 1e-2)", omega / two_pi, rel)};
}

Outcome tf_radius() {
  const auto c = paper();
  const auto tf = tf_ground_state(c.species, omega_paper(), c.protocol.atom_number, c.protocol.axial_length);
  const double rel = std::abs(tf.radius / 2e-6 - 1.0);
  return {rel < 0.05, fmt("R_TF = %.4f um, relative deviation %.3f (limit 0.05)", tf.radius * 1e6, rel)};
}

Outcome tf_curve() {
  const auto c = paper();
  const double at_zero = run_interferometer(c, 0.0, Mode::tf_analytic).fraction;
  const double at_end = run_interferometer(c, 0.0025, Mode::tf_analytic).fraction;
  // Dense sampling of the whole interval, not only the scan points.
  bool monotone = true;
  double prev = -1.0, peak = 0.0, peak_ratio = 0.0;
  for (int i = 0; i <= 2500; ++i) {
    const double r = 0.0025 * i / 2500.0;
    const double f = run_interferometer(c, r, Mode::tf_analytic).fraction;
    monotone = monotone && f >= prev;
    if (f > peak) {
      peak = f;
      peak_ratio = r;
    }
    prev = f;
  }
  const bool pass = at_zero == 0.0 && std::abs(at_end - 0.75) <= 0.05 && monotone;
  return {pass, fmt("f(0) = %g, f(0.0025) = %.6f (0.75 +- 0.05), monotone on 2501 points: %s, "
                    "maximum %.6f at ratio %.6f",
                    at_zero, at_end, monotone ? "yes" : "no", peak, peak_ratio)};
}

Outcome numeric_ordering() {
  const auto c = paper();
  const auto& gs = doughnut_ground_256();
  bool pass = true;
  std::string detail = fmt("256^2, ground state %zu iterations; ratio: numeric / tf:", gs.iterations);
  for (double r : scan_ratios) {
    const double num = run_interferometer(c, r, Mode::full_numeric, &gs).fraction;
    const double tf = run_interferometer(c, r, Mode::tf_analytic).fraction;
    pass = pass && num <= tf && tf - num < 0.12;
    detail += fmt(" %g: %.4f / %.4f;", r, num, tf);
  }
  return {pass, detail};
}

Outcome oracle_equivalence() {
  auto c = paper();
  c.numerics.integral_ground = GroundSource::thomas_fermi;
  c.numerics.integral_full_profile = false;
  double worst = 0.0;
  for (double r : scan_ratios) {
    const double integral = run_interferometer(c, r, Mode::integral_exact_ground).fraction;
    const double closed = run_interferometer(c, r, Mode::tf_analytic).fraction;
    worst = std::max(worst, std::abs(integral / closed - 1.0));
  }
  const double zero = run_interferometer(c, 0.0, Mode::integral_exact_ground).fraction;
  return {worst < 0.005 && zero == 0.0,
          fmt("max relative deviation %.2e over the scan (limit 5e-3), ratio 0 gives %g", worst, zero)};
}

Outcome solver_properties() {
  const auto c = paper();
  const auto sys = scale_to_dimensionless(c.species, c.doughnut, c.protocol);
  const auto& gs = doughnut_ground_256();
  const Grid2D& grid = gs.psi.grid();
  SplitStepSolver solver(grid);
  const auto h = imprint_hamiltonian(sys, grid, 0.0025, true);

  // (a) per-component norm drift over 1000 steps.
  auto s = raman_apply(TwoComponentState(gs.psi, ComplexField2D(grid)), 0.0);
  const double nm0 = atom_number(s.minus), np0 = atom_number(s.plus);
  for (int k = 0; k < 1000; ++k) solver.step_real(s, h, c.numerics.solver.dt_real);
  const double drift = std::max(std::abs(atom_number(s.minus) / nm0 - 1.0), std::abs(atom_number(s.plus) / np0 - 1.0));

  // (b) imaginary-time energies, allowing 1e-12 relative jitter.
  std::size_t rises = 0;
  double worst_rise = 0.0;
  for (std::size_t k = 1; k < gs.energies.size(); ++k) {
    const double rel = (gs.energies[k] - gs.energies[k - 1]) / std::abs(gs.energies[k - 1]);
    worst_rise = std::max(worst_rise, rel);
    if (rel > 1e-12) ++rises;
  }

  // (c) chemical potential against Thomas-Fermi.
  const auto tf = tf_ground_state(c.species, sys.omega_perp, c.protocol.atom_number, c.protocol.axial_length);
  const double mu_tf = tf.mu / sys.energy_unit;
  const double mu_rel = std::abs(gs.mu / mu_tf - 1.0);

  // (d) self-convergence order from dt, dt/2, dt/4 over the imprint.
  auto start = raman_apply(TwoComponentState(gs.psi, ComplexField2D(grid)), 0.5 * sys.delta_v * sys.imprint_time);
  const double t = sys.imprint_time;
  const auto a = solver.propagate(start, h, t, 4e-3);
  const auto b = solver.propagate(start, h, t, 2e-3);
  const auto d = solver.propagate(start, h, t, 1e-3);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    e1 = std::max({e1, std::abs(a.minus[k] - b.minus[k]), std::abs(a.plus[k] - b.plus[k])});
    e2 = std::max({e2, std::abs(b.minus[k] - d.minus[k]), std::abs(b.plus[k] - d.plus[k])});
  }
  const double order = std::log2(e1 / e2);

  const bool pass = drift < 1e-9 && rises == 0 && mu_rel < 0.05 && order >= 1.8;
  return {pass, fmt("(a) norm drift %.2e (limit 1e-9); (b) %zu of %zu steps rise beyond 1e-12, largest relative rise %.1e; "
                    "(c) mu = %.4f vs mu_TF = %.4f, deviation %.3f (limit 0.05); (d) order %.3f (min 1.8)",
                    drift, rises, gs.energies.size(), worst_rise, gs.mu, mu_tf, mu_rel, order)};
}

Outcome null_test() {
  auto c = paper();
  c.numerics.oinl_enabled = false;
  const auto& gs = doughnut_ground_256();
  double analytic = 0.0, numeric = 0.0;
  for (double r : {0.0, 0.001, 0.0025}) {
    analytic = std::max(analytic, run_interferometer(c, r, Mode::tf_analytic).fraction);
    auto ci = c;
    ci.numerics.integral_ground = GroundSource::thomas_fermi;
    analytic = std::max(analytic, run_interferometer(ci, r, Mode::integral_exact_ground).fraction);
    numeric = std::max(numeric, run_interferometer(c, r, Mode::full_numeric, &gs).fraction);
  }
  return {analytic == 0.0 && numeric < 1e-3,
          fmt("analytic modes max %g (must be 0), full numeric max %.2e (limit 1e-3)", analytic, numeric)};
}

Outcome frozen_dynamics() {
  const auto c = paper();
  const auto sys = scale_to_dimensionless(c.species, c.doughnut, c.protocol);
  const auto& gs = doughnut_ground_256();
  const Grid2D& grid = gs.psi.grid();
  const auto start = raman_apply(TwoComponentState(gs.psi, ComplexField2D(grid)), 0.5 * sys.delta_v * sys.imprint_time);

  TwoComponentHamiltonian h;
  h.potential_minus = harmonic_potential(grid);
  h.potential_plus = harmonic_potential(grid);
  for (auto& v : h.potential_plus.values()) v += sys.delta_v;
  h.oinl_plus = gaussian_oinl_coupling(sys, grid, 0.0025, true);
  h.kinetic = false;
  SplitStepSolver solver(grid);
  const auto numeric = solver.propagate(start, h, sys.imprint_time, c.numerics.solver.dt_real);
  const auto analytic = imprint_analytic(start, h.oinl_plus, sys.delta_v, sys.imprint_time);

  double peak = 0.0;
  for (double d : density(gs.psi).values()) peak = std::max(peak, d);
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (std::norm(gs.psi[k]) < 1e-12 * peak) continue;
    const double pn = std::arg(numeric.plus[k] * std::conj(numeric.minus[k]));
    const double pa = std::arg(analytic.plus[k] * std::conj(analytic.minus[k]));
    worst = std::max(worst, std::abs(std::remainder(pn - pa, two_pi)));
  }
  return {worst < 1e-10, fmt("max relative-phase deviation %.2e rad (limit 1e-10)", worst)};
}

Outcome kernel_averages() {
  const double near = near_field_angular_average();
  const double far = far_field_angular_average();
  return {std::abs(near) < 1e-12 && std::abs(far + 4.0 / 3.0) < 1e-10,
          fmt("near-field average %.2e (limit 1e-12), far-field average %.15f (-4/3 +- 1e-10)", near, far)};
}

Outcome grid_convergence() {
  auto coarse = paper();
  auto fine = paper();
  fine.numerics.grid_points = 512;
  const double a = run_interferometer(coarse, 0.0025, Mode::full_numeric, &doughnut_ground_256()).fraction;
  const double b = run_interferometer(fine, 0.0025, Mode::full_numeric).fraction;
  return {std::abs(a - b) < 0.01, fmt("256^2: %.6f, 512^2: %.6f, change %.2e (limit 1e-2)", a, b, std::abs(a - b))};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  bool slow;
};

}  // namespace

int main(int argc, char** argv) {
  bool slow = false;
  std::optional<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--slow") == 0) slow = true;
    else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: %s [--slow] [--only N]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "trap frequency anchor", trap_frequency, false},
      {2, "Thomas-Fermi radius anchor", tf_radius, false},
      {3, "analytic trapped-fraction curve", tf_curve, false},
      {4, "numeric below analytic", numeric_ordering, false},
      {5, "integral mode reproduces closed form", oracle_equivalence, false},
      {6, "solver properties", solver_properties, false},
      {7, "protocol null test", null_test, false},
      {8, "frozen-dynamics equivalence", frozen_dynamics, false},
      {9, "kernel angular averages", kernel_averages, false},
      {10, "grid convergence 256^2 -> 512^2", grid_convergence, true},
  };

  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only ? c.id != *only : c.slow && !slow) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s: %s [%s] (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion selected\n");
    return 2;
  }
  std::printf("%d of %d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
