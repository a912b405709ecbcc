#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "oinl/analytics.hpp"
#include "oinl/errors.hpp"
#include "oinl/gpe_solver.hpp"
#include "oinl/grid.hpp"
#include "oinl/physical_params.hpp"

namespace oinl {

// Fidelity of the N_- calculation.
enum class Mode {
  tf_analytic,            // closed form on the Thomas-Fermi profile
  integral_exact_ground,  // N_- integral on the imaginary-time ground state
  full_numeric,           // pulse, split-step imprint, pulse
};

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::tf_analytic: return "tf";
    case Mode::integral_exact_ground: return "integral";
    case Mode::full_numeric: return "numeric";
  }
  return "?";
}

inline std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "tf" || s == "tf_analytic") return Mode::tf_analytic;
  if (s == "integral" || s == "integral_exact_ground") return Mode::integral_exact_ground;
  if (s == "numeric" || s == "full_numeric") return Mode::full_numeric;
  return std::nullopt;
}

enum class InitialGuess { thomas_fermi, gaussian, noise };
enum class GroundSource { numeric, thomas_fermi };

// Grid and solver choices.  Box length and time steps are in oscillator units.
struct NumericsConfig {
  std::size_t grid_points = 256;  // per side
  double box = 24.0;              // a_ho per side
  SolverSettings solver;
  InitialGuess initial_guess = InitialGuess::thomas_fermi;
  std::uint64_t seed = 0;
  // Integral mode: keep exp(-2 r^2/w^2) in kappa_opt instead of its peak value.
  bool integral_full_profile = true;
  GroundSource integral_ground = GroundSource::numeric;
  bool oinl_enabled = true;
  double low_intensity_threshold = default_low_intensity_threshold;
  double budget_threshold = default_budget_threshold;

  Grid2D make_grid() const { return Grid2D(grid_points, grid_points, box, box); }
};

struct ExperimentConfig {
  AtomSpecies species;
  BeamConfig doughnut;
  ProtocolConfig protocol;
  NumericsConfig numerics;

  void validate() const {
    species.validate();
    if (doughnut.profile != BeamProfile::doughnut) throw DomainError("trap beam must have the doughnut profile");
    doughnut.validate();
    protocol.validate();
    numerics.solver.validate();
  }

  // Paper operating point: 87Rb, N = 1e5, L_z = 20 um, T = 10 us.
  static ExperimentConfig paper_defaults() {
    ExperimentConfig c;
    c.species = AtomSpecies::rubidium87();
    c.doughnut = {.profile = BeamProfile::doughnut, .peak_rabi = complex(3.15e10, 0.0), .detuning = 1.1e15,
                  .waist = 10e-6, .wavenumber = two_pi / 780e-9};
    c.protocol = {.atom_number = 1e5, .axial_length = 20e-6, .imprint_time = 10e-6, .pulse_time = 0.0,
                  .stokes_phase = std::nullopt};
    return c;
  }
};

struct InterferometerResult {
  Mode mode = Mode::tf_analytic;
  double intensity_ratio = 0.0;
  double trapped = 0.0;   // N_-
  double fraction = 0.0;  // N_- / N
  double epsilon = 0.0;
  double phi_v = 0.0;
  double phi_s = 0.0;
  DecoherenceBudget budget;
  double norm_drift = 0.0;  // |N_total(end) - N| / N, full numeric only
  std::size_t steps = 0;
  std::size_t ground_iterations = 0;
  double mu = std::numeric_limits<double>::quiet_NaN();  // oscillator units, numeric ground states only
  std::vector<std::string> warnings;
};

// Raman pulse U on (psi_-, psi_+):
//   psi_-' = (e^{-i phi_s} psi_- - psi_+) / sqrt 2
//   psi_+' = (psi_- + e^{i phi_s} psi_+) / sqrt 2
inline TwoComponentState raman_apply(TwoComponentState s, double phi_s) {
  require_same_grid(s.minus, s.plus, "raman pulse");
  const complex em = std::polar(1.0, -phi_s), ep = std::polar(1.0, phi_s);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 0; k < s.minus.size(); ++k) {
    const complex m = s.minus[k], p = s.plus[k];
    s.minus[k] = r * (em * m - p);
    s.plus[k] = r * (m + ep * p);
  }
  return s;
}

// U^dagger.
inline TwoComponentState raman_apply_adjoint(TwoComponentState s, double phi_s) {
  require_same_grid(s.minus, s.plus, "raman pulse");
  const complex em = std::polar(1.0, -phi_s), ep = std::polar(1.0, phi_s);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 0; k < s.minus.size(); ++k) {
    const complex m = s.minus[k], p = s.plus[k];
    s.minus[k] = r * (ep * m + p);
    s.plus[k] = r * (-m + em * p);
  }
  return s;
}

// Stokes phase that cancels the delta_V imprint: phi_s = phi_V / 2 = delta_V T / (2 hbar).
inline double compensation_phase(double delta_v, double imprint_time) {
  return 0.5 * potential_phase(delta_v, imprint_time);
}

// Frozen-motion imprint in oscillator units.  Both components pick up
// exp(-i mu T); psi_+ additionally gets exp(i(phi_OINL - phi_V)) with
// phi_OINL = -kappa_opt(x) |psi_+(x)|^2 T and phi_V = delta_V T.
inline TwoComponentState imprint_analytic(TwoComponentState s, const RealField2D& oinl_coupling, double delta_v,
                                          double imprint_time, double mu = 0.0) {
  require_same_grid(s.plus, oinl_coupling, "optical coupling");
  const complex common = std::polar(1.0, -mu * imprint_time);
  const double phi_v = delta_v * imprint_time;
  for (std::size_t k = 0; k < s.plus.size(); ++k) {
    const double phi_oinl = -oinl_coupling[k] * std::norm(s.plus[k]) * imprint_time;
    s.minus[k] *= common;
    s.plus[k] *= common * std::polar(1.0, phi_oinl - phi_v);
  }
  s.time += imprint_time;
  return s;
}

// Hamiltonian of the imprint stage: doughnut potential without OINL on |->,
// matched gaussian potential plus its OINL on |+>, all collisional terms.
inline TwoComponentHamiltonian imprint_hamiltonian(const ScaledSystem& sys, const Grid2D& grid, double intensity_ratio,
                                                   bool oinl_enabled = true) {
  TwoComponentHamiltonian h;
  h.potential_minus = doughnut_potential(sys, grid);
  h.potential_plus = gaussian_potential(sys, grid);
  if (oinl_enabled) h.oinl_plus = gaussian_oinl_coupling(sys, grid, intensity_ratio, true);
  h.g_self = sys.g_self;
  h.g_cross = sys.g_cross;
  return h;
}

// Ground state in |-> used by the given mode: the harmonic trap for the
// integral mode, the full doughnut potential for the full numeric mode.
inline GroundState prepare_ground_state(const ExperimentConfig& config, Mode mode) {
  config.validate();
  const auto sys = scale_to_dimensionless(config.species, config.doughnut, config.protocol);
  const Grid2D grid = config.numerics.make_grid();
  const RealField2D potential =
      mode == Mode::full_numeric ? doughnut_potential(sys, grid) : harmonic_potential(grid);
  const double n = sys.atom_number;
  ComplexField2D guess;
  switch (config.numerics.initial_guess) {
    case InitialGuess::thomas_fermi: guess = thomas_fermi_guess(grid, potential, sys.g_self, n); break;
    case InitialGuess::gaussian: guess = gaussian_guess(grid, n); break;
    case InitialGuess::noise: guess = noise_guess(grid, n, config.numerics.seed); break;
  }
  SplitStepSolver solver(grid);
  return solver.ground_state_imaginary(potential, sys.g_self, n, config.numerics.solver, std::move(guess));
}

using StepObserver = std::function<void(const TwoComponentState&)>;

// Runs the pulse / imprint / pulse sequence at one gaussian intensity ratio.
// `ground` may carry a precomputed ground state from prepare_ground_state for
// the same config and mode; it is ignored by the tf mode.
inline InterferometerResult run_interferometer(const ExperimentConfig& config, double intensity_ratio, Mode mode,
                                               const GroundState* ground = nullptr,
                                               const StepObserver& observer = {}) {
  config.validate();
  if (!(intensity_ratio >= 0.0) || !std::isfinite(intensity_ratio))
    throw DomainError("intensity ratio must be finite and nonnegative");
  const auto& species = config.species;
  const auto& protocol = config.protocol;
  const auto& numerics = config.numerics;
  const double omega = trap_frequency_from_doughnut(config.doughnut, species.mass);
  const auto sys = scale_to_dimensionless(species, config.doughnut, protocol, omega);
  const double effective_ratio = numerics.oinl_enabled ? intensity_ratio : 0.0;

  InterferometerResult res;
  res.mode = mode;
  res.intensity_ratio = intensity_ratio;
  res.phi_v = sys.delta_v * sys.imprint_time;
  const bool compensated = !protocol.stokes_phase.has_value();
  res.phi_s = compensated ? 0.5 * res.phi_v : *protocol.stokes_phase;
  res.budget = decoherence_budget(intensity_ratio, protocol.imprint_time, species.gamma, numerics.budget_threshold);
  res.epsilon = epsilon_parameter(effective_ratio, protocol.imprint_time, species, omega, protocol.atom_number,
                                  protocol.axial_length);

  if (res.budget.exceeded)
    res.warnings.push_back("decoherence budget gamma_dec T = " + std::to_string(res.budget.value) +
                           " exceeds " + std::to_string(res.budget.threshold));
  if (intensity_ratio > recommended_max_intensity_ratio)
    res.warnings.push_back("intensity ratio above the operating limit of about 0.001");
  if (intensity_ratio > numerics.low_intensity_threshold)
    res.warnings.push_back("gaussian beam outside the low-intensity regime");
  if (auto w = config.doughnut.low_intensity_warning(numerics.low_intensity_threshold)) res.warnings.push_back(*w);

  const double n_atoms = sys.atom_number;
  switch (mode) {
    case Mode::tf_analytic: {
      const auto tf = tf_ground_state(species, omega, protocol.atom_number, protocol.axial_length);
      if (compensated) {
        res.fraction = trapped_fraction_tf(res.epsilon);
      } else {
        res.fraction = trapped_fraction_integral(tf, res.epsilon, res.phi_s, res.phi_v).fraction;
      }
      res.trapped = res.fraction * protocol.atom_number;
      return res;
    }
    case Mode::integral_exact_ground: {
      const Grid2D grid = numerics.make_grid();
      RealField2D n0;
      if (numerics.integral_ground == GroundSource::thomas_fermi) {
        const auto tf = tf_ground_state(species, omega, protocol.atom_number, protocol.axial_length);
        n0 = sample_tf_density(tf, grid, sys.length_unit);
      } else {
        GroundState local;
        if (ground == nullptr) {
          local = prepare_ground_state(config, mode);
          ground = &local;
        }
        n0 = density(ground->psi);
        res.ground_iterations = ground->iterations;
        res.mu = ground->mu;
      }
      const auto kappa = gaussian_oinl_coupling(sys, grid, effective_ratio, numerics.integral_full_profile);
      const auto phases = phase_fields(n0, kappa, sys.delta_v, sys.imprint_time);
      const auto count = trapped_fraction_integral(n0, phases.oinl, res.phi_s, phases.potential, n_atoms, true);
      if (count.warning && numerics.integral_ground == GroundSource::numeric) res.warnings.push_back(*count.warning);
      res.fraction = count.fraction;
      res.trapped = res.fraction * protocol.atom_number;
      return res;
    }
    case Mode::full_numeric: {
      GroundState local;
      if (ground == nullptr) {
        local = prepare_ground_state(config, mode);
        ground = &local;
      }
      const Grid2D& grid = ground->psi.grid();
      res.ground_iterations = ground->iterations;
      res.mu = ground->mu;

      TwoComponentState state(ground->psi, ComplexField2D(grid, complex{}));
      state = raman_apply(std::move(state), res.phi_s);
      const auto h = imprint_hamiltonian(sys, grid, effective_ratio, true);
      SplitStepSolver solver(grid);
      const double dt = numerics.solver.dt_real;
      state = solver.propagate(std::move(state), h, sys.imprint_time, dt, observer);
      res.steps = static_cast<std::size_t>(std::ceil(sys.imprint_time / dt - 1e-9));
      state = raman_apply(std::move(state), res.phi_s);

      const double trapped = atom_number(state.minus);
      const double total = trapped + atom_number(state.plus);
      res.norm_drift = std::abs(total - n_atoms) / n_atoms;
      res.fraction = trapped / n_atoms;
      res.trapped = res.fraction * protocol.atom_number;
      return res;
    }
  }
  throw DomainError("unknown mode");
}

}  // namespace oinl
