#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "oinl/errors.hpp"
#include "oinl/fft.hpp"
#include "oinl/grid.hpp"
#include "oinl/observables.hpp"

namespace oinl {

struct SolverSettings {
  double dt_real = 1e-3;  // units of 1/omega_perp
  double dt_imag = 1e-3;
  double tol_mu = 1e-9;   // relative change of mu per imaginary-time step
  std::size_t max_iterations = 200000;

  void validate() const {
    if (!(dt_real > 0.0) || !(dt_imag > 0.0)) throw DomainError("SolverSettings: time steps must be positive");
    if (!(tol_mu > 0.0)) throw DomainError("SolverSettings: tol_mu must be positive");
    if (max_iterations == 0) throw DomainError("SolverSettings: max_iterations must be positive");
  }
};

// Right-hand side of the coupled equations, in oscillator units:
//   i d/dt psi_c = [-lap/2 + V_c + (g_self + g_opt,c)|psi_c|^2 + g_cross |psi_other|^2] psi_c
// for c in {-, +}.  Empty optical couplings are treated as zero.
struct TwoComponentHamiltonian {
  RealField2D potential_minus;
  RealField2D potential_plus;
  RealField2D oinl_minus;
  RealField2D oinl_plus;
  double g_self = 0.0;
  double g_cross = 0.0;
  bool kinetic = true;
};

// Total energy of a two-component state under `h`.
inline double two_component_energy(const TwoComponentState& s, const TwoComponentHamiltonian& h, const Fft2D& fft) {
  double e = gp_energy(s.minus, h.potential_minus, h.g_self, h.oinl_minus, fft) +
             gp_energy(s.plus, h.potential_plus, h.g_self, h.oinl_plus, fft);
  if (!h.kinetic) e -= kinetic_energy(s.minus, fft) + kinetic_energy(s.plus, fft);
  double cross = 0.0;
  for (std::size_t k = 0; k < s.minus.size(); ++k) cross += std::norm(s.minus[k]) * std::norm(s.plus[k]);
  return e + h.g_cross * cross * s.grid().cell_area();
}

struct StepRecord {
  double time;
  double norm_minus;
  double norm_plus;
};

struct GroundState {
  ComplexField2D psi;
  double mu = 0.0;
  double energy = 0.0;
  std::size_t iterations = 0;
  std::vector<double> energies;  // energy after each step
};

// Split-step Fourier propagator for one grid.  Not safe to share between
// threads (the kinetic factors are cached per time step); give every
// propagation its own instance.
class SplitStepSolver {
public:
  explicit SplitStepSolver(const Grid2D& grid) : grid_(grid), fft_(grid), k2_(grid) {
    for (std::size_t i = 0; i < grid.nx(); ++i)
      for (std::size_t j = 0; j < grid.ny(); ++j) k2_(i, j) = grid.kx(i) * grid.kx(i) + grid.ky(j) * grid.ky(j);
  }

  const Grid2D& grid() const noexcept { return grid_; }
  const Fft2D& fft() const noexcept { return fft_; }

  // One Strang step: half local step, full kinetic step, half local step.
  // Each local half step uses the densities at its start, cross terms included.
  void step_real(TwoComponentState& s, const TwoComponentHamiltonian& h, double dt) {
    check_inputs(s, h);
    local_half_step(s, h, dt);
    if (h.kinetic) {
      const auto& factor = kinetic_factors(dt);
      kinetic_step(s.minus, factor);
      kinetic_step(s.plus, factor);
    }
    local_half_step(s, h, dt);
    s.time += dt;
    if (!all_finite(s.minus) || !all_finite(s.plus))
      throw NumericalError("non-finite wave function at t = " + std::to_string(s.time));
  }

  // Advances by exactly `duration`; the final step is shortened as needed.
  TwoComponentState propagate(TwoComponentState s, const TwoComponentHamiltonian& h, double duration, double dt,
                              const std::function<void(const TwoComponentState&)>& observer = {}) {
    if (!(duration >= 0.0)) throw DomainError("propagate: duration must be nonnegative");
    if (!(dt > 0.0)) throw DomainError("propagate: dt must be positive");
    if (observer) observer(s);
    const double t_end = s.time + duration;
    const auto steps = static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
    for (std::size_t n = 0; n < steps; ++n) {
      const double h_step = (n + 1 == steps) ? t_end - s.time : dt;
      if (h_step <= 0.0) break;
      step_real(s, h, h_step);
      if (observer) observer(s);
    }
    s.time = t_end;
    return s;
  }

  // Normalized imaginary-time relaxation of a single component in V with
  // contact coupling g.  Stops when |mu_n - mu_{n-1}| < tol_mu |mu_n|.
  GroundState ground_state_imaginary(const RealField2D& potential, double g, double atom_count,
                                     const SolverSettings& settings, ComplexField2D initial) {
    settings.validate();
    require_same_grid(initial, potential, "initial guess");
    if (!(atom_count > 0.0)) throw DomainError("ground state: atom number must be positive");
    check_confining(potential);

    normalize(initial, atom_count);
    ComplexField2D psi = std::move(initial);
    const double dt = settings.dt_imag;
    std::vector<double> kinetic(grid_.size());
    for (std::size_t k = 0; k < kinetic.size(); ++k) kinetic[k] = std::exp(-0.5 * k2_[k] * dt);

    GroundState out;
    double mu_prev = std::numeric_limits<double>::quiet_NaN();
    // The local steps run shifted by the current mu estimate so the norm
    // hardly moves within a step; otherwise the fixed point is off by O(dt).
    double shift = energy_and_mu(psi, potential, g).second;
    for (std::size_t iter = 1; iter <= settings.max_iterations; ++iter) {
      imaginary_local_half_step(psi, potential, g, shift, dt);
      fft_.forward(psi.values());
      for (std::size_t k = 0; k < psi.size(); ++k) psi[k] *= kinetic[k];
      fft_.backward(psi.values());
      imaginary_local_half_step(psi, potential, g, shift, dt);
      normalize(psi, atom_count);

      const auto [energy, mu] = energy_and_mu(psi, potential, g);
      if (!std::isfinite(energy) || !std::isfinite(mu))
        throw NumericalError("imaginary-time relaxation diverged at iteration " + std::to_string(iter));
      out.energies.push_back(energy);
      out.iterations = iter;
      out.energy = energy;
      out.mu = mu;
      shift = mu;
      if (std::abs(mu - mu_prev) < settings.tol_mu * std::abs(mu)) {
        out.psi = std::move(psi);
        return out;
      }
      mu_prev = mu;
    }
    throw NumericalError("imaginary-time relaxation did not converge within " +
                         std::to_string(settings.max_iterations) + " iterations");
  }

  // (E, mu) sharing one transform for the kinetic term.
  std::pair<double, double> energy_and_mu(const ComplexField2D& psi, const RealField2D& potential, double g) const {
    const double kin = kinetic_energy(psi, fft_);
    const auto [pot, inter] = detail::local_integrals(psi, potential, g, RealField2D{});
    const double n = atom_number(psi);
    return {kin + pot + 0.5 * inter, (kin + pot + inter) / n};
  }

  static void normalize(ComplexField2D& psi, double atom_count) {
    const double n = atom_number(psi);
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a state with zero or invalid norm");
    psi *= complex(std::sqrt(atom_count / n), 0.0);
  }

private:
  void check_inputs(const TwoComponentState& s, const TwoComponentHamiltonian& h) const {
    if (!(s.minus.grid() == grid_) || !(s.plus.grid() == grid_)) throw DomainError("state grid differs from solver grid");
    require_same_grid(s.minus, h.potential_minus, "potential_minus");
    require_same_grid(s.minus, h.potential_plus, "potential_plus");
    if (!h.oinl_minus.empty()) require_same_grid(s.minus, h.oinl_minus, "oinl_minus");
    if (!h.oinl_plus.empty()) require_same_grid(s.minus, h.oinl_plus, "oinl_plus");
  }

  // Rejects potentials that do not confine the cloud inside the box: the
  // lowest boundary value must lie above the global minimum.
  void check_confining(const RealField2D& v) const {
    double boundary_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid_.nx(); ++i) {
      boundary_min = std::min({boundary_min, v(i, 0), v(i, grid_.ny() - 1)});
    }
    for (std::size_t j = 0; j < grid_.ny(); ++j) {
      boundary_min = std::min({boundary_min, v(0, j), v(grid_.nx() - 1, j)});
    }
    const double global_min = *std::min_element(v.values().begin(), v.values().end());
    if (!(boundary_min > global_min))
      throw DomainError("ground state: potential does not confine within the box (unbounded below)");
  }

  void local_half_step(TwoComponentState& s, const TwoComponentHamiltonian& h, double dt) const {
    const double tau = 0.5 * dt;
    for (std::size_t k = 0; k < s.minus.size(); ++k) {
      const double nm = std::norm(s.minus[k]);
      const double np = std::norm(s.plus[k]);
      const double gm = h.g_self + (h.oinl_minus.empty() ? 0.0 : h.oinl_minus[k]);
      const double gp = h.g_self + (h.oinl_plus.empty() ? 0.0 : h.oinl_plus[k]);
      const double em = h.potential_minus[k] + gm * nm + h.g_cross * np;
      const double ep = h.potential_plus[k] + gp * np + h.g_cross * nm;
      s.minus[k] *= std::polar(1.0, -em * tau);
      s.plus[k] *= std::polar(1.0, -ep * tau);
    }
  }

  // Exact solution of d|psi|^2/dtau = -2 (V - mu + g |psi|^2) |psi|^2 over dt/2.
  static void imaginary_local_half_step(ComplexField2D& psi, const RealField2D& v, double g, double mu, double dt) {
    const double tau = 0.5 * dt;
    for (std::size_t k = 0; k < psi.size(); ++k) {
      const double a = v[k] - mu;
      const double decay = std::exp(-2.0 * a * tau);
      // (1 - e^{-2 a tau}) / a, finite as a -> 0
      const double growth = std::abs(a * tau) < 1e-12 ? 2.0 * tau : -std::expm1(-2.0 * a * tau) / a;
      const double denom = 1.0 + g * std::norm(psi[k]) * growth;
      if (!(denom > 0.0)) throw NumericalError("imaginary-time step: local density blows up (g < 0 collapse)");
      psi[k] *= std::sqrt(decay / denom);
    }
  }

  const std::vector<complex>& kinetic_factors(double dt) {
    if (dt != cached_dt_ || kinetic_factor_.empty()) {
      kinetic_factor_.resize(grid_.size());
      for (std::size_t k = 0; k < kinetic_factor_.size(); ++k) kinetic_factor_[k] = std::polar(1.0, -0.5 * k2_[k] * dt);
      cached_dt_ = dt;
    }
    return kinetic_factor_;
  }

  void kinetic_step(ComplexField2D& psi, const std::vector<complex>& factor) const {
    fft_.forward(psi.values());
    for (std::size_t k = 0; k < psi.size(); ++k) psi[k] *= factor[k];
    fft_.backward(psi.values());
  }

  Grid2D grid_;
  Fft2D fft_;
  RealField2D k2_;
  std::vector<complex> kinetic_factor_;
  double cached_dt_ = 0.0;
};

// Initial guesses for the imaginary-time relaxation, normalized to atom_count.

inline ComplexField2D gaussian_guess(const Grid2D& grid, double atom_count, double width = 1.0) {
  auto psi = ComplexField2D::sample(
      grid, [&](double x, double y) { return std::exp(-(x * x + y * y) / (2.0 * width * width)); });
  SplitStepSolver::normalize(psi, atom_count);
  return psi;
}

// sqrt(max(0, mu - V)/g) with mu fixed by the norm (bisection).  Falls back to
// a unit gaussian when g <= 0.
inline ComplexField2D thomas_fermi_guess(const Grid2D& grid, const RealField2D& potential, double g,
                                         double atom_count) {
  if (!(g > 0.0)) return gaussian_guess(grid, atom_count);
  const auto [vmin_it, vmax_it] = std::minmax_element(potential.values().begin(), potential.values().end());
  const auto count_at = [&](double mu) {
    double s = 0.0;
    for (double v : potential.values()) s += std::max(0.0, mu - v) / g;
    return s * grid.cell_area();
  };
  double lo = *vmin_it, hi = *vmax_it;
  if (count_at(hi) < atom_count) return gaussian_guess(grid, atom_count);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (count_at(mid) < atom_count ? lo : hi) = mid;
  }
  const double mu = hi;
  auto psi = ComplexField2D::sample(grid, [](double, double) { return 0.0; });
  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = std::sqrt(std::max(0.0, mu - potential[k]) / g);
  SplitStepSolver::normalize(psi, atom_count);
  return psi;
}

// Independent complex uniform noise in [-1, 1]^2 per sample.  The bit
// conversion is spelled out so the field depends only on the seed.
inline ComplexField2D noise_guess(const Grid2D& grid, double atom_count, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  const auto uniform = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  ComplexField2D psi(grid);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double re = uniform();
    const double im = uniform();
    psi[k] = complex(re, im);
  }
  SplitStepSolver::normalize(psi, atom_count);
  return psi;
}

}  // namespace oinl
