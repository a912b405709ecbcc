#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "oinl/constants.hpp"
#include "oinl/errors.hpp"
#include "oinl/grid.hpp"
#include "oinl/physical_params.hpp"
#include "oinl/quadrature.hpp"

namespace oinl {

// Thomas-Fermi ground state of the transverse problem, 2D-reduced over L_z.
struct TFGroundState {
  double radius = 0.0;        // R_TF, m
  double peak_density = 0.0;  // n(0), 1/m^2
  double mu = 0.0;            // J
  double omega_perp = 0.0;
  double mass = 0.0;
  double atom_number = 0.0;

  // n(r) = max(0, mu - M omega^2 r^2 / 2) / g_2D, normalized to N.
  double density(double r) const {
    const double u = 1.0 - (r * r) / (radius * radius);
    return u > 0.0 ? peak_density * u : 0.0;
  }

  // Analytic integral of the inverted parabola, pi n0 R^2 / 2.
  double integrated_number() const { return 0.5 * pi * peak_density * radius * radius; }
};

inline TFGroundState tf_ground_state(const AtomSpecies& species, double omega_perp, double atom_number,
                                     double axial_length) {
  const double a = species.a_symmetric + species.a_antisymmetric;
  if (!(a > 0.0)) throw DomainError("tf_ground_state: a_s + a_a must be positive");
  if (!(omega_perp > 0.0) || !(atom_number > 0.0) || !(axial_length > 0.0))
    throw DomainError("tf_ground_state: omega_perp, N and L_z must be positive");
  TFGroundState tf;
  tf.omega_perp = omega_perp;
  tf.mass = species.mass;
  tf.atom_number = atom_number;
  tf.radius = 2.0 * std::sqrt(hbar / (species.mass * omega_perp)) * std::pow(a * atom_number / axial_length, 0.25);
  tf.mu = 0.5 * species.mass * omega_perp * omega_perp * tf.radius * tf.radius;
  const double g2d = 4.0 * pi * hbar * hbar * a / (species.mass * axial_length);
  tf.peak_density = tf.mu / g2d;
  return tf;
}

// Peak OINL phase of the Thomas-Fermi cloud:
// eps = r gamma T (lambda_0/2pi)^3 (M omega / 2 hbar) sqrt(N / ((a_s + a_a) L_z)),
// with r = |Omega_G^0|^2 / Delta_G^2.
inline double epsilon_parameter(double intensity_ratio, double imprint_time, const AtomSpecies& species,
                                double omega_perp, double atom_number, double axial_length) {
  if (!(intensity_ratio >= 0.0) || !(imprint_time >= 0.0))
    throw DomainError("epsilon_parameter: ratio and T must be nonnegative");
  const double lambda_bar = species.wavelength / two_pi;
  const double a = species.a_symmetric + species.a_antisymmetric;
  return intensity_ratio * species.gamma * imprint_time * lambda_bar * lambda_bar * lambda_bar *
         (species.mass * omega_perp / (2.0 * hbar)) * std::sqrt(atom_number / (a * axial_length));
}

// N_-/N = 1/2 - sin(eps)/eps - (cos(eps) - 1)/eps^2 for a Thomas-Fermi cloud.
// Below eps = 0.5 the equivalent series sum_n (-1)^(n+1) eps^(2n) / ((2n)! (2n+2))
// is used; the closed form cancels catastrophically as eps -> 0.
inline double trapped_fraction_tf(double eps) {
  if (!(eps >= 0.0)) throw DomainError("trapped_fraction_tf: eps must be nonnegative");
  if (eps < 0.5) {
    const double e2 = eps * eps;
    double term = e2 / 2.0;  // eps^(2n) / (2n)!
    double sum = 0.0;
    for (int n = 1; n <= 12; ++n) {
      sum += ((n % 2 == 1) ? 1.0 : -1.0) * term / (2.0 * n + 2.0);
      term *= e2 / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
    }
    return sum;
  }
  return 0.5 - std::sin(eps) / eps - (std::cos(eps) - 1.0) / (eps * eps);
}

struct TrappedCount {
  double trapped = 0.0;   // N_-
  double total = 0.0;     // N
  double fraction = 0.0;  // N_- / N
  std::optional<std::string> warning;
};

// sin^2 of the interferometer half-angle.  The |+> component acquires
// exp(i(phi_OINL - phi_V)) during the imprint, so after the second pulse
// |psi_-|^2 = |psi_0|^2 sin^2((phi_OINL + 2 phi_s - phi_V) / 2).
inline double interference_factor(double phi_oinl, double phi_s, double phi_v) {
  const double s = std::sin(0.5 * (phi_oinl + 2.0 * phi_s - phi_v));
  return s * s;
}

// N_- = int n(x) sin^2((phi_OINL + 2 phi_s - phi_V)/2) dx on the grid.  When the
// density does not integrate to `expected_atoms` (relative 1e-6) a warning is
// attached, and the density is rescaled first if `renormalize` is set.
inline TrappedCount trapped_fraction_integral(const RealField2D& density, const RealField2D& phi_oinl, double phi_s,
                                              double phi_v, double expected_atoms, bool renormalize = false) {
  require_same_grid(density, phi_oinl, "phase field");
  if (!(expected_atoms > 0.0)) throw DomainError("trapped_fraction_integral: atom number must be positive");
  const double area = density.grid().cell_area();
  double total = 0.0, trapped = 0.0;
  for (std::size_t k = 0; k < density.size(); ++k) {
    total += density[k];
    trapped += density[k] * interference_factor(phi_oinl[k], phi_s, phi_v);
  }
  total *= area;
  trapped *= area;

  TrappedCount out;
  if (std::abs(total - expected_atoms) > 1e-6 * expected_atoms) {
    out.warning = "density integrates to " + std::to_string(total) + " instead of " + std::to_string(expected_atoms);
    if (renormalize && total > 0.0) {
      trapped *= expected_atoms / total;
      total = expected_atoms;
    }
  }
  out.trapped = trapped;
  out.total = total;
  out.fraction = total > 0.0 ? trapped / total : 0.0;
  return out;
}

// Same integral for the Thomas-Fermi profile, done radially with Gauss-Legendre
// quadrature.  The OINL phase is eps (1 - r^2/R^2) times the gaussian intensity
// exp(-2 r^2 / w^2) when `waist` is given, or constant intensity otherwise.
inline TrappedCount trapped_fraction_integral(const TFGroundState& tf, double eps, double phi_s, double phi_v,
                                              std::optional<double> waist = {}, std::size_t nodes = 128) {
  const auto rule = gauss_legendre(nodes);
  const double r_tf = tf.radius;
  const auto phase = [&](double r) {
    const double profile = waist ? std::exp(-2.0 * r * r / (*waist * *waist)) : 1.0;
    return eps * (1.0 - r * r / (r_tf * r_tf)) * profile;
  };
  const double trapped = integrate(rule, 0.0, r_tf, [&](double r) {
    return two_pi * r * tf.density(r) * interference_factor(phase(r), phi_s, phi_v);
  });
  TrappedCount out;
  out.total = tf.integrated_number();
  out.trapped = trapped;
  out.fraction = trapped / out.total;
  return out;
}

struct PhaseFields {
  RealField2D oinl;  // phi_OINL(x) >= 0
  double potential = 0.0;  // phi_V
};

// phi_OINL = -kappa_opt,+(x) |psi_+|^2 T with |psi_+|^2 = |psi_0|^2 / 2, and
// phi_V = delta_V T, all in oscillator units (hbar = 1).
inline PhaseFields phase_fields(const RealField2D& ground_density, const RealField2D& oinl_coupling, double delta_v,
                                double imprint_time) {
  require_same_grid(ground_density, oinl_coupling, "optical coupling");
  PhaseFields out{RealField2D(ground_density.grid()), delta_v * imprint_time};
  for (std::size_t k = 0; k < ground_density.size(); ++k)
    out.oinl[k] = -oinl_coupling[k] * 0.5 * ground_density[k] * imprint_time;
  return out;
}

// phi_V = delta_V T / hbar in SI units.
inline double potential_phase(double delta_v, double imprint_time) { return delta_v * imprint_time / hbar; }

// TF density sampled on a grid whose coordinates are in units of `length_unit`
// (m).  Returned density is scaled consistently: n_grid = n_SI * length_unit^2.
inline RealField2D sample_tf_density(const TFGroundState& tf, const Grid2D& grid, double length_unit) {
  return RealField2D::sample(grid, [&](double x, double y) {
    return tf.density(std::hypot(x, y) * length_unit) * length_unit * length_unit;
  });
}

}  // namespace oinl
