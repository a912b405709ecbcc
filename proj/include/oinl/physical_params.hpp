#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "oinl/constants.hpp"
#include "oinl/errors.hpp"
#include "oinl/grid.hpp"

namespace oinl {

// Atomic constants.  `gamma` is the spontaneous emission rate taken as an
// angular rate (s^-1); both the OINL coefficient and the decoherence budget
// scale linearly with it.
struct AtomSpecies {
  double mass = 0.0;             // kg
  double a_symmetric = 0.0;      // m
  double a_antisymmetric = 0.0;  // m
  double wavelength = 0.0;       // transition wavelength lambda_0, m
  double gamma = 0.0;            // 1/s

  void validate() const {
    if (!(mass > 0.0)) throw DomainError("AtomSpecies: mass must be positive");
    if (!(wavelength > 0.0)) throw DomainError("AtomSpecies: transition wavelength must be positive");
    if (!(gamma > 0.0)) throw DomainError("AtomSpecies: spontaneous rate gamma must be positive");
    if (!(a_symmetric + a_antisymmetric > 0.0))
      throw DomainError("AtomSpecies: a_s + a_a must be positive for a Thomas-Fermi ground state");
  }

  // kappa_{s,a} = 4 pi hbar^2 a_{s,a} / M (3D, J m^3).
  double kappa_symmetric() const { return 4.0 * pi * hbar * hbar * a_symmetric / mass; }
  double kappa_antisymmetric() const { return 4.0 * pi * hbar * hbar * a_antisymmetric / mass; }

  // 87Rb values used throughout the estimates.
  static AtomSpecies rubidium87() {
    return {.mass = 1.45e-25, .a_symmetric = 5.4e-9, .a_antisymmetric = -0.05e-9, .wavelength = 780e-9,
            .gamma = 3.8e7};
  }
};

enum class BeamProfile { doughnut, gaussian };

inline std::string to_string(BeamProfile p) { return p == BeamProfile::doughnut ? "doughnut" : "gaussian"; }

inline constexpr double default_low_intensity_threshold = 0.01;
inline constexpr double default_budget_threshold = 0.5;
// Above this intensity ratio the decoherence condition T gamma_dec << 1 is no
// longer met for a 10 us imprint.
inline constexpr double recommended_max_intensity_ratio = 0.001;

struct BeamConfig {
  BeamProfile profile = BeamProfile::gaussian;
  complex peak_rabi{};     // Omega^0, 1/s
  double detuning = 0.0;   // Delta, angular, 1/s
  double waist = 0.0;      // w, m
  double wavenumber = 0.0; // k_L, 1/m (informational)

  double intensity_ratio() const { return std::norm(peak_rabi) / (detuning * detuning); }

  void validate() const {
    if (!(waist > 0.0)) throw DomainError(to_string(profile) + " beam: waist must be positive");
    if (detuning == 0.0 || !std::isfinite(detuning))
      throw DomainError(to_string(profile) + " beam: detuning must be finite and nonzero");
    if (profile == BeamProfile::doughnut && detuning < 0.0)
      throw DomainError("doughnut beam: detuning must be positive (blue) to trap");
    if (profile == BeamProfile::gaussian && detuning > 0.0)
      throw DomainError("gaussian beam: detuning must be negative (red) to trap");
  }

  // Returns a message when |Omega^0|^2/Delta^2 is not small.
  std::optional<std::string> low_intensity_warning(double threshold = default_low_intensity_threshold) const {
    const double r = intensity_ratio();
    if (r <= threshold) return std::nullopt;
    return to_string(profile) + " beam: intensity ratio " + std::to_string(r) + " exceeds low-intensity threshold " +
           std::to_string(threshold);
  }
};

struct ProtocolConfig {
  double atom_number = 0.0;   // N
  double axial_length = 0.0;  // L_z, m
  double imprint_time = 0.0;  // T, s
  double pulse_time = 0.0;    // T_pi/2, s; bookkeeping only, pulses are instantaneous
  std::optional<double> stokes_phase;  // rad; empty means compensate delta_V automatically

  void validate() const {
    if (!(atom_number > 0.0)) throw DomainError("ProtocolConfig: atom number must be positive");
    if (!(axial_length > 0.0)) throw DomainError("ProtocolConfig: axial length must be positive");
    if (!(imprint_time >= 0.0)) throw DomainError("ProtocolConfig: imprint time must be nonnegative");
    if (!(pulse_time >= 0.0)) throw DomainError("ProtocolConfig: pulse time must be nonnegative");
  }
};

struct DerivedTrap {
  double omega_perp = 0.0;  // rad/s
  double delta_v = 0.0;     // J
  double mu = 0.0;          // J, filled by the ground-state calculation
};

// Omega(x, y) in the transverse plane.  Grid coordinates are multiplied by
// `length_unit` (m) to obtain physical positions.  The axial factor
// exp(i k_L z) is a global phase in the plane and is not included.
inline ComplexField2D rabi_field(const BeamConfig& beam, const Grid2D& grid, double length_unit = 1.0) {
  const double w = beam.waist;
  if (!(w > 0.0)) throw DomainError("rabi_field: waist must be positive");
  switch (beam.profile) {
    case BeamProfile::doughnut:
      return ComplexField2D::sample(grid, [&](double xs, double ys) {
        const double x = xs * length_unit, y = ys * length_unit;
        return beam.peak_rabi * std::exp(-(x * x + y * y) / (w * w)) * complex(x, y) / w;
      });
    case BeamProfile::gaussian:
      return ComplexField2D::sample(grid, [&](double xs, double ys) {
        const double x = xs * length_unit, y = ys * length_unit;
        return beam.peak_rabi * std::exp(-(x * x + y * y) / (w * w));
      });
  }
  throw DomainError("rabi_field: unknown beam profile");
}

// V = hbar |Omega|^2 / Delta, in J.
inline RealField2D optical_potential(const ComplexField2D& rabi, double detuning) {
  if (detuning == 0.0) throw DomainError("optical_potential: detuning must be nonzero");
  RealField2D v(rabi.grid());
  for (std::size_t k = 0; k < rabi.size(); ++k) v[k] = hbar * std::norm(rabi[k]) / detuning;
  return v;
}

// Peak OINL coefficient per unit intensity ratio:
// kappa_opt = -2 pi hbar gamma (|Omega|^2/Delta^2) (lambda_0 / 2 pi)^3, J m^3.
inline double oinl_coefficient(double intensity_ratio, const AtomSpecies& species) {
  const double reduced_wavelength = species.wavelength / two_pi;
  return -two_pi * hbar * species.gamma * intensity_ratio * reduced_wavelength * reduced_wavelength *
         reduced_wavelength;
}

inline RealField2D oinl_coefficient(const ComplexField2D& rabi, double detuning, const AtomSpecies& species) {
  if (detuning == 0.0) throw DomainError("oinl_coefficient: detuning must be nonzero");
  RealField2D kappa(rabi.grid());
  const double d2 = detuning * detuning;
  for (std::size_t k = 0; k < rabi.size(); ++k) kappa[k] = oinl_coefficient(std::norm(rabi[k]) / d2, species);
  return kappa;
}

// M omega^2 / 2 = hbar |Omega^0|^2 / (w^2 Delta) for the doughnut beam.
inline double trap_frequency_from_doughnut(const BeamConfig& beam, double mass) {
  if (beam.profile != BeamProfile::doughnut) throw DomainError("trap frequency requires a doughnut beam");
  if (!(beam.detuning > 0.0)) throw DomainError("doughnut beam: detuning must be positive");
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  return std::sqrt(2.0 * hbar * std::norm(beam.peak_rabi) / (mass * beam.waist * beam.waist * beam.detuning));
}

struct GaussianMatch {
  BeamConfig beam;
  double delta_v = 0.0;  // J, hbar |Omega_G^0|^2 / Delta_G = -M omega^2 w^2 / 4
};

// Gaussian beam producing the same harmonic curvature as a trap of frequency
// omega_perp: |Omega_G^0|^2 = -M omega^2 w^2 Delta_G / (4 hbar).
inline GaussianMatch match_gaussian_to_trap(double omega_perp, double waist, double detuning, double mass) {
  if (!(detuning < 0.0)) throw DomainError("gaussian beam: detuning must be negative to trap");
  if (!(waist > 0.0)) throw DomainError("gaussian beam: waist must be positive");
  const double rabi_sq = -mass * omega_perp * omega_perp * waist * waist * detuning / (4.0 * hbar);
  GaussianMatch match;
  match.beam = {.profile = BeamProfile::gaussian, .peak_rabi = complex(std::sqrt(rabi_sq), 0.0),
                .detuning = detuning, .waist = waist, .wavenumber = 0.0};
  match.delta_v = hbar * rabi_sq / detuning;
  return match;
}

// Matched gaussian expressed through its intensity ratio r = |Omega_G^0|^2/Delta_G^2
// instead of its detuning: Delta_G = delta_V / (hbar r).  Requires r > 0.
inline GaussianMatch match_gaussian_by_ratio(double omega_perp, double waist, double intensity_ratio, double mass) {
  if (!(intensity_ratio > 0.0)) throw DomainError("gaussian beam: intensity ratio must be positive");
  const double delta_v = -mass * omega_perp * omega_perp * waist * waist / 4.0;
  return match_gaussian_to_trap(omega_perp, waist, delta_v / (hbar * intensity_ratio), mass);
}

struct DecoherenceBudget {
  double value = 0.0;  // gamma_dec * T
  double threshold = default_budget_threshold;
  bool exceeded = false;
};

// gamma_dec T with gamma_dec = gamma |Omega^0|^2 / Delta^2.
inline DecoherenceBudget decoherence_budget(double intensity_ratio, double imprint_time, double gamma,
                                            double threshold = default_budget_threshold) {
  DecoherenceBudget b;
  b.value = gamma * intensity_ratio * imprint_time;
  b.threshold = threshold;
  b.exceeded = b.value > threshold;
  return b;
}

inline DecoherenceBudget decoherence_budget(const BeamConfig& beam, double imprint_time, double gamma,
                                            double threshold = default_budget_threshold) {
  if (beam.detuning == 0.0) throw DomainError("decoherence_budget: detuning must be nonzero");
  return decoherence_budget(beam.intensity_ratio(), imprint_time, gamma, threshold);
}

// Solver inputs in harmonic-oscillator units: length a_ho = sqrt(hbar/M omega),
// time 1/omega, energy hbar omega.  The condensate is homogeneous over L_z, so
// psi is normalized to N in the plane and every 3D coupling kappa becomes
// kappa / L_z.  With psi_scaled = a_ho psi the 2D coupling reads
//   g = kappa / (L_z hbar omega a_ho^2),
// e.g. g_self = 4 pi (a_s + a_a) / L_z.
struct ScaledSystem {
  double omega_perp = 0.0;   // rad/s
  double length_unit = 0.0;  // m
  double time_unit = 0.0;    // s
  double energy_unit = 0.0;  // J

  double atom_number = 0.0;
  double g_self = 0.0;   // (kappa_s + kappa_a), scaled
  double g_cross = 0.0;  // (kappa_s - kappa_a), scaled
  double waist = 0.0;
  double doughnut_strength = 0.0;   // hbar |Omega_do^0|^2 / Delta_do, scaled
  double delta_v = 0.0;             // matched-gaussian offset, scaled
  double oinl_per_ratio = 0.0;      // kappa_opt(peak) / intensity ratio, 2D-reduced and scaled
  double imprint_time = 0.0;

  double length_to_si(double v) const { return v * length_unit; }
  double length_from_si(double v) const { return v / length_unit; }
  double time_to_si(double v) const { return v * time_unit; }
  double time_from_si(double v) const { return v / time_unit; }
  double energy_to_si(double v) const { return v * energy_unit; }
  double energy_from_si(double v) const { return v / energy_unit; }
  // 3D coupling (J m^3) -> scaled 2D coupling, and back.
  double coupling_from_si(double kappa, double axial_length) const {
    return kappa / (axial_length * energy_unit * length_unit * length_unit);
  }
  double coupling_to_si(double g, double axial_length) const {
    return g * axial_length * energy_unit * length_unit * length_unit;
  }
};

inline ScaledSystem scale_to_dimensionless(const AtomSpecies& species, const BeamConfig& doughnut,
                                           const ProtocolConfig& protocol, std::optional<double> omega_perp = {}) {
  species.validate();
  protocol.validate();
  const double omega = omega_perp ? *omega_perp : trap_frequency_from_doughnut(doughnut, species.mass);
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("scale_to_dimensionless: trap frequency missing");

  ScaledSystem s;
  s.omega_perp = omega;
  s.length_unit = std::sqrt(hbar / (species.mass * omega));
  s.time_unit = 1.0 / omega;
  s.energy_unit = hbar * omega;
  s.atom_number = protocol.atom_number;
  const double lz = protocol.axial_length;
  s.g_self = s.coupling_from_si(species.kappa_symmetric() + species.kappa_antisymmetric(), lz);
  s.g_cross = s.coupling_from_si(species.kappa_symmetric() - species.kappa_antisymmetric(), lz);
  s.waist = s.length_from_si(doughnut.waist);
  s.doughnut_strength =
      doughnut.detuning != 0.0 ? s.energy_from_si(hbar * std::norm(doughnut.peak_rabi) / doughnut.detuning) : 0.0;
  s.delta_v = s.energy_from_si(-species.mass * omega * omega * doughnut.waist * doughnut.waist / 4.0);
  s.oinl_per_ratio = s.coupling_from_si(oinl_coefficient(1.0, species), lz);
  s.imprint_time = s.time_from_si(protocol.imprint_time);
  return s;
}

// Scaled potential fields used by the solver.

inline RealField2D harmonic_potential(const Grid2D& grid) {
  return RealField2D::sample(grid, [](double x, double y) { return 0.5 * (x * x + y * y); });
}

// Full doughnut potential V_do = (hbar |Omega^0|^2/Delta) (r^2/w^2) exp(-2 r^2/w^2).
inline RealField2D doughnut_potential(const ScaledSystem& s, const Grid2D& grid) {
  const double w2 = s.waist * s.waist;
  return RealField2D::sample(grid, [&](double x, double y) {
    const double r2 = x * x + y * y;
    return s.doughnut_strength * r2 / w2 * std::exp(-2.0 * r2 / w2);
  });
}

// Full matched gaussian potential V_G = delta_V exp(-2 r^2/w^2).  It does not
// depend on the intensity ratio once the trap is matched.
inline RealField2D gaussian_potential(const ScaledSystem& s, const Grid2D& grid) {
  const double w2 = s.waist * s.waist;
  return RealField2D::sample(
      grid, [&](double x, double y) { return s.delta_v * std::exp(-2.0 * (x * x + y * y) / w2); });
}

// Scaled 2D OINL coupling of the matched gaussian at intensity ratio r,
// optionally with the beam profile flattened to its peak value.
inline RealField2D gaussian_oinl_coupling(const ScaledSystem& s, const Grid2D& grid, double intensity_ratio,
                                          bool full_profile = true) {
  const double w2 = s.waist * s.waist;
  const double peak = s.oinl_per_ratio * intensity_ratio;
  return RealField2D::sample(grid, [&](double x, double y) {
    return full_profile ? peak * std::exp(-2.0 * (x * x + y * y) / w2) : peak;
  });
}

}  // namespace oinl
