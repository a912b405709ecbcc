#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "oinl/constants.hpp"
#include "oinl/errors.hpp"
#include "oinl/grid.hpp"
#include "oinl/quadrature.hpp"

namespace oinl {

// Retarded dipole-dipole kernel between two induced dipoles a distance R apart,
// split by its R dependence.  theta is measured from the dipole axis.
//   near         (3 cos^2 theta - 1) / R^3
//   intermediate -i k (3 cos^2 theta - 1) / R^2
//   far          -k^2 (cos^2 theta - 1) / R
//   total        exp(i k R) (near + intermediate + far)
// This is a diagnostic; the GPE uses the local macroscopic OINL coefficient.
struct KernelTerms {
  complex near;
  complex intermediate;
  complex far;
  complex total;
};

inline KernelTerms kernel_eval(double distance, double theta, double wavenumber) {
  if (!(distance > 0.0)) throw DomainError("kernel_eval: distance must be positive");
  const double c2 = std::cos(theta) * std::cos(theta);
  const double angular = 3.0 * c2 - 1.0;
  const double r = distance, k = wavenumber;
  KernelTerms t;
  t.near = angular / (r * r * r);
  t.intermediate = complex(0.0, -k) * angular / (r * r);
  t.far = -k * k * (c2 - 1.0) / r;
  t.total = std::exp(complex(0.0, k * r)) * (t.near + t.intermediate + t.far);
  return t;
}

// Atomic polarizability alpha = -d^2 / (hbar Delta) for dipole moment d (C m).
inline double polarizability(double dipole_moment, double detuning) {
  if (detuning == 0.0) throw DomainError("polarizability: detuning must be nonzero");
  return -dipole_moment * dipole_moment / (hbar * detuning);
}

inline constexpr std::size_t default_angular_nodes = 64;

// int_0^pi (3 cos^2 theta - 1) sin theta dtheta for a homogeneous density;
// vanishes analytically.
inline double near_field_angular_average(double density = 1.0, std::size_t nodes = default_angular_nodes) {
  const auto rule = gauss_legendre(nodes);
  return density * integrate(rule, 0.0, pi, [](double th) {
           const double c = std::cos(th);
           return (3.0 * c * c - 1.0) * std::sin(th);
         });
}

// int_0^pi (cos^2 theta - 1) sin theta dtheta = -4/3.
inline double far_field_angular_average(double density = 1.0, std::size_t nodes = default_angular_nodes) {
  const auto rule = gauss_legendre(nodes);
  return density * integrate(rule, 0.0, pi, [](double th) {
           const double c = std::cos(th);
           return (c * c - 1.0) * std::sin(th);
         });
}

struct KernelTableRow {
  double kr;
  double theta;
  double near;
  double intermediate;
  double far;
};

// Term magnitudes on the product of the given k_L R and theta values.
inline std::vector<KernelTableRow> kernel_table(double wavenumber, const std::vector<double>& kr_values,
                                                const std::vector<double>& thetas) {
  if (!(wavenumber > 0.0)) throw DomainError("kernel_table: wavenumber must be positive");
  std::vector<KernelTableRow> rows;
  rows.reserve(kr_values.size() * thetas.size());
  for (double th : thetas)
    for (double kr : kr_values) {
      const auto t = kernel_eval(kr / wavenumber, th, wavenumber);
      rows.push_back({kr, th, std::abs(t.near), std::abs(t.intermediate), std::abs(t.far)});
    }
  return rows;
}

}  // namespace oinl
