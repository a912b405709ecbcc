#pragma once

#include <cmath>
#include <utility>

#include "oinl/fft.hpp"
#include "oinl/grid.hpp"

namespace oinl {

// Riemann sum of |psi|^2 dx dy.
inline double atom_number(const ComplexField2D& psi) {
  double sum = 0.0;
  for (const auto& z : psi.values()) sum += std::norm(z);
  return sum * psi.grid().cell_area();
}

inline double overlap_fidelity(const ComplexField2D& a, const ComplexField2D& b) {
  require_same_grid(a, b, "overlap");
  complex inner{};
  for (std::size_t k = 0; k < a.size(); ++k) inner += std::conj(a[k]) * b[k];
  inner *= a.grid().cell_area();
  return std::norm(inner) / (atom_number(a) * atom_number(b));
}

// (d/dx psi, d/dy psi) by spectral differentiation.  The Nyquist mode is
// zeroed, as usual for odd-order spectral derivatives.
inline std::pair<ComplexField2D, ComplexField2D> spectral_gradient(const ComplexField2D& psi, const Fft2D& fft) {
  const Grid2D& g = psi.grid();
  ComplexField2D spectrum = psi;
  fft.forward(spectrum.values());
  ComplexField2D dx(g), dy(g);
  const complex i_unit{0.0, 1.0};
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double kx = (i == g.nx() / 2) ? 0.0 : g.kx(i);
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const double ky = (j == g.ny() / 2) ? 0.0 : g.ky(j);
      dx(i, j) = i_unit * kx * spectrum(i, j);
      dy(i, j) = i_unit * ky * spectrum(i, j);
    }
  }
  fft.backward(dx.values());
  fft.backward(dy.values());
  return {std::move(dx), std::move(dy)};
}

// Integral of |grad psi|^2 / 2, evaluated in k space via Parseval.
inline double kinetic_energy(const ComplexField2D& psi, const Fft2D& fft) {
  const Grid2D& g = psi.grid();
  ComplexField2D spectrum = psi;
  fft.forward(spectrum.values());
  double sum = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.ny(); ++j) {
      const double k2 = g.kx(i) * g.kx(i) + g.ky(j) * g.ky(j);
      sum += 0.5 * k2 * std::norm(spectrum(i, j));
    }
  return sum * g.cell_area() / static_cast<double>(g.size());
}

namespace detail {
// (potential, interaction) integrals: int V|psi|^2 and int (g + g_opt)|psi|^4.
inline std::pair<double, double> local_integrals(const ComplexField2D& psi, const RealField2D& potential, double g,
                                                 const RealField2D& g_opt) {
  require_same_grid(psi, potential, "potential");
  if (!g_opt.empty()) require_same_grid(psi, g_opt, "optical coupling");
  double pot = 0.0, inter = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double n = std::norm(psi[k]);
    pot += potential[k] * n;
    inter += (g + (g_opt.empty() ? 0.0 : g_opt[k])) * n * n;
  }
  const double area = psi.grid().cell_area();
  return {pot * area, inter * area};
}
}  // namespace detail

// E[psi] = int |grad psi|^2/2 + V|psi|^2 + (g + g_opt)|psi|^4/2 in oscillator
// units (hbar = M = omega = 1).  An empty g_opt field means zero.
inline double gp_energy(const ComplexField2D& psi, const RealField2D& potential, double g, const RealField2D& g_opt,
                        const Fft2D& fft) {
  const auto [pot, inter] = detail::local_integrals(psi, potential, g, g_opt);
  return kinetic_energy(psi, fft) + pot + 0.5 * inter;
}

inline double gp_energy(const ComplexField2D& psi, const RealField2D& potential, double g, const Fft2D& fft) {
  return gp_energy(psi, potential, g, RealField2D{}, fft);
}

// mu = (int |grad psi|^2/2 + V|psi|^2 + (g + g_opt)|psi|^4) / N.
inline double chemical_potential(const ComplexField2D& psi, const RealField2D& potential, double g,
                                 const RealField2D& g_opt, const Fft2D& fft) {
  const double n = atom_number(psi);
  if (!(n > 0.0)) throw DomainError("chemical potential of a state with zero norm");
  const auto [pot, inter] = detail::local_integrals(psi, potential, g, g_opt);
  return (kinetic_energy(psi, fft) + pot + inter) / n;
}

inline double chemical_potential(const ComplexField2D& psi, const RealField2D& potential, double g,
                                 const Fft2D& fft) {
  return chemical_potential(psi, potential, g, RealField2D{}, fft);
}

}  // namespace oinl
