#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oinl/constants.hpp"
#include "oinl/errors.hpp"

namespace oinl {

using complex = std::complex<double>;

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

// Uniform periodic grid on [-Lx/2, Lx/2) x [-Ly/2, Ly/2), dimensionless units.
// The origin is the sample at index (nx/2, ny/2).  Wave-number axes follow the
// usual discrete Fourier ordering: 0, 1, ..., n/2-1, -n/2, ..., -1 (times 2 pi/L).
class Grid2D {
public:
  Grid2D() = default;

  Grid2D(std::size_t nx, std::size_t ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    if (nx == 0 || ny == 0 || !(lx > 0.0) || !(ly > 0.0))
      throw DomainError("grid sizes and box lengths must be positive");
    if (!is_power_of_two(nx) || !is_power_of_two(ny))
      throw DomainError("grid point counts must be powers of two, got " + std::to_string(nx) + "x" +
                        std::to_string(ny));
  }

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return nx_ * ny_; }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double dx() const noexcept { return lx_ / static_cast<double>(nx_); }
  double dy() const noexcept { return ly_ / static_cast<double>(ny_); }
  double cell_area() const noexcept { return dx() * dy(); }

  double x(std::size_t i) const noexcept { return -0.5 * lx_ + static_cast<double>(i) * dx(); }
  double y(std::size_t j) const noexcept { return -0.5 * ly_ + static_cast<double>(j) * dy(); }

  double kx(std::size_t i) const noexcept { return wave_number(i, nx_, lx_); }
  double ky(std::size_t j) const noexcept { return wave_number(j, ny_, ly_); }
  double kx_nyquist() const noexcept { return pi * static_cast<double>(nx_) / lx_; }
  double ky_nyquist() const noexcept { return pi * static_cast<double>(ny_) / ly_; }

  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * ny_ + j; }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
  static double wave_number(std::size_t i, std::size_t n, double length) noexcept {
    const auto signed_index = i < n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
    return two_pi * signed_index / length;
  }

  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  double lx_ = 0.0;
  double ly_ = 0.0;
};

inline Grid2D make_grid(std::size_t nx, std::size_t ny, double lx, double ly) { return Grid2D(nx, ny, lx, ly); }

// Samples of a scalar field on a Grid2D, stored x-major (index = i*ny + j).
template <typename T>
class Field2D {
public:
  using value_type = T;

  Field2D() = default;
  explicit Field2D(const Grid2D& grid, T fill = T{}) : grid_(grid), values_(grid.size(), fill) {}

  // Evaluates f(x, y) at every grid point.
  template <typename F>
  static Field2D sample(const Grid2D& grid, F&& f) {
    Field2D field(grid);
    for (std::size_t i = 0; i < grid.nx(); ++i)
      for (std::size_t j = 0; j < grid.ny(); ++j)
        field.values_[grid.index(i, j)] = static_cast<T>(f(grid.x(i), grid.y(j)));
    return field;
  }

  const Grid2D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  T& operator()(std::size_t i, std::size_t j) noexcept { return values_[grid_.index(i, j)]; }
  const T& operator()(std::size_t i, std::size_t j) const noexcept { return values_[grid_.index(i, j)]; }
  T& operator[](std::size_t k) noexcept { return values_[k]; }
  const T& operator[](std::size_t k) const noexcept { return values_[k]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  T* data() noexcept { return values_.data(); }
  const T* data() const noexcept { return values_.data(); }

  Field2D& operator*=(T factor) {
    for (auto& v : values_) v *= factor;
    return *this;
  }

private:
  Grid2D grid_;
  std::vector<T> values_;
};

using RealField2D = Field2D<double>;
using ComplexField2D = Field2D<complex>;

template <typename A, typename B>
void require_same_grid(const Field2D<A>& a, const Field2D<B>& b, const char* what) {
  if (!(a.grid() == b.grid())) throw DomainError(std::string("grid mismatch: ") + what);
}

inline RealField2D density(const ComplexField2D& psi) {
  RealField2D n(psi.grid());
  for (std::size_t k = 0; k < psi.size(); ++k) n[k] = std::norm(psi[k]);
  return n;
}

inline bool all_finite(const ComplexField2D& psi) {
  return std::all_of(psi.values().begin(), psi.values().end(),
                     [](const complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

// The pair (psi_-, psi_+) evolved jointly.  Both components live on one grid.
struct TwoComponentState {
  ComplexField2D minus;
  ComplexField2D plus;
  double time = 0.0;

  TwoComponentState() = default;
  TwoComponentState(ComplexField2D m, ComplexField2D p, double t = 0.0)
      : minus(std::move(m)), plus(std::move(p)), time(t) {
    require_same_grid(minus, plus, "two-component state");
  }

  const Grid2D& grid() const noexcept { return minus.grid(); }
};

}  // namespace oinl
