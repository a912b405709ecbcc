#pragma once

#include <fftw3.h>

#include <mutex>
#include <span>

#include "oinl/errors.hpp"
#include "oinl/grid.hpp"

namespace oinl {

namespace detail {
// The FFTW planner is not re-entrant; execution of finished plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex mutex;
  return mutex;
}
}  // namespace detail

// In-place 2D complex transform pair for one grid shape.  Plans are built with
// FFTW_ESTIMATE so results are bit-reproducible run to run, and FFTW_UNALIGNED
// so they can be executed on any std::vector<complex> buffer.
class Fft2D {
public:
  explicit Fft2D(const Grid2D& grid) : grid_(grid) {
    std::vector<complex> scratch(grid.size());
    auto* buffer = reinterpret_cast<fftw_complex*>(scratch.data());
    const int nx = static_cast<int>(grid.nx());
    const int ny = static_cast<int>(grid.ny());
    {
      std::lock_guard lock(detail::fftw_planner_mutex());
      forward_ = fftw_plan_dft_2d(nx, ny, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
      backward_ = fftw_plan_dft_2d(nx, ny, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (forward_ == nullptr || backward_ == nullptr) {
      destroy();
      throw NumericalError("FFTW failed to create a plan");
    }
  }

  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;
  ~Fft2D() { destroy(); }

  const Grid2D& grid() const noexcept { return grid_; }

  void forward(std::span<complex> values) const { execute(forward_, values); }

  // Inverse transform including the 1/(nx*ny) normalization.
  void backward(std::span<complex> values) const {
    execute(backward_, values);
    const double scale = 1.0 / static_cast<double>(grid_.size());
    for (auto& v : values) v *= scale;
  }

private:
  void execute(fftw_plan plan, std::span<complex> values) const {
    if (values.size() != grid_.size()) throw DomainError("FFT buffer does not match the plan grid");
    auto* buffer = reinterpret_cast<fftw_complex*>(values.data());
    fftw_execute_dft(plan, buffer, buffer);
  }

  void destroy() noexcept {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (forward_ != nullptr) fftw_destroy_plan(forward_);
    if (backward_ != nullptr) fftw_destroy_plan(backward_);
    forward_ = backward_ = nullptr;
  }

  Grid2D grid_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace oinl
