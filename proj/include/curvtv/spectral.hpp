#pragma once

#include <fftw3.h>

#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "curvtv/image.hpp"
#include "curvtv/operators.hpp"

namespace curvtv {

namespace detail {

// FFTW's planner is not reentrant; execution on distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

template <class T>
struct FftwFree {
  void operator()(T* p) const noexcept { fftw_free(p); }
};

} // namespace detail

/// Solves (a I - b Laplacian) u = rhs on a periodic grid of fixed size.
/// Plans are built once with FFTW_ESTIMATE so results do not depend on
/// timing measurements.
class SpectralSolver {
public:
  SpectralSolver(std::size_t width, std::size_t height)
      : width_(width), height_(height), half_(width / 2 + 1),
        real_(static_cast<double*>(fftw_malloc(sizeof(double) * width * height))),
        spec_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * height * (width / 2 + 1)))),
        symbol_(height * (width / 2 + 1)) {
    if (width == 0 || height == 0) throw std::invalid_argument("SpectralSolver: dimensions must be positive");
    if (!real_ || !spec_) throw std::bad_alloc();
    {
      std::lock_guard lock(detail::fftw_planner_mutex());
      const int n0 = static_cast<int>(height), n1 = static_cast<int>(width);
      forward_ = fftw_plan_dft_r2c_2d(n0, n1, real_.get(), spec_.get(), FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_2d(n0, n1, spec_.get(), real_.get(), FFTW_ESTIMATE);
    }
    if (!forward_ || !backward_) throw std::runtime_error("SpectralSolver: FFTW planning failed");
    const Image full = laplacian_symbol(width, height);
    for (std::size_t p = 0; p < height; ++p)
      for (std::size_t q = 0; q < half_; ++q) symbol_[p * half_ + q] = full(p, q);
  }

  SpectralSolver(const SpectralSolver&) = delete;
  SpectralSolver& operator=(const SpectralSolver&) = delete;

  ~SpectralSolver() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (forward_) fftw_destroy_plan(forward_);
    if (backward_) fftw_destroy_plan(backward_);
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }

  Image solve(double a, double b, const Image& rhs) {
    if (!(a > 0.0)) throw std::invalid_argument("spectral_solve: a must be positive");
    if (!(b >= 0.0)) throw std::invalid_argument("spectral_solve: b must be nonnegative");
    detail::require_single_channel(rhs, "spectral_solve");
    detail::require_same_grid(rhs.width(), rhs.height(), width_, height_, "spectral_solve");

    auto in = rhs.values();
    std::copy(in.begin(), in.end(), real_.get());
    fftw_execute(forward_);
    const double scale = 1.0 / static_cast<double>(width_ * height_);
    for (std::size_t k = 0; k < symbol_.size(); ++k) {
      const double factor = scale / (a - b * symbol_[k]);
      spec_.get()[k][0] *= factor;
      spec_.get()[k][1] *= factor;
    }
    fftw_execute(backward_);
    Image out(width_, height_);
    std::copy(real_.get(), real_.get() + width_ * height_, out.values().begin());
    return out;
  }

private:
  std::size_t width_;
  std::size_t height_;
  std::size_t half_;
  std::unique_ptr<double, detail::FftwFree<double>> real_;
  std::unique_ptr<fftw_complex, detail::FftwFree<fftw_complex>> spec_;
  std::vector<double> symbol_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

/// One-shot convenience wrapper; reuse a SpectralSolver inside loops.
inline Image spectral_solve(double a, double b, const Image& rhs) {
  if (!(a > 0.0)) throw std::invalid_argument("spectral_solve: a must be positive");
  SpectralSolver solver(rhs.width(), rhs.height());
  return solver.solve(a, b, rhs);
}

} // namespace curvtv
