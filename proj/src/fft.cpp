#include "ncstomo/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace ncstomo {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft2D::Fft2D(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Fft2D size must be positive");
  std::size_t total = static_cast<std::size_t>(n) * n;
  buf_in_.resize(total);
  buf_out_.resize(total);
  auto* in = reinterpret_cast<fftw_complex*>(buf_in_.data());
  auto* out = reinterpret_cast<fftw_complex*>(buf_out_.data());
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_fwd_ = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plan_fwd_ || !plan_inv_) throw std::runtime_error("fftw plan creation failed");
}

Fft2D::~Fft2D() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void Fft2D::forward(const std::complex<double>* in, std::complex<double>* out) const {
  std::copy(in, in + buf_in_.size(), buf_in_.data());
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::copy(buf_out_.begin(), buf_out_.end(), out);
}

void Fft2D::inverse(const std::complex<double>* in, std::complex<double>* out) const {
  std::copy(in, in + buf_in_.size(), buf_in_.data());
  fftw_execute(static_cast<fftw_plan>(plan_inv_));
  double scale = 1.0 / static_cast<double>(buf_in_.size());
  for (std::size_t i = 0; i < buf_out_.size(); ++i) out[i] = buf_out_[i] * scale;
}

}  // namespace ncstomo
