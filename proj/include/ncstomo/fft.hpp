#pragma once

#include <complex>
#include <vector>

namespace ncstomo {

/// 2D complex DFT on an N x N grid, unnormalized forward and 1/N^2 inverse.
/// Wraps FFTW plans on internal buffers; plan setup is serialized globally,
/// transforms themselves are safe to run concurrently on distinct objects.
class Fft2D {
 public:
  explicit Fft2D(int n);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int n() const { return n_; }
  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  void inverse(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  int n_;
  void* plan_fwd_;
  void* plan_inv_;
  mutable std::vector<std::complex<double>> buf_in_;
  mutable std::vector<std::complex<double>> buf_out_;
};

}  // namespace ncstomo
