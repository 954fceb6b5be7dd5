#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ncstomo/fft.hpp"
#include "ncstomo/image.hpp"
#include "ncstomo/linear_map.hpp"

namespace ncstomo {

/// Eigenvalue grid of an N x N block-circulant operator, stored in DFT bin
/// order (unnormalized forward transform convention). The operator it stands
/// for is F^-1 diag(h) F restricted to real images.
struct SpectralMask {
  int n = 0;
  std::vector<std::complex<double>> h;

  SpectralMask() = default;
  explicit SpectralMask(int n_) : n(n_), h(static_cast<std::size_t>(n_) * n_, 0.0) {}

  std::complex<double>& at(int j, int k) { return h[static_cast<std::size_t>(j) * n + k]; }
  std::complex<double> at(int j, int k) const { return h[static_cast<std::size_t>(j) * n + k]; }
};

SpectralMask operator+(const SpectralMask& a, const SpectralMask& b);
SpectralMask operator*(double c, const SpectralMask& m);

/// Reusable FFT workspace for repeated mask applications in solver loops.
class MaskApplier {
 public:
  explicit MaskApplier(int n);
  /// out = Re(F^-1 (h .* F x)); x and out are flat N*N images (may alias).
  void apply(const SpectralMask& mask, std::span<const double> x,
             std::span<double> out) const;

 private:
  Fft2D fft_;
  mutable std::vector<std::complex<double>> work_;
  mutable std::vector<std::complex<double>> spec_;
};

/// One-shot circulant application (sets up a transform pair per call).
ImageGrid apply_circulant(const SpectralMask& mask, const ImageGrid& x);

/// Moore-Penrose pseudoinverse of the mask: 1/h per bin, with bins below
/// rel_tol * max|h| zeroed. An all-zero mask maps to the all-zero mask.
SpectralMask pinv_mask(const SpectralMask& mask, double rel_tol = 1e-12);

/// Eigenvalues of the periodic 5-point Laplacian:
/// h[j][k] = 4 (sin^2(pi j / N) + sin^2(pi k / N)).
SpectralMask laplacian_mask_2d(int n);

/// Inverse-frequency surrogate for the parallel-beam normal operator:
/// h[j][k] = scale / sqrt(m_j^2 + m_k^2) with m_j = min(j, N-j), and the
/// DC bin pinned to dc_value (the surrogate diverges at zero frequency).
SpectralMask radon_mask(int n, double scale, double dc_value);

struct EmpiricalMask {
  SpectralMask mask;
  /// DFT bins whose probe responses were too small in every sample; their
  /// mask entries are zero.
  std::vector<int> dead_bins;
};

/// Probe a symmetric image-to-image operator with Gaussian images and average
/// the per-bin transfer ratios (F op(v))_i / (F v)_i. Ratios where
/// |(F v)_i| < 1e-12 ||F v|| are skipped.
EmpiricalMask empirical_mask(const LinearMap& normal_op, int n, int n_samples,
                             std::uint64_t seed);

/// Least-squares fit of c such that c * template matches the operator's
/// spectral response over Gaussian probes, DC bin excluded.
double calibrate_scale(const LinearMap& normal_op, const SpectralMask& tmpl,
                       int n_samples, std::uint64_t seed);

}  // namespace ncstomo
