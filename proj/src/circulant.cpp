#include "ncstomo/circulant.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ncstomo/rng.hpp"

namespace ncstomo {

SpectralMask operator+(const SpectralMask& a, const SpectralMask& b) {
  if (a.n != b.n) throw std::invalid_argument("mask size mismatch");
  SpectralMask out(a.n);
  for (std::size_t i = 0; i < out.h.size(); ++i) out.h[i] = a.h[i] + b.h[i];
  return out;
}

SpectralMask operator*(double c, const SpectralMask& m) {
  SpectralMask out(m.n);
  for (std::size_t i = 0; i < out.h.size(); ++i) out.h[i] = c * m.h[i];
  return out;
}

MaskApplier::MaskApplier(int n)
    : fft_(n), work_(static_cast<std::size_t>(n) * n), spec_(work_.size()) {}

void MaskApplier::apply(const SpectralMask& mask, std::span<const double> x,
                        std::span<double> out) const {
  if (mask.n != fft_.n()) throw std::invalid_argument("mask size mismatch");
  if (x.size() != work_.size() || out.size() != work_.size())
    throw std::invalid_argument("image size mismatch");
  for (std::size_t i = 0; i < work_.size(); ++i) work_[i] = x[i];
  fft_.forward(work_.data(), spec_.data());
  for (std::size_t i = 0; i < spec_.size(); ++i) spec_[i] *= mask.h[i];
  fft_.inverse(spec_.data(), work_.data());
  for (std::size_t i = 0; i < work_.size(); ++i) out[i] = work_[i].real();
}

ImageGrid apply_circulant(const SpectralMask& mask, const ImageGrid& x) {
  if (mask.n != x.n) throw std::invalid_argument("mask/image size mismatch");
  MaskApplier applier(mask.n);
  ImageGrid out(x.n);
  applier.apply(mask, x.v, out.v);
  return out;
}

SpectralMask pinv_mask(const SpectralMask& mask, double rel_tol) {
  double hmax = 0.0;
  for (const auto& z : mask.h) hmax = std::max(hmax, std::abs(z));
  SpectralMask out(mask.n);
  double cutoff = rel_tol * hmax;
  for (std::size_t i = 0; i < mask.h.size(); ++i)
    out.h[i] = std::abs(mask.h[i]) > cutoff ? 1.0 / mask.h[i] : 0.0;
  return out;
}

SpectralMask laplacian_mask_2d(int n) {
  if (n < 1) throw std::invalid_argument("mask size must be positive");
  SpectralMask out(n);
  std::vector<double> s2(n);
  for (int j = 0; j < n; ++j) {
    double s = std::sin(std::numbers::pi * j / n);
    s2[j] = s * s;
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out.at(j, k) = 4.0 * (s2[j] + s2[k]);
  return out;
}

SpectralMask radon_mask(int n, double scale, double dc_value) {
  if (n < 1) throw std::invalid_argument("mask size must be positive");
  if (dc_value < 0.0) throw std::invalid_argument("dc_value must be nonnegative");
  SpectralMask out(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double mj = std::min(j, n - j);
      double mk = std::min(k, n - k);
      out.at(j, k) = (j == 0 && k == 0)
                         ? dc_value
                         : scale / std::sqrt(mj * mj + mk * mk);
    }
  }
  return out;
}

namespace {

// Gaussian probe image for sample s, derived from its own RNG stream.
std::vector<double> probe_image(std::size_t total, std::uint64_t seed, int sample) {
  RngStream rng(seed, static_cast<std::uint64_t>(sample));
  std::vector<double> v(total);
  for (double& x : v) x = rng.next_normal();
  return v;
}

}  // namespace

EmpiricalMask empirical_mask(const LinearMap& normal_op, int n, int n_samples,
                             std::uint64_t seed) {
  std::size_t total = static_cast<std::size_t>(n) * n;
  if (normal_op.domain_size() != total || normal_op.range_size() != total)
    throw std::invalid_argument("empirical_mask needs an N^2 -> N^2 operator");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be positive");

  Fft2D fft(n);
  std::vector<std::complex<double>> cin(total), fv(total), fav(total);
  std::vector<std::complex<double>> sum(total, 0.0);
  std::vector<int> hits(total, 0);
  std::vector<double> av(total);

  for (int s = 0; s < n_samples; ++s) {
    std::vector<double> v = probe_image(total, seed, s);
    for (std::size_t i = 0; i < total; ++i) cin[i] = v[i];
    fft.forward(cin.data(), fv.data());
    normal_op.forward(v, av);
    for (std::size_t i = 0; i < total; ++i) cin[i] = av[i];
    fft.forward(cin.data(), fav.data());

    double norm = 0.0;
    for (const auto& z : fv) norm += std::norm(z);
    norm = std::sqrt(norm);
    double cutoff = 1e-12 * norm;
    for (std::size_t i = 0; i < total; ++i) {
      if (std::abs(fv[i]) < cutoff) continue;
      sum[i] += fav[i] / fv[i];
      ++hits[i];
    }
  }

  EmpiricalMask out;
  out.mask = SpectralMask(n);
  for (std::size_t i = 0; i < total; ++i) {
    if (hits[i] == 0) {
      out.dead_bins.push_back(static_cast<int>(i));
      continue;
    }
    out.mask.h[i] = sum[i] / static_cast<double>(hits[i]);
  }
  return out;
}

double calibrate_scale(const LinearMap& normal_op, const SpectralMask& tmpl,
                       int n_samples, std::uint64_t seed) {
  int n = tmpl.n;
  std::size_t total = static_cast<std::size_t>(n) * n;
  if (normal_op.domain_size() != total || normal_op.range_size() != total)
    throw std::invalid_argument("calibrate_scale needs an N^2 -> N^2 operator");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be positive");

  Fft2D fft(n);
  std::vector<std::complex<double>> cin(total), fv(total), fav(total);
  std::vector<double> av(total);
  double num = 0.0, den = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    std::vector<double> v = probe_image(total, seed, s);
    for (std::size_t i = 0; i < total; ++i) cin[i] = v[i];
    fft.forward(cin.data(), fv.data());
    normal_op.forward(v, av);
    for (std::size_t i = 0; i < total; ++i) cin[i] = av[i];
    fft.forward(cin.data(), fav.data());
    for (std::size_t i = 1; i < total; ++i) {
      std::complex<double> t = tmpl.h[i] * fv[i];
      num += (std::conj(t) * fav[i]).real();
      den += std::norm(t);
    }
  }
  if (den == 0.0) throw std::invalid_argument("calibrate_scale: template response is zero");
  return num / den;
}

}  // namespace ncstomo
