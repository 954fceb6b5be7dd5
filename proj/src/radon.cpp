#include "ncstomo/radon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ncstomo {

int default_detector_count(int n) {
  int d = static_cast<int>(std::ceil(std::numbers::sqrt2 * n + 1.0));
  return d % 2 == 0 ? d + 1 : d;
}

namespace {

// tau-interval where a + b*tau stays inside [lo, hi]; empty -> lo > hi.
struct Interval {
  double lo, hi;
};

Interval axis_interval(double a, double b, double lo, double hi) {
  if (b == 0.0) {
    if (a >= lo && a <= hi) return {-1e30, 1e30};
    return {1.0, 0.0};
  }
  double t0 = (lo - a) / b;
  double t1 = (hi - a) / b;
  if (t0 > t1) std::swap(t0, t1);
  return {t0, t1};
}

}  // namespace

RadonMap::RadonMap(int n, int n_angles, int n_det)
    : n_(n), n_angles_(n_angles), n_det_(n_det) {
  if (n < 2) throw std::invalid_argument("image size must be >= 2");
  if (n_angles < 1) throw std::invalid_argument("need at least one angle");
  if (n_det % 2 == 0) throw std::invalid_argument("detector count must be odd");
  int min_det = static_cast<int>(std::ceil(std::numbers::sqrt2 * n));
  if (min_det % 2 == 0) ++min_det;
  if (n_det < min_det) throw std::invalid_argument("detector row does not cover the image");

  double c = 0.5 * (n - 1);
  double s_mid = 0.5 * (n_det - 1);
  rays_.reserve(static_cast<std::size_t>(n_angles) * n_det);
  for (int t = 0; t < n_angles; ++t) {
    double theta = std::numbers::pi * t / n_angles;
    double ct = std::cos(theta);
    double st = std::sin(theta);
    for (int d = 0; d < n_det; ++d) {
      double s = d - s_mid;
      // Sample point at parameter tau: col coord px, row coord py.
      //   px(tau) = s*ct - tau*st + c, py(tau) = c - s*st - tau*ct.
      Interval ix = axis_interval(s * ct + c, -st, 0.0, n - 1);
      Interval iy = axis_interval(c - s * st, -ct, 0.0, n - 1);
      double lo = std::max(ix.lo, iy.lo);
      double hi = std::min(ix.hi, iy.hi);
      Ray ray{0.0, 0.0, -st, -ct, 0};
      if (lo <= hi) {
        double k0 = std::ceil(lo);
        double k1 = std::floor(hi);
        if (k0 <= k1) {
          ray.px0 = s * ct - k0 * st + c;
          ray.py0 = c - s * st - k0 * ct;
          ray.count = static_cast<int>(k1 - k0) + 1;
        }
      }
      rays_.push_back(ray);
    }
  }
}

std::size_t RadonMap::domain_size() const {
  return static_cast<std::size_t>(n_) * n_;
}

std::size_t RadonMap::range_size() const {
  return static_cast<std::size_t>(n_angles_) * n_det_;
}

void RadonMap::forward(std::span<const double> x, std::span<double> out) const {
  int n = n_;
  double edge = n - 1;
  for (std::size_t r = 0; r < rays_.size(); ++r) {
    const Ray& ray = rays_[r];
    double acc = 0.0;
    for (int k = 0; k < ray.count; ++k) {
      double px = ray.px0 + k * ray.dpx;
      double py = ray.py0 + k * ray.dpy;
      if (px < 0.0 || px > edge || py < 0.0 || py > edge) continue;
      int ix = std::min(static_cast<int>(px), n - 2);
      int iy = std::min(static_cast<int>(py), n - 2);
      double fx = px - ix;
      double fy = py - iy;
      const double* p = x.data() + static_cast<std::size_t>(iy) * n + ix;
      acc += (1.0 - fy) * ((1.0 - fx) * p[0] + fx * p[1]) +
             fy * ((1.0 - fx) * p[n] + fx * p[n + 1]);
    }
    out[r] = acc;
  }
}

void RadonMap::adjoint(std::span<const double> u, std::span<double> out) const {
  int n = n_;
  double edge = n - 1;
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t r = 0; r < rays_.size(); ++r) {
    const Ray& ray = rays_[r];
    double w = u[r];
    if (w == 0.0) continue;
    for (int k = 0; k < ray.count; ++k) {
      double px = ray.px0 + k * ray.dpx;
      double py = ray.py0 + k * ray.dpy;
      if (px < 0.0 || px > edge || py < 0.0 || py > edge) continue;
      int ix = std::min(static_cast<int>(px), n - 2);
      int iy = std::min(static_cast<int>(py), n - 2);
      double fx = px - ix;
      double fy = py - iy;
      double* p = out.data() + static_cast<std::size_t>(iy) * n + ix;
      p[0] += w * (1.0 - fy) * (1.0 - fx);
      p[1] += w * (1.0 - fy) * fx;
      p[n] += w * fy * (1.0 - fx);
      p[n + 1] += w * fy * fx;
    }
  }
}

Sinogram radon_forward(const ImageGrid& x, int n_angles, int n_det) {
  RadonMap map(x.n, n_angles, n_det);
  Sinogram out(n_angles, n_det);
  map.forward(x.v, out.v);
  return out;
}

ImageGrid radon_adjoint(const Sinogram& sino, int n) {
  RadonMap map(n, sino.n_angles, sino.n_det);
  ImageGrid out(n);
  map.adjoint(sino.v, out.v);
  return out;
}

}  // namespace ncstomo
