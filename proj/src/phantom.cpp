#include "ncstomo/phantom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ncstomo/rng.hpp"

namespace ncstomo {

PhantomSpec PhantomSpec::shepp_logan(int n) {
  PhantomSpec spec;
  spec.n = n;
  spec.ellipses = {
      {2.0, 0.0, 0.0, 0.69, 0.92, 0.0},
      {-0.98, 0.0, -0.0184, 0.6624, 0.874, 0.0},
      {-0.02, 0.22, 0.0, 0.11, 0.31, -18.0},
      {-0.02, -0.22, 0.0, 0.16, 0.41, 18.0},
      {0.01, 0.0, 0.35, 0.21, 0.25, 0.0},
      {0.01, 0.0, 0.1, 0.046, 0.046, 0.0},
      {0.01, 0.0, -0.1, 0.046, 0.046, 0.0},
      {0.01, -0.08, -0.605, 0.046, 0.023, 0.0},
      {0.01, 0.0, -0.606, 0.023, 0.023, 0.0},
      {0.01, 0.06, -0.605, 0.023, 0.046, 0.0},
  };
  return spec;
}

ImageGrid make_phantom(const PhantomSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("phantom size must be positive");
  for (const auto& e : spec.ellipses)
    if (e.a <= 0.0 || e.b <= 0.0)
      throw std::invalid_argument("ellipse semi-axes must be positive");
  ImageGrid img(spec.n);
  int n = spec.n;
  for (const auto& e : spec.ellipses) {
    double phi = e.rot_deg * std::numbers::pi / 180.0;
    double c = std::cos(phi), s = std::sin(phi);
    for (int i = 0; i < n; ++i) {
      double v = (n - 1.0 - 2.0 * i) / n;
      for (int j = 0; j < n; ++j) {
        double u = (2.0 * j - (n - 1.0)) / n;
        double du = u - e.x0, dv = v - e.y0;
        double xi = (c * du + s * dv) / e.a;
        double eta = (-s * du + c * dv) / e.b;
        if (xi * xi + eta * eta <= 1.0) img.at(i, j) += e.intensity;
      }
    }
  }
  return img;
}

Sinogram simulate_ct(const ImageGrid& x, const ProjectionMap& geometry, double sigma,
                     std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
  std::vector<double> clean = forward(geometry, x.v);
  Sinogram out(geometry.n_angles(), geometry.n_detectors());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    RngStream rng(seed, i);
    out.v[i] = clean[i] + sigma * rng.next_normal();
  }
  return out;
}

Sinogram simulate_pet(const ImageGrid& x, const ProjectionMap& geometry,
                      double exposure_scale, std::uint64_t seed) {
  if (exposure_scale <= 0.0) throw std::invalid_argument("exposure scale must be positive");
  std::vector<double> clean = forward(geometry, x.v);
  double peak = 0.0;
  for (double v : clean) peak = std::max(peak, std::abs(v));
  Sinogram out(geometry.n_angles(), geometry.n_detectors());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    double mean = exposure_scale * clean[i];
    if (mean < 0.0) {
      if (mean < -1e-12 * exposure_scale * std::max(1.0, peak))
        throw std::invalid_argument("negative projection mean in Poisson simulation");
      mean = 0.0;
    }
    if (mean == 0.0) {
      out.v[i] = 0.0;
      continue;
    }
    RngStream rng(seed, i);
    out.v[i] = static_cast<double>(rng.next_poisson(mean));
  }
  return out;
}

Sinogram simulate(const ImageGrid& x, const ProjectionMap& geometry,
                  const NoiseSpec& noise) {
  if (noise.kind == NoiseSpec::Kind::gaussian)
    return simulate_ct(x, geometry, noise.sigma, noise.seed);
  return simulate_pet(x, geometry, noise.exposure_scale, noise.seed);
}

}  // namespace ncstomo
