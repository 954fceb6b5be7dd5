#pragma once

#include <cstdint>
#include <vector>

#include "ncstomo/image.hpp"
#include "ncstomo/linear_map.hpp"

namespace ncstomo {

/// Ellipse on the [-1, 1]^2 image square; rotation is counterclockwise.
struct Ellipse {
  double intensity;
  double x0, y0;
  double a, b;
  double rot_deg;
};

struct PhantomSpec {
  int n = 0;
  std::vector<Ellipse> ellipses;

  /// The standard 10-ellipse head phantom (classic intensities, peak 2.0).
  static PhantomSpec shepp_logan(int n);
};

/// Rasterize by sampling sharp ellipse indicators at pixel centers;
/// overlapping ellipses add.
ImageGrid make_phantom(const PhantomSpec& spec);

struct NoiseSpec {
  enum class Kind { gaussian, poisson };
  Kind kind = Kind::gaussian;
  double sigma = 0.0;
  double exposure_scale = 1.0;
  std::uint64_t seed = 0;
};

/// b = A x + sigma * N(0, 1) per bin. Bin i draws the first normal of the
/// RNG stream (seed, i), so the result is independent of evaluation order.
Sinogram simulate_ct(const ImageGrid& x, const ProjectionMap& geometry, double sigma,
                     std::uint64_t seed);

/// b_i ~ Poisson(exposure_scale * (A x)_i), one counter-based stream per bin.
/// Means that are negative beyond roundoff are an error.
Sinogram simulate_pet(const ImageGrid& x, const ProjectionMap& geometry,
                      double exposure_scale, std::uint64_t seed);

Sinogram simulate(const ImageGrid& x, const ProjectionMap& geometry,
                  const NoiseSpec& noise);

}  // namespace ncstomo
