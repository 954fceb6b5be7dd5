#pragma once

#include "ncstomo/sparse.hpp"

namespace ncstomo {

/// Fan-beam acquisition: a point source on a circle of source_radius (pixel
/// units from the image center), n_views positions over the full circle, and
/// n_rays equally spaced ray angles spanning fan_angle around the central ray.
struct FanBeamGeometry {
  int n_views = 0;
  int n_rays = 0;
  double source_radius = 0.0;
  double fan_angle = 0.0;

  /// source_radius = N; fan angle 2*asin(sqrt(2)*N / (2*source_radius)), the
  /// fan that exactly covers the circle through the image corners.
  static FanBeamGeometry defaults(int n, int n_views, int n_rays);
};

/// Build the system matrix with Siddon-style exact ray/pixel-cell
/// intersection lengths. Row order is view-major.
SparseMap build_fanbeam(int n, const FanBeamGeometry& geom);

}  // namespace ncstomo
