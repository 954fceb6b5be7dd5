#include "ncstomo/fanbeam.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ncstomo {

FanBeamGeometry FanBeamGeometry::defaults(int n, int n_views, int n_rays) {
  FanBeamGeometry g;
  g.n_views = n_views;
  g.n_rays = n_rays;
  g.source_radius = n;
  g.fan_angle = 2.0 * std::asin(std::numbers::sqrt2 * n / (2.0 * g.source_radius));
  return g;
}

namespace {

struct Clip {
  double enter, exit;
  bool hit;
};

// Clip the ray s + t*d against the slab coord in [-h, h].
void clip_axis(double s, double d, double h, Clip& c) {
  if (d == 0.0) {
    if (s < -h || s > h) c.hit = false;
    return;
  }
  double t0 = (-h - s) / d;
  double t1 = (h - s) / d;
  if (t0 > t1) std::swap(t0, t1);
  c.enter = std::max(c.enter, t0);
  c.exit = std::min(c.exit, t1);
  if (c.enter >= c.exit) c.hit = false;
}

}  // namespace

SparseMap build_fanbeam(int n, const FanBeamGeometry& geom) {
  if (n < 2) throw std::invalid_argument("image size must be >= 2");
  if (geom.n_views < 1 || geom.n_rays < 1)
    throw std::invalid_argument("fan-beam needs at least one view and one ray");
  double h = 0.5 * n;
  if (geom.source_radius <= h * std::numbers::sqrt2)
    throw std::invalid_argument("source must lie outside the image corner circle");
  if (geom.fan_angle <= 0.0 || geom.fan_angle >= std::numbers::pi)
    throw std::invalid_argument("fan angle must lie in (0, pi)");

  std::vector<CooTriplet> triplets;
  triplets.reserve(static_cast<std::size_t>(geom.n_views) * geom.n_rays * 2 * n);

  double dpsi = geom.n_rays > 1 ? geom.fan_angle / (geom.n_rays - 1) : 0.0;
  double psi0 = -0.5 * geom.fan_angle;
  std::int64_t ray_index = 0;
  for (int v = 0; v < geom.n_views; ++v) {
    double phi = 2.0 * std::numbers::pi * v / geom.n_views;
    double sx = geom.source_radius * std::cos(phi);
    double sy = geom.source_radius * std::sin(phi);
    double cx = -std::cos(phi);
    double cy = -std::sin(phi);
    for (int r = 0; r < geom.n_rays; ++r, ++ray_index) {
      double psi = geom.n_rays > 1 ? psi0 + r * dpsi : 0.0;
      double cp = std::cos(psi), sp = std::sin(psi);
      double dx = cp * cx - sp * cy;
      double dy = sp * cx + cp * cy;

      Clip c{0.0, std::numeric_limits<double>::infinity(), true};
      clip_axis(sx, dx, h, c);
      clip_axis(sy, dy, h, c);
      if (!c.hit) continue;

      // Siddon walk from the entry point, one cell crossing at a time.
      double t = c.enter;
      double px = sx + t * dx;
      double py = sy + t * dy;
      int ix = std::clamp(static_cast<int>(std::floor(px + h)), 0, n - 1);
      int iy = std::clamp(static_cast<int>(std::floor(py + h)), 0, n - 1);
      int step_x = dx > 0.0 ? 1 : -1;
      int step_y = dy > 0.0 ? 1 : -1;
      while (t < c.exit - 1e-12) {
        double tx = dx != 0.0
                        ? ((ix + (step_x > 0 ? 1 : 0)) - h - sx) / dx
                        : std::numeric_limits<double>::infinity();
        double ty = dy != 0.0
                        ? ((iy + (step_y > 0 ? 1 : 0)) - h - sy) / dy
                        : std::numeric_limits<double>::infinity();
        double t_next = std::max(std::min({tx, ty, c.exit}), t);
        double len = t_next - t;
        if (len > 0.0) {
          std::int64_t pixel = static_cast<std::int64_t>(n - 1 - iy) * n + ix;
          triplets.push_back({ray_index, pixel, len});
        }
        t = t_next;
        if (t >= c.exit - 1e-12) break;
        if (tx <= ty) {
          ix += step_x;
          if (ix < 0 || ix >= n) break;
        } else {
          iy += step_y;
          if (iy < 0 || iy >= n) break;
        }
      }
    }
  }
  return SparseMap(n, geom.n_views, geom.n_rays, std::move(triplets));
}

}  // namespace ncstomo
