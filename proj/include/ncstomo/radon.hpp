#pragma once

#include "ncstomo/image.hpp"
#include "ncstomo/linear_map.hpp"

namespace ncstomo {

/// Smallest odd detector count whose centered unit-spaced bins cover the
/// image diagonal: least odd integer >= sqrt(2) * N + 1.
int default_detector_count(int n);

/// Ray-driven parallel-beam projector. Angles are theta_t = t*pi/n_angles,
/// detector bins are unit-spaced and centered. Each ray is sampled at unit
/// steps with bilinear interpolation; the adjoint scatters the identical
/// weights, so the pair is an exact algebraic transpose.
class RadonMap final : public ProjectionMap {
 public:
  RadonMap(int n, int n_angles, int n_det);

  std::size_t domain_size() const override;
  std::size_t range_size() const override;
  void forward(std::span<const double> x, std::span<double> out) const override;
  void adjoint(std::span<const double> u, std::span<double> out) const override;
  int n_angles() const override { return n_angles_; }
  int n_detectors() const override { return n_det_; }
  int n() const { return n_; }

 private:
  struct Ray {
    double px0, py0, dpx, dpy;
    int count;
  };

  int n_, n_angles_, n_det_;
  std::vector<Ray> rays_;
};

Sinogram radon_forward(const ImageGrid& x, int n_angles, int n_det);
ImageGrid radon_adjoint(const Sinogram& sino, int n);

}  // namespace ncstomo
