#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace ncstomo {

/// Square N x N image, row-major doubles.
struct ImageGrid {
  int n = 0;
  std::vector<double> v;

  ImageGrid() = default;
  explicit ImageGrid(int n_) : n(n_), v(static_cast<std::size_t>(n_) * n_, 0.0) {}

  double& at(int row, int col) { return v[static_cast<std::size_t>(row) * n + col]; }
  double at(int row, int col) const { return v[static_cast<std::size_t>(row) * n + col]; }
  std::size_t size() const { return v.size(); }
};

/// Projection data, row-major with angle as the slow index.
struct Sinogram {
  int n_angles = 0;
  int n_det = 0;
  std::vector<double> v;

  Sinogram() = default;
  Sinogram(int n_angles_, int n_det_)
      : n_angles(n_angles_), n_det(n_det_),
        v(static_cast<std::size_t>(n_angles_) * n_det_, 0.0) {}

  double& at(int angle, int det) { return v[static_cast<std::size_t>(angle) * n_det + det]; }
  double at(int angle, int det) const { return v[static_cast<std::size_t>(angle) * n_det + det]; }
  std::size_t size() const { return v.size(); }
};

/// Forward-difference field: horizontal diffs are N x (N-1), vertical are (N-1) x N.
struct GradField {
  int n = 0;
  std::vector<double> h;
  std::vector<double> vt;

  GradField() = default;
  explicit GradField(int n_)
      : n(n_), h(static_cast<std::size_t>(n_) * (n_ - 1), 0.0),
        vt(static_cast<std::size_t>(n_ - 1) * n_, 0.0) {
    assert(n_ >= 2);
  }
  std::size_t size() const { return h.size() + vt.size(); }
};

}  // namespace ncstomo
