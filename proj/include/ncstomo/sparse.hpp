#pragma once

#include <cstdint>
#include <vector>

#include "ncstomo/linear_map.hpp"

namespace ncstomo {

struct CooTriplet {
  std::int64_t row;
  std::int64_t col;
  double value;
};

/// Explicit sparse operator in CSR form with a prebuilt transpose, so the
/// adjoint applies the stored transpose (deterministic, exact to the matrix).
/// Rows are sinogram bins (angle-major), columns are image pixels.
class SparseMap final : public ProjectionMap {
 public:
  SparseMap(int n_image, int n_angles, int n_det, std::vector<CooTriplet> triplets);

  std::size_t domain_size() const override;
  std::size_t range_size() const override;
  void forward(std::span<const double> x, std::span<double> out) const override;
  void adjoint(std::span<const double> u, std::span<double> out) const override;
  int n_angles() const override { return n_angles_; }
  int n_detectors() const override { return n_det_; }
  int n() const { return n_; }

  std::vector<CooTriplet> to_triplets() const;
  /// Sum of each row's values (total intersection length of that ray).
  std::vector<double> row_sums() const;

 private:
  int n_, n_angles_, n_det_;
  std::vector<std::size_t> row_ptr_, col_idx_;
  std::vector<double> val_;
  std::vector<std::size_t> t_row_ptr_, t_col_idx_;
  std::vector<double> t_val_;
};

}  // namespace ncstomo
