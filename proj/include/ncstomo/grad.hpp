#pragma once

#include "ncstomo/image.hpp"
#include "ncstomo/linear_map.hpp"

namespace ncstomo {

/// Forward differences with Neumann boundaries: N-1 diffs per row and per
/// column, (Dx)_i = x_i - x_{i+1}.
GradField grad_forward(const ImageGrid& x);

/// Exact algebraic transpose of grad_forward (divergence with sign flip).
ImageGrid grad_adjoint(const GradField& g);

/// Flat-vector view of the same pair: domain N^2, range 2N(N-1) with the
/// horizontal block first.
class GradMap final : public LinearMap {
 public:
  explicit GradMap(int n);
  std::size_t domain_size() const override;
  std::size_t range_size() const override;
  void forward(std::span<const double> x, std::span<double> out) const override;
  void adjoint(std::span<const double> u, std::span<double> out) const override;
  int n() const { return n_; }

 private:
  int n_;
};

}  // namespace ncstomo
