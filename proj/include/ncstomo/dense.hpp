#pragma once

#include <Eigen/Dense>

#include "ncstomo/linear_map.hpp"

namespace ncstomo {

/// Materialize a LinearMap column by column. Test and oracle sizes only.
Eigen::MatrixXd dense_map(const LinearMap& a);

/// Moore-Penrose pseudoinverse via SVD; singular values below
/// rel_tol * sigma_max are treated as zero.
Eigen::MatrixXd pinv_svd(const Eigen::MatrixXd& m, double rel_tol = 1e-12);

class DenseMap final : public LinearMap {
 public:
  explicit DenseMap(Eigen::MatrixXd m) : m_(std::move(m)) {}
  std::size_t domain_size() const override { return static_cast<std::size_t>(m_.cols()); }
  std::size_t range_size() const override { return static_cast<std::size_t>(m_.rows()); }
  void forward(std::span<const double> x, std::span<double> out) const override;
  void adjoint(std::span<const double> u, std::span<double> out) const override;
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

}  // namespace ncstomo
