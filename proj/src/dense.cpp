#include "ncstomo/dense.hpp"

namespace ncstomo {

Eigen::MatrixXd dense_map(const LinearMap& a) {
  std::size_t rows = a.range_size();
  std::size_t cols = a.domain_size();
  Eigen::MatrixXd m(rows, cols);
  std::vector<double> e(cols, 0.0), col(rows);
  for (std::size_t j = 0; j < cols; ++j) {
    e[j] = 1.0;
    a.forward(e, col);
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = col[i];
    e[j] = 0.0;
  }
  return m;
}

Eigen::MatrixXd pinv_svd(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cutoff = rel_tol * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

void DenseMap::forward(std::span<const double> x, std::span<double> out) const {
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), m_.cols());
  Eigen::Map<Eigen::VectorXd> ov(out.data(), m_.rows());
  ov = m_ * xv;
}

void DenseMap::adjoint(std::span<const double> u, std::span<double> out) const {
  Eigen::Map<const Eigen::VectorXd> uv(u.data(), m_.rows());
  Eigen::Map<Eigen::VectorXd> ov(out.data(), m_.cols());
  ov = m_.transpose() * uv;
}

}  // namespace ncstomo
