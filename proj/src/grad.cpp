#include "ncstomo/grad.hpp"

#include <algorithm>
#include <stdexcept>

namespace ncstomo {

GradField grad_forward(const ImageGrid& x) {
  if (x.n < 2) throw std::invalid_argument("grad needs N >= 2");
  GradField g(x.n);
  int n = x.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j + 1 < n; ++j)
      g.h[static_cast<std::size_t>(i) * (n - 1) + j] = x.at(i, j) - x.at(i, j + 1);
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 0; j < n; ++j)
      g.vt[static_cast<std::size_t>(i) * n + j] = x.at(i, j) - x.at(i + 1, j);
  return g;
}

ImageGrid grad_adjoint(const GradField& g) {
  ImageGrid x(g.n);
  int n = g.n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      double w = g.h[static_cast<std::size_t>(i) * (n - 1) + j];
      x.at(i, j) += w;
      x.at(i, j + 1) -= w;
    }
  }
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double w = g.vt[static_cast<std::size_t>(i) * n + j];
      x.at(i, j) += w;
      x.at(i + 1, j) -= w;
    }
  }
  return x;
}

GradMap::GradMap(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("grad needs N >= 2");
}

std::size_t GradMap::domain_size() const {
  return static_cast<std::size_t>(n_) * n_;
}

std::size_t GradMap::range_size() const {
  return 2 * static_cast<std::size_t>(n_) * (n_ - 1);
}

void GradMap::forward(std::span<const double> x, std::span<double> out) const {
  int n = n_;
  std::size_t half = static_cast<std::size_t>(n) * (n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j + 1 < n; ++j)
      out[static_cast<std::size_t>(i) * (n - 1) + j] =
          x[static_cast<std::size_t>(i) * n + j] - x[static_cast<std::size_t>(i) * n + j + 1];
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 0; j < n; ++j)
      out[half + static_cast<std::size_t>(i) * n + j] =
          x[static_cast<std::size_t>(i) * n + j] - x[static_cast<std::size_t>(i + 1) * n + j];
}

void GradMap::adjoint(std::span<const double> u, std::span<double> out) const {
  int n = n_;
  std::size_t half = static_cast<std::size_t>(n) * (n - 1);
  std::fill(out.begin(), out.end(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      double w = u[static_cast<std::size_t>(i) * (n - 1) + j];
      out[static_cast<std::size_t>(i) * n + j] += w;
      out[static_cast<std::size_t>(i) * n + j + 1] -= w;
    }
  }
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double w = u[half + static_cast<std::size_t>(i) * n + j];
      out[static_cast<std::size_t>(i) * n + j] += w;
      out[static_cast<std::size_t>(i + 1) * n + j] -= w;
    }
  }
}

}  // namespace ncstomo
