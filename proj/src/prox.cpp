#include "ncstomo/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncstomo {

double prox_conj_poisson(double u, double c) {
  if (c < 0.0) throw std::invalid_argument("prox_conj_poisson needs c >= 0");
  double d = u - 1.0;
  return 1.0 + 0.5 * (d - std::sqrt(d * d + 4.0 * c));
}

double moreau_conj(const std::function<double(double, double)>& prox_g, double z,
                   double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("moreau_conj needs alpha > 0");
  return z - alpha * prox_g(z / alpha, 1.0 / alpha);
}

void QuadraticConj::evaluate(std::span<double> u, double alpha) const {
  double s = 1.0 / (1.0 + alpha);
  for (double& z : u) z *= s;
}

double QuadraticConj::objective(std::span<const double> y) const {
  double acc = 0.0;
  for (double z : y) acc += z * z;
  return 0.5 * acc;
}

ScaledL1Conj::ScaledL1Conj(double bound) : bound_(bound) {
  if (bound < 0.0) throw std::invalid_argument("l1 weight must be nonnegative");
}

void ScaledL1Conj::evaluate(std::span<double> u, double) const {
  for (double& z : u) z = project_box(z, bound_);
}

double ScaledL1Conj::objective(std::span<const double> y) const {
  double acc = 0.0;
  for (double z : y) acc += std::abs(z);
  return bound_ * acc;
}

PoissonConj::PoissonConj(std::vector<double> counts, double alpha)
    : counts_(std::move(counts)), alpha_(alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("PoissonConj needs alpha > 0");
  c_.resize(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 0.0) throw std::invalid_argument("Poisson counts must be nonnegative");
    c_[i] = alpha * counts_[i];
  }
}

void PoissonConj::evaluate(std::span<double> u, double alpha) const {
  if (u.size() != c_.size()) throw std::invalid_argument("PoissonConj size mismatch");
  if (alpha != alpha_) throw std::invalid_argument("PoissonConj built for a different alpha");
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = prox_conj_poisson(u[i], c_[i]);
}

double PoissonConj::objective(std::span<const double> y) const {
  if (y.size() != counts_.size()) throw std::invalid_argument("PoissonConj size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (counts_[i] > 0.0) {
      if (y[i] <= 0.0) return kInf;
      acc += y[i] - counts_[i] * std::log(y[i]);
    } else {
      if (y[i] < 0.0) return kInf;
      acc += y[i];
    }
  }
  return acc;
}

namespace {

std::uint64_t fnv1a_bytes(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::uint64_t QuadraticConj::param_hash() const { return 0x71d; }

std::uint64_t ScaledL1Conj::param_hash() const {
  return fnv1a_bytes(&bound_, sizeof bound_, 0x11aa);
}

std::uint64_t PoissonConj::param_hash() const {
  std::uint64_t h = fnv1a_bytes(&alpha_, sizeof alpha_, 0x90155);
  return fnv1a_bytes(counts_.data(), counts_.size() * sizeof(double), h);
}

std::uint64_t NonnegConj::param_hash() const { return 0x20e6; }

void NonnegConj::evaluate(std::span<double> u, double) const {
  for (double& z : u) z = prox_conj_nonneg(z);
}

double NonnegConj::objective(std::span<const double> y) const {
  double hi = 0.0;
  for (double z : y) hi = std::max(hi, std::abs(z));
  double tol = 1e-9 * std::max(1.0, hi);
  for (double z : y)
    if (z < -tol) return kInf;
  return 0.0;
}

}  // namespace ncstomo
