#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace ncstomo {

/// prox_{alpha g*} for g = 1/2 ||.||^2: componentwise z / (1 + alpha).
inline double prox_conj_quadratic(double z, double alpha) { return z / (1.0 + alpha); }

/// Projection onto [-bound, bound]; prox of the conjugate of bound*|.|.
inline double project_box(double z, double bound) {
  return z < -bound ? -bound : (z > bound ? bound : z);
}

/// prox_{alpha g*} for the Poisson log-likelihood term y - b log y, with
/// c = alpha * b folded in: S(u; c) = 1 + ((u - 1) - sqrt((u - 1)^2 + 4c)) / 2.
/// For c = 0 this reduces to min(u, 1), the conjugate prox of y + indicator
/// of the nonnegative half-line.
double prox_conj_poisson(double u, double c);

/// prox_{alpha g*} for g = indicator of the nonnegative orthant: min(u, 0).
inline double prox_conj_nonneg(double u) { return u < 0.0 ? u : 0.0; }

/// Moreau identity: prox_{alpha g*}(z) = z - alpha * prox_{g/alpha}(z/alpha),
/// given prox_g(w, rho) evaluating prox_{rho g}(w).
double moreau_conj(const std::function<double(double, double)>& prox_g, double z,
                   double alpha);

/// Dual-block prox plus the matching primal objective term. evaluate applies
/// prox_{alpha g*} in place; objective returns g(y) for a residual vector y
/// (which may be +infinity for indicator-type g outside the feasible set).
class ProxConj {
 public:
  virtual ~ProxConj() = default;
  virtual void evaluate(std::span<double> u, double alpha) const = 0;
  virtual double objective(std::span<const double> y) const = 0;
  /// Distinguishes blocks in cache keys; covers type and parameters.
  virtual std::uint64_t param_hash() const = 0;
};

/// g = 1/2 ||.||^2.
class QuadraticConj final : public ProxConj {
 public:
  void evaluate(std::span<double> u, double alpha) const override;
  double objective(std::span<const double> y) const override;
  std::uint64_t param_hash() const override;
};

/// g = bound * ||.||_1.
class ScaledL1Conj final : public ProxConj {
 public:
  explicit ScaledL1Conj(double bound);
  void evaluate(std::span<double> u, double alpha) const override;
  double objective(std::span<const double> y) const override;
  std::uint64_t param_hash() const override;
  double bound() const { return bound_; }

 private:
  double bound_;
};

/// g(y) = sum_i ell(y_i; b_i) with ell(y; b) = y - b log y for b > 0 and
/// y + indicator(y >= 0) for b = 0. The counts b and the step alpha are fixed
/// per problem, so c_i = alpha * b_i is precomputed.
class PoissonConj final : public ProxConj {
 public:
  PoissonConj(std::vector<double> counts, double alpha);
  void evaluate(std::span<double> u, double alpha) const override;
  double objective(std::span<const double> y) const override;
  std::uint64_t param_hash() const override;

 private:
  std::vector<double> counts_;
  std::vector<double> c_;
  double alpha_;
};

/// g = indicator of the nonnegative orthant. The objective tolerates
/// roundoff-level negativity instead of reporting +infinity for iterates
/// that are feasible up to machine precision.
class NonnegConj final : public ProxConj {
 public:
  void evaluate(std::span<double> u, double alpha) const override;
  double objective(std::span<const double> y) const override;
  std::uint64_t param_hash() const override;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace ncstomo
