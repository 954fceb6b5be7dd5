#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ncstomo {

/// Matrix-free linear operator with an exact algebraic adjoint.
/// Invariant for every concrete map: <forward(x), u> == <x, adjoint(u)>
/// up to floating-point roundoff, because both sides use the same weights.
class LinearMap {
 public:
  virtual ~LinearMap() = default;
  virtual std::size_t domain_size() const = 0;
  virtual std::size_t range_size() const = 0;
  virtual void forward(std::span<const double> x, std::span<double> out) const = 0;
  virtual void adjoint(std::span<const double> u, std::span<double> out) const = 0;
};

std::vector<double> forward(const LinearMap& a, std::span<const double> x);
std::vector<double> adjoint(const LinearMap& a, std::span<const double> u);

class IdentityMap final : public LinearMap {
 public:
  explicit IdentityMap(std::size_t n) : n_(n) {}
  std::size_t domain_size() const override { return n_; }
  std::size_t range_size() const override { return n_; }
  void forward(std::span<const double> x, std::span<double> out) const override;
  void adjoint(std::span<const double> u, std::span<double> out) const override;

 private:
  std::size_t n_;
};

/// Vertical stack of weighted blocks: x -> (w_1 A_1 x, ..., w_m A_m x).
class StackedMap final : public LinearMap {
 public:
  struct Block {
    double weight;
    std::shared_ptr<const LinearMap> map;
  };

  explicit StackedMap(std::vector<Block> blocks);
  std::size_t domain_size() const override { return domain_; }
  std::size_t range_size() const override { return range_; }
  void forward(std::span<const double> x, std::span<double> out) const override;
  void adjoint(std::span<const double> u, std::span<double> out) const override;

  std::size_t block_count() const { return blocks_.size(); }
  std::size_t block_offset(std::size_t i) const { return offsets_[i]; }
  std::size_t block_size(std::size_t i) const { return blocks_[i].map->range_size(); }
  const Block& block(std::size_t i) const { return blocks_[i]; }

 private:
  std::vector<Block> blocks_;
  std::vector<std::size_t> offsets_;
  std::size_t domain_ = 0;
  std::size_t range_ = 0;
};

/// Symmetric normal operator A^T A of a wrapped map.
class NormalMap final : public LinearMap {
 public:
  explicit NormalMap(std::shared_ptr<const LinearMap> a) : a_(std::move(a)) {}
  std::size_t domain_size() const override { return a_->domain_size(); }
  std::size_t range_size() const override { return a_->domain_size(); }
  void forward(std::span<const double> x, std::span<double> out) const override;
  void adjoint(std::span<const double> u, std::span<double> out) const override {
    forward(u, out);
  }

 private:
  std::shared_ptr<const LinearMap> a_;
};

/// Projection geometry: any map whose range is a sinogram.
class ProjectionMap : public LinearMap {
 public:
  virtual int n_angles() const = 0;
  virtual int n_detectors() const = 0;
};

}  // namespace ncstomo
