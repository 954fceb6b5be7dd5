#include "ncstomo/linear_map.hpp"

#include <algorithm>
#include <stdexcept>

namespace ncstomo {

std::vector<double> forward(const LinearMap& a, std::span<const double> x) {
  std::vector<double> out(a.range_size());
  a.forward(x, out);
  return out;
}

std::vector<double> adjoint(const LinearMap& a, std::span<const double> u) {
  std::vector<double> out(a.domain_size());
  a.adjoint(u, out);
  return out;
}

void IdentityMap::forward(std::span<const double> x, std::span<double> out) const {
  std::copy(x.begin(), x.end(), out.begin());
}

void IdentityMap::adjoint(std::span<const double> u, std::span<double> out) const {
  std::copy(u.begin(), u.end(), out.begin());
}

StackedMap::StackedMap(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("StackedMap needs at least one block");
  domain_ = blocks_.front().map->domain_size();
  for (const auto& b : blocks_) {
    if (b.map->domain_size() != domain_)
      throw std::invalid_argument("StackedMap blocks must share a domain");
    offsets_.push_back(range_);
    range_ += b.map->range_size();
  }
}

void StackedMap::forward(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    auto seg = out.subspan(offsets_[i], blocks_[i].map->range_size());
    blocks_[i].map->forward(x, seg);
    for (double& s : seg) s *= blocks_[i].weight;
  }
}

void StackedMap::adjoint(std::span<const double> u, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> tmp(domain_);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    auto seg = u.subspan(offsets_[i], blocks_[i].map->range_size());
    blocks_[i].map->adjoint(seg, tmp);
    for (std::size_t j = 0; j < domain_; ++j) out[j] += blocks_[i].weight * tmp[j];
  }
}

void NormalMap::forward(std::span<const double> x, std::span<double> out) const {
  std::vector<double> mid(a_->range_size());
  a_->forward(x, mid);
  a_->adjoint(mid, out);
}

}  // namespace ncstomo
