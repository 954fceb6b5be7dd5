#include "ncstomo/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace ncstomo {

SparseMap::SparseMap(int n_image, int n_angles, int n_det,
                     std::vector<CooTriplet> triplets)
    : n_(n_image), n_angles_(n_angles), n_det_(n_det) {
  std::size_t rows = static_cast<std::size_t>(n_angles) * n_det;
  std::size_t cols = static_cast<std::size_t>(n_image) * n_image;
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= static_cast<std::int64_t>(rows) || t.col < 0 ||
        t.col >= static_cast<std::int64_t>(cols))
      throw std::invalid_argument("sparse triplet out of range");
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const CooTriplet& a, const CooTriplet& b) { return a.row < b.row; });

  row_ptr_.assign(rows + 1, 0);
  col_idx_.resize(triplets.size());
  val_.resize(triplets.size());
  for (const auto& t : triplets) ++row_ptr_[t.row + 1];
  for (std::size_t r = 0; r < rows; ++r) row_ptr_[r + 1] += row_ptr_[r];
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    col_idx_[i] = static_cast<std::size_t>(triplets[i].col);
    val_[i] = triplets[i].value;
  }

  // Transpose via counting sort by column; preserves row order within a column.
  t_row_ptr_.assign(cols + 1, 0);
  t_col_idx_.resize(triplets.size());
  t_val_.resize(triplets.size());
  for (std::size_t i = 0; i < col_idx_.size(); ++i) ++t_row_ptr_[col_idx_[i] + 1];
  for (std::size_t c = 0; c < cols; ++c) t_row_ptr_[c + 1] += t_row_ptr_[c];
  std::vector<std::size_t> cursor(t_row_ptr_.begin(), t_row_ptr_.end() - 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) {
      std::size_t dst = cursor[col_idx_[i]]++;
      t_col_idx_[dst] = r;
      t_val_[dst] = val_[i];
    }
  }
}

std::size_t SparseMap::domain_size() const {
  return static_cast<std::size_t>(n_) * n_;
}

std::size_t SparseMap::range_size() const {
  return static_cast<std::size_t>(n_angles_) * n_det_;
}

void SparseMap::forward(std::span<const double> x, std::span<double> out) const {
  for (std::size_t r = 0; r + 1 < row_ptr_.size(); ++r) {
    double acc = 0.0;
    for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i)
      acc += val_[i] * x[col_idx_[i]];
    out[r] = acc;
  }
}

void SparseMap::adjoint(std::span<const double> u, std::span<double> out) const {
  for (std::size_t c = 0; c + 1 < t_row_ptr_.size(); ++c) {
    double acc = 0.0;
    for (std::size_t i = t_row_ptr_[c]; i < t_row_ptr_[c + 1]; ++i)
      acc += t_val_[i] * u[t_col_idx_[i]];
    out[c] = acc;
  }
}

std::vector<CooTriplet> SparseMap::to_triplets() const {
  std::vector<CooTriplet> out;
  out.reserve(val_.size());
  for (std::size_t r = 0; r + 1 < row_ptr_.size(); ++r)
    for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i)
      out.push_back({static_cast<std::int64_t>(r), static_cast<std::int64_t>(col_idx_[i]),
                     val_[i]});
  return out;
}

std::vector<double> SparseMap::row_sums() const {
  std::vector<double> out(row_ptr_.size() - 1, 0.0);
  for (std::size_t r = 0; r + 1 < row_ptr_.size(); ++r)
    for (std::size_t i = row_ptr_[r]; i < row_ptr_[r + 1]; ++i) out[r] += val_[i];
  return out;
}

}  // namespace ncstomo
