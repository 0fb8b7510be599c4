#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hessgeo/errors.hpp"

namespace hessgeo {

/// Dense rank-r array over an n-dimensional index set, row-major.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int rank) : dim_(dim), rank_(rank), data_(size_for(dim, rank), 0.0) {}

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  template <class... I>
  double& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <class... I>
  double operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  double max_abs() const;

  /// Largest componentwise |a - b|; throws on shape mismatch.
  friend double max_abs_difference(const Tensor& a, const Tensor& b);

 private:
  static std::size_t size_for(int dim, int rank) {
    std::size_t s = 1;
    for (int r = 0; r < rank; ++r) s *= static_cast<std::size_t>(dim);
    return s;
  }

  template <class... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return off;
  }

  int dim_ = 0;
  int rank_ = 0;
  std::vector<double> data_;
};

inline double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

inline double max_abs_difference(const Tensor& a, const Tensor& b) {
  if (a.dim_ != b.dim_ || a.rank_ != b.rank_) throw DimensionError("tensor shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data_.size(); ++i) {
    m = std::max(m, std::fabs(a.data_[i] - b.data_[i]));
  }
  return m;
}

}  // namespace hessgeo
