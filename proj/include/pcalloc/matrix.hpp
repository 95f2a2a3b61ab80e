#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pcalloc {

/// Dense row-major square matrix. Sizes here are tiny (teams in a season),
/// so no expression templates or BLAS.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

  [[nodiscard]] std::size_t size() const noexcept { return n_; }

  T& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

  [[nodiscard]] std::span<const T> row(std::size_t r) const {
    return std::span<const T>(data_).subspan(r * n_, n_);
  }
  [[nodiscard]] std::span<const T> values() const { return data_; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

}  // namespace pcalloc
