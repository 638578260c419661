#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pgg/common.hpp"

namespace pgg {

/// Square sparse matrix in compressed sparse column form. Row indices are
/// ascending within each column.
class CscMatrix {
 public:
  CscMatrix() = default;
  CscMatrix(std::size_t dim, std::vector<std::size_t> col_ptr, std::vector<AgentId> row_idx,
            std::vector<double> values);

  std::size_t dim() const noexcept { return col_ptr_.size() - 1; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  std::span<const AgentId> column_rows(std::size_t j) const noexcept {
    return {row_idx_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }
  std::span<const double> column_values(std::size_t j) const noexcept {
    return {values_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }

  double column_sum(std::size_t j) const;

  /// Entry (i, j), zero when outside the sparsity pattern.
  double at(std::size_t i, std::size_t j) const;

  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;

  CscMatrix transposed() const;

  bool operator==(const CscMatrix&) const = default;

 private:
  std::vector<std::size_t> col_ptr_{0};
  std::vector<AgentId> row_idx_;
  std::vector<double> values_;
};

}  // namespace pgg
