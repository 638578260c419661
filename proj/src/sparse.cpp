#include "pgg/sparse.hpp"

#include <algorithm>
#include <numeric>

namespace pgg {

CscMatrix::CscMatrix(std::size_t dim, std::vector<std::size_t> col_ptr, std::vector<AgentId> row_idx,
                     std::vector<double> values)
    : col_ptr_(std::move(col_ptr)), row_idx_(std::move(row_idx)), values_(std::move(values)) {
  if (col_ptr_.size() != dim + 1 || col_ptr_.front() != 0 || col_ptr_.back() != row_idx_.size() ||
      row_idx_.size() != values_.size())
    throw InvalidInput("inconsistent CSC arrays");
  for (std::size_t j = 0; j < dim; ++j) {
    if (col_ptr_[j] > col_ptr_[j + 1]) throw InvalidInput("column pointers not monotone");
    auto rows = column_rows(j);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (rows[k] >= dim) throw InvalidInput("row index out of range");
      if (k > 0 && rows[k] <= rows[k - 1]) throw InvalidInput("row indices not strictly ascending");
    }
  }
}

double CscMatrix::column_sum(std::size_t j) const {
  auto v = column_values(j);
  return std::accumulate(v.begin(), v.end(), 0.0);
}

double CscMatrix::at(std::size_t i, std::size_t j) const {
  auto rows = column_rows(j);
  auto it = std::lower_bound(rows.begin(), rows.end(), static_cast<AgentId>(i));
  if (it == rows.end() || *it != i) return 0.0;
  return column_values(j)[static_cast<std::size_t>(it - rows.begin())];
}

void CscMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim() || y.size() != dim()) throw InvalidInput("dimension mismatch in multiply");
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t j = 0; j < dim(); ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    auto rows = column_rows(j);
    auto vals = column_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) y[rows[k]] += vals[k] * xj;
  }
}

CscMatrix CscMatrix::transposed() const {
  const std::size_t n = dim();
  std::vector<std::size_t> ptr(n + 1, 0);
  for (AgentId r : row_idx_) ++ptr[r + 1];
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  std::vector<AgentId> rows(row_idx_.size());
  std::vector<double> vals(values_.size());
  std::vector<std::size_t> fill(ptr.begin(), ptr.end() - 1);
  // Walking columns in order keeps the new row indices ascending.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
      const std::size_t dst = fill[row_idx_[k]]++;
      rows[dst] = static_cast<AgentId>(j);
      vals[dst] = values_[k];
    }
  }
  return CscMatrix(n, std::move(ptr), std::move(rows), std::move(vals));
}

}  // namespace pgg
