#pragma once

#include <string>
#include <vector>

#include "kreach/error.hpp"
#include "kreach/types.hpp"

namespace kreach {

/// Stacks equal-length vectors into a point matrix, one vector per row.
template <typename Scalar>
PointMatrix<Scalar> stack_rows(const std::vector<VectorX<Scalar>>& rows) {
  if (rows.empty()) throw ValidationError("empty point list");
  const Index n = rows.front().size();
  PointMatrix<Scalar> out(static_cast<Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) {
      throw ValidationError("ragged point list: row " + std::to_string(i) + " has dimension " +
                            std::to_string(rows[i].size()) + ", expected " + std::to_string(n));
    }
    out.row(static_cast<Index>(i)) = rows[i].transpose();
  }
  return out;
}

}  // namespace kreach
