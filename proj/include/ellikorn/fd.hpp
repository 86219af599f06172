#pragma once

#include "ellikorn/diffop.hpp"
#include "ellikorn/grid.hpp"

namespace ellikorn {

// Centered second-order stencils (exact on quadratics at interior nodes).
// Supported per-axis derivative orders: 0..4.

// Widest per-axis offset needed by any term of op.
int fd_margin(const DiffOperator& op);
int fd_margin_order(int derivative_order);

// True when every cell referenced by a stencil of half-width `margin`
// centered at (i, j) lies in the mask.
bool footprint_interior(const GridDomain& dom, int i, int j, int margin);

// Applies op to u by centered differences. Cells whose footprint leaves the
// mask are set to zero and flagged invalid.
struct FdField {
  GridFunction val;
  std::vector<std::uint8_t> valid;  // per cell
  bool is_valid(const GridDomain& d, int i, int j) const {
    return valid[d.idx(i, j)] != 0;
  }
};

FdField apply_fd(const DiffOperator& op, const GridFunction& u);

// All partial derivatives of exact order l, stacked with sqrt(l!/alpha!)
// weights so the euclidean norm matches the Frobenius norm of D^l u.
FdField fd_gradient_l(const GridFunction& u, int l);

// 1-D centered stencil: offsets and coefficients (unscaled by h).
const std::vector<std::pair<int, double>>& stencil_1d(int order);

}  // namespace ellikorn
