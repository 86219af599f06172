#pragma once

#include "ellikorn/diffop.hpp"
#include "ellikorn/moments.hpp"

namespace ellikorn {

class GridFunction;  // grid.hpp

// Averaged Taylor polynomial T_m^B u of order m, mollified over the ball's
// weight. Exact moment arithmetic on polynomial inputs; m < 0 gives the zero
// polynomial.
VPolynomial averaged_taylor(const VPolynomial& u, int m, const BallSpec& ball);

// Grid path: midpoint rule on cells fully inside B plus boundary-cell
// clipping by subdivision (depth 3). Result has double coefficients promoted
// to exact dyadic rationals.
VPolynomial averaged_taylor(const GridFunction& u, int m, const BallSpec& ball);

}  // namespace ellikorn
