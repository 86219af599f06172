#pragma once

#include "ellikorn/multiindex.hpp"
#include "ellikorn/polynomial.hpp"

#include <optional>

namespace ellikorn {

// Ball with the fixed mollifier family w(y) = c_rho (1 - |y-c|^2/r^2)^rho,
// normalized so the integral is 1; rho = 0 encodes the flat weight w == 1/|B|.
// Center and radius are exact rationals so that every moment stays rational.
struct BallSpec {
  RatVec center;
  Rat radius;
  int bump_exponent = 0;  // rho; 0 = flat

  int n() const { return static_cast<int>(center.size()); }
  static BallSpec unit(int n, int rho);
  static BallSpec make(const std::vector<double>& c, double r, int rho);
};

// Exact value of an unnormalized ball integral, a rational multiple of an
// integer power of pi.
struct PiRational {
  Rat coef{0};
  int pi_power = 0;
  double value() const;
};

// Normalized moment of the unit-ball weight: int w(y) y^tau dy with
// int w = 1, on B(0,1). Exactly 0 for any tau with an odd entry.
Rat unit_ball_moment_normalized(const MultiIndex& tau, int rho);

// Raw integral int_{B(0,r)} (1-|y|^2/r^2)^rho y^alpha dy  (rho = 0: flat).
PiRational ball_moment(const MultiIndex& alpha, const Rat& radius, int rho);
// Same but scaled so the weight has unit integral.
Rat ball_moment_normalized(const MultiIndex& alpha, const Rat& radius, int rho);

// Moment of the normalized weight on ball B against the monomial y^gamma in
// ambient coordinates (binomial shift to the center).
Rat weight_moment(const BallSpec& ball, const MultiIndex& gamma);

// Normalized L2(B) inner product (1/|B| scaling folded in consistently):
// <p,q> = int_B p.q dy / |B|; exact, and the one inner product used for all
// dual bases and Gram systems.
Rat l2_pair(const BallSpec& ball, const VPolynomial& p, const VPolynomial& q);

// Pointwise weight evaluation (float; used only on grid/quadrature paths).
double weight_value(const BallSpec& ball, const std::vector<double>& y);

}  // namespace ellikorn
