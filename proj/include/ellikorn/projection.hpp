#pragma once

#include "ellikorn/ellipticity.hpp"
#include "ellikorn/grid.hpp"
#include "ellikorn/moments.hpp"
#include "ellikorn/taylor.hpp"

namespace ellikorn {

// The projection Pi_A^B = Pi~_A T_{m-1}^B onto ker(A), built from an
// L2(B)-dual basis of P_{m-1}(R^n;V) ordered kernel-first. All linear algebra
// is exact rational.
struct ProjectionOperator {
  DiffOperator op;
  BallSpec ball;
  int m = 0;  // deg_P(A) unless overridden
  std::vector<MultiIndex> basis_mis;    // monomial basis of P_{m-1}
  std::vector<VPolynomial> psi;         // kernel-first basis
  int kernel_count = 0;
  RatMat dual_coeffs;                   // column j = psi*_j in monomial coords
  std::vector<VPolynomial> xi_polys;    // correctors for the W-block duals
  RatMat pi_matrix;                     // matrix of Pi~_A on monomial coords

  int coord_dim() const {
    return static_cast<int>(basis_mis.size()) * op.dim_v;
  }
  std::string to_json() const;  // exact rationals as "p/q" strings
};

ProjectionOperator build_projection(const DiffOperator& op, const BallSpec& ball,
                                    const NullspaceProfile& profile,
                                    int m_override = -1);
ProjectionOperator projection_from_json(const std::string& text);

// Pi_A^B u; exact on polynomials.
VPolynomial apply_projection(const ProjectionOperator& P, const VPolynomial& u);
// Grid path (tensor-product quadrature for T_{m-1}^B).
VPolynomial apply_projection(const ProjectionOperator& P, const GridFunction& u);

// ||Pi u||_Linf(Omega) / avg_B |u| for a grid input.
double projection_stability_ratio(const ProjectionOperator& P,
                                  const GridFunction& u);

// Discrete weighted least-squares projection onto ker(A) from lattice samples
// in B; reproduces sampled kernel polynomials exactly. Used by the grid-level
// replacement machinery.
VPolynomial kernel_projection_lsq(const ProjectionOperator& P,
                                  const GridFunction& u);

// Maz'ya kernel K_{alpha,B}(x,y), |alpha| = m, via adaptive 1-D quadrature of
// the weight along the ray from x through y.
double maz_kernel(const MultiIndex& alpha, const BallSpec& ball,
                  const std::vector<double>& x, const std::vector<double>& y);

// max over interior x of |D^l(u - Pi u)(x)| / (I_{k-l} |A u|)(x); D^l by
// centered differences, the Riesz potential by direct summation with the
// self-cell handled by the cell-averaged kernel value.
double riesz_bound_check(const DiffOperator& op, const ProjectionOperator& P,
                         const GridFunction& u, int l);

// Residuals of u(x) = T_{m-1}^B u(x) + sum_{|a|=m} int_Omega K_{a,B}(x,y)
// d^a u(y) dy on Omega = [-half_side, half_side]^2 partitioned into N^2
// cells, at the given interior points. Quadrature is cellwise Gauss-Legendre
// with graded subdivision near each evaluation point.
std::vector<double> maz_representation_residuals(
    const VPolynomial& u, int m, const BallSpec& ball, double half_side, int N,
    const std::vector<std::vector<double>>& points);

}  // namespace ellikorn
