#pragma once

#include "ellikorn/chains.hpp"
#include "ellikorn/ellipticity.hpp"
#include "ellikorn/grid.hpp"
#include "ellikorn/maximal.hpp"

#include <optional>

namespace ellikorn {

// Subspace N of P_m(R^n; E) driving the moment corrections; default
// N = D^k ker(A) for a C-elliptic operator.
struct MomentSubspace {
  std::vector<VPolynomial> basis;  // linearly independent, dim E components

  int dim_e() const { return basis.empty() ? 0 : basis[0].dim(); }
  static MomentSubspace constants(int dim_e);
  static MomentSubspace gradient_of_kernel(const DiffOperator& op,
                                           const NullspaceProfile& profile);
};

struct MomentProjectionResult {
  VPolynomial value{2, 1};  // element of N
  double stability = 0.0;   // ||P f||_Linf(sigma2 W) / int |f|
};

// P f in N solving int_W eta (P f) . pi = int f . pi for all basis pi, with
// eta the normalized tensor bump on the overlap ball.
MomentProjectionResult moment_projection(const GridFunction& f,
                                         const QCube& eta_ball,
                                         const MomentSubspace& N);

struct Decomposition {
  const ChainCover* cover = nullptr;
  std::vector<GridFunction> pieces;  // indexed like cover cubes
  GridFunction source;
};

// Pieces T_i f: local parts from a partition of unity subordinate to the
// cover cubes, corrected by eta-weighted moment projections transported along
// each chain toward the central cube. Requires zero N-moments on Omega (use
// remove_moments first otherwise).
Decomposition decompose(const GridFunction& f, const ChainCover& cc,
                        const MomentSubspace& N);

// f - eta_0 P_0 f with P_0 the global moment fix on the central ball.
GridFunction remove_moments(const GridFunction& f, const ChainCover& cc,
                            const MomentSubspace& N);

double max_moment_defect(const GridFunction& f, const MomentSubspace& N);

struct DecompositionCheck {
  double lower_ratio = 0.0;  // ||f|| / (sum ||T_i f||^q)^{1/q}
  double upper_ratio = 0.0;  // (sum ||T_i f||^q)^{1/q} / ||f||
  double majorant_constant = 0.0;  // |T_i f| <= c 1_{W_i} M(1_Omega f)
};
DecompositionCheck verify_decomposition(const Decomposition& d, double q,
                                        const Weight& w);

// ---------------------------------------------------------------- half-space

// Replacement sequence on a tangentially periodic half-space strip: lattice
// ball cover at scale 2^{-j} with mirror-reflected balls, graded cutoffs of
// smoothness class >= k.
struct ReplacementResult {
  GridFunction Tj;    // T_j u
  GridFunction Ij;    // I_j[u]  (vanishes near the boundary band)
  GridFunction IIj;   // II_j[u]
  double sup_T_minus_u = 0.0;  // ||T_j u - u||_inf
  double IIj_wk1 = 0.0;        // ||II_j||_{W^{k,1}} by centered differences
  double au_l1_strip = 0.0;    // ||A u||_{L^1} on the achieved strip
  double strip_lo = 0.0, strip_hi = 0.0;  // measured support band of II_j
};

ReplacementResult replacement_sequence(const GridFunction& u,
                                       const DiffOperator& op,
                                       const NullspaceProfile& profile, int j);

}  // namespace ellikorn
