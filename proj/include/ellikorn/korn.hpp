#pragma once

#include "ellikorn/fd.hpp"
#include "ellikorn/maximal.hpp"
#include "ellikorn/projection.hpp"
#include "ellikorn/smoothfield.hpp"

#include <Eigen/Sparse>

#include <optional>

namespace ellikorn {

// Sparse centered-difference discretization; rows live on cells whose full
// stencil footprint stays in the mask, dofs on every mask cell (no implicit
// zero extension). --dirichlet instead keeps rows everywhere and restricts
// dofs to deep-interior cells.
struct AssembledOperator {
  const GridDomain* dom = nullptr;
  DiffOperator op;
  int margin = 0;
  bool dirichlet = false;
  std::vector<int> dof_of_cell;   // -1 when not a dof
  std::vector<std::pair<int, int>> dof_cells;
  std::vector<std::pair<int, int>> row_cells;
  Eigen::SparseMatrix<double> mat;  // (rows * dim_w) x (dofs * dim_v)
};

AssembledOperator assemble_fd(const DiffOperator& op, const GridDomain& dom,
                              bool dirichlet = false);

struct KornP2Result {
  double C = 0.0;                // diam-normalized quotient
  double C_unnormalized = 0.0;   // same eigenvector, plain ||u||^2 term
  GridFunction witness;
  int dofs = 0;
  bool used_dense = false;
};

// Largest generalized Rayleigh quotient ||D^k u||^2 / (diam^{-2k} ||u||^2 +
// ||A u||^2); dense symmetric eigensolve up to 4096 dofs, generalized Lanczos
// with sparse LDLT solves beyond. force_mode: 0 auto, 1 dense, 2 iterative.
KornP2Result korn_constant_p2(const DiffOperator& op, const GridDomain& dom,
                              bool dirichlet = false, int force_mode = 0);

struct SampledKornOptions {
  double p = 2.0;
  std::optional<double> lorentz_q;  // Lorentz L^{p,q}
  std::optional<double> orlicz_beta;  // phi(t) = t^p (1+log(1+t))^beta
  int family = 30;
  std::uint64_t seed = 1;
};

// max over a seeded family (random smooth fields, kernel fields x cutoffs) of
// ||D^k(u - Pi u)||_X / ||A u||_X.
struct SampledKornResult {
  double max_ratio = 0.0;
  std::vector<double> ratios;
};
SampledKornResult korn_constant_sampled(const DiffOperator& op,
                                        const ProjectionOperator& P,
                                        const GridDomain& dom, const Weight& w,
                                        const SampledKornOptions& opt);

// Lorentz norm from the exact decreasing rearrangement with cell measure h^2.
double lorentz_norm(const GridFunction& f, double p, double q,
                    const std::vector<std::uint8_t>* cell_filter = nullptr);

// Orlicz N-function used throughout: phi(t) = t^p (1 + log(1+t))^beta; the
// Delta_2 / nabla_2 conditions are checked numerically on dyadic doubling
// ratios and InvalidOrlicz is raised on failure.
double orlicz_modular(const GridFunction& f, double p, double beta,
                      const std::vector<std::uint8_t>* cell_filter = nullptr);
void check_orlicz_conditions(double p, double beta);

struct PoincareResult {
  bool exact = false;  // u in ker(A): both sides vanish
  double poincare_ratio = 0.0;
  double bestapprox_ratio = 0.0;
};
PoincareResult poincare_and_bestapprox(const DiffOperator& op,
                                       const ProjectionOperator& P,
                                       const GridFunction& u, int l, double p,
                                       const Weight& w);

// Relative error of d^alpha u = Phi_alpha(A u) via DFT multipliers on an
// N x N periodic box [0,1)^2; NotElliptic when A*[xi]A[xi] degenerates at a
// resolvable real frequency.
double multiplier_reconstruction(const DiffOperator& op, const SmoothField& u,
                                 const MultiIndex& alpha, int N);

// ||D^l u||_1 / (||u||_1^{1-l/k} ||A u||_1^{l/k}) on an N x N box [0,1)^2.
double interpolation_check(const DiffOperator& op, const SmoothField& u, int l,
                           int N);

}  // namespace ellikorn
