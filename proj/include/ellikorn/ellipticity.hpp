#pragma once

#include "ellikorn/diffop.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ellikorn {

enum class CVerdict { CElliptic, NotCElliptic, Undecided };

struct ComplexWitness {
  std::vector<std::complex<double>> xi;  // unit vector in C^n
  std::vector<std::complex<double>> v;   // unit right singular vector
  double residual = 0.0;                 // ||A[xi] v|| / ||v||
};

struct NullspaceProfile {
  // (degree l, exact basis of Z_l = ker(A) ∩ P_l^h(R^n; V)).
  std::vector<std::pair<int, std::vector<VPolynomial>>> per_degree;
  CVerdict verdict = CVerdict::Undecided;
  std::optional<int> deg_p;  // smallest l with Z_l = {0}, when CElliptic
  std::optional<ComplexWitness> witness;

  std::vector<int> kernel_dims() const;
  int total_kernel_dim() const;
  // Concatenated bases of every Z_l (the full nullspace for CElliptic ops).
  std::vector<VPolynomial> kernel_basis() const;
};

// Exact rational kernel basis of A : P_l^h(R^n;V) -> P_{l-k}^h(R^n;W).
std::vector<VPolynomial> kernel_homogeneous(const DiffOperator& op, int l);

struct EllipticityReport {
  bool elliptic = false;
  double min_singular_value = 0.0;
  std::vector<double> argmin_xi;  // real unit vector
};

// Minimizes the smallest singular value of A[xi] over the real unit sphere:
// quasi-random sampling plus local descent refinement.
EllipticityReport is_elliptic(const DiffOperator& op, int samples = 4096,
                              double tol = 1e-6, std::uint64_t seed = 1);

// Derivative-free descent over the complex unit sphere with random restarts
// and a Gauss-Newton polish; absence of a witness is a valid return.
std::optional<ComplexWitness> complex_witness_search(const DiffOperator& op,
                                                     int restarts = 24,
                                                     double tol = 1e-8,
                                                     std::uint64_t seed = 1);
// Achieved infimum of sigma_min over the search (for no-witness reports).
double complex_symbol_infimum(const DiffOperator& op, int restarts = 24,
                              std::uint64_t seed = 1);

// One Gauss-Newton step toward A[xi]v = 0 on the unit sphere; returns the
// polished pair.
ComplexWitness newton_polish(const DiffOperator& op, ComplexWitness w);

// Exact rational-complex residual^2 / |v|^2 of a candidate witness.
Rat witness_residual2_exact(const DiffOperator& op, const ComplexWitness& w);

// Z_l for l = 0,1,... with the early-exit rule (Z_l = 0 forces all later
// Z to vanish); falls back to the complex witness search past max_degree.
NullspaceProfile c_ellipticity(const DiffOperator& op, int max_degree = 20,
                               double witness_tol = 1e-8,
                               std::uint64_t seed = 1);

struct ImageIntersection {
  int dimension = 0;
  std::vector<std::vector<double>> basis;  // vectors in W
  std::vector<std::vector<double>> sampled_xi;
};

// Intersects column spaces of A[xi] over sampled real xi until the dimension
// is stable for 10 consecutive samples. Requires an elliptic operator.
ImageIntersection cancellation_image_intersection(const DiffOperator& op,
                                                  int samples = 64,
                                                  std::uint64_t seed = 1);

}  // namespace ellikorn
