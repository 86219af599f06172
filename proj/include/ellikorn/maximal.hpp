#pragma once

#include "ellikorn/grid.hpp"
#include "ellikorn/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ellikorn {

// Strictly positive grid weight. Power weights are evaluated at cell centers,
// which sit half a spacing off the grid lines, so a center placed on a grid
// corner never meets the singularity.
struct Weight {
  enum class Kind { Unit, Power, Custom };
  Kind kind = Kind::Unit;
  double exponent = 0.0;
  double cx = 0.0, cy = 0.0;
  GridFunction values;  // always materialized on the domain

  static Weight unit(const GridDomain& dom);
  static Weight power(const GridDomain& dom, double a, double cx, double cy);
  static Weight custom(GridFunction values);
};

// Lattice-aligned cube family: dyadic cubes of the bounding box plus
// half-shifted copies at every level.
struct LatticeCube {
  int i0 = 0, j0 = 0, s = 1;  // cells [i0,i0+s) x [j0,j0+s)
};

std::vector<LatticeCube> dyadic_cube_family(const GridDomain& dom,
                                            int max_depth,
                                            bool half_shifted = true);

struct MaximalOptions {
  enum class Variant { HardyLittlewood, Restricted, Sharp } variant =
      Variant::HardyLittlewood;
  double sigma = 1.0;   // restricted/sharp: require sigma Q inside Omega
  double p = 1.0;       // cube p-means
  const std::vector<VPolynomial>* script_n = nullptr;  // sharp: subspace N
};

// Pointwise maximal function over the lattice-aligned cube family; points
// admitting no eligible cube get value 0 (supremum over the empty set),
// flagged in `no_cube`.
struct MaximalResult {
  GridFunction value;
  std::vector<std::uint8_t> no_cube;
};
MaximalResult maximal(const GridFunction& f, const MaximalOptions& opt);

// sup over the family of (avg w)(avg w^{-1/(q-1)})^{q-1}, or the q = 1 form.
double muckenhoupt_constant(const Weight& w, double q,
                            const std::vector<LatticeCube>& cubes);

// Calderon-Zygmund stopping-time cubes at threshold alpha on the dyadic cube
// Q0 (the largest aligned power-of-two cube inside the mask's bounding box).
struct CZCube {
  int i0 = 0, j0 = 0, s = 1;
  double avg = 0.0;
  int level = 0;
};
struct CZDecomposition {
  CZCube root;
  std::vector<CZCube> cubes;  // pairwise disjoint, alpha < avg <= 4 alpha
};
CZDecomposition cz_decomposition(const GridFunction& f, double alpha);

struct RatioResult {
  bool exact = false;  // 0/0: both sides vanish
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
};

// inf over N of ||f - pi||_{L^q_w} divided by the restricted sharp maximal
// function's L^q_w norm.
RatioResult fefferman_stein_check(const GridFunction& f, double sigma1,
                                  double q, const Weight& w,
                                  const std::vector<VPolynomial>& script_n);

// Weighted least-squares best approximation from N (the numerator above).
double best_approx_distance(const GridFunction& f, double q, const Weight& w,
                            const std::vector<VPolynomial>& script_n);

}  // namespace ellikorn
