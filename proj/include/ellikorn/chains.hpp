#pragma once

#include "ellikorn/grid.hpp"
#include "ellikorn/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace ellikorn {

// Dyadic Whitney cube in block units (a block is granularity x granularity
// cells): cells [i0, i0+s*g) x [j0, j0+s*g), side s blocks.
struct WhitneyCube {
  int bi0 = 0, bj0 = 0;  // block coordinates
  int side = 1;          // blocks, power of two
  int dist = 0;          // Chebyshev block distance to the complement
};

// Whitney cover of the mask: side(Q) <= dist(Q, complement) <= 4 side(Q) in
// the block metric (adjacent complement block = distance 1).
std::vector<WhitneyCube> whitney_cover(const GridDomain& dom);

// Axis-aligned square in exact sixteenth-cell integer units; used for the
// chain cover and its overlap balls. Fine cell centers sit at 16*i + 8.
struct QCube {
  long cx = 0, cy = 0;  // center
  long hs = 0;          // half-side
  long lo_x() const { return cx - hs; }
  long hi_x() const { return cx + hs; }
  long lo_y() const { return cy - hs; }
  long hi_y() const { return cy + hs; }
};

struct OverlapBall {
  QCube ball;
  int a = 0, b = 0;  // cube indices of the supporting pair
};

struct ChainCover {
  const GridDomain* dom = nullptr;
  std::vector<WhitneyCube> dyadic;
  std::vector<QCube> cubes;   // grown cover cubes, same indexing
  int central = 0;
  std::vector<std::vector<int>> chains;  // chains[i]: W_i, ..., W_central
  std::vector<OverlapBall> balls;        // one per tree edge, deduplicated
  std::map<std::pair<int, int>, int> ball_of_edge;  // unordered pair -> index
  Rat sigma1{17, 16};
  double sigma2_achieved = 1.0;

  int ball_index(int a, int b) const;
  std::string to_json() const;
};

ChainCover emanating_chains(const std::vector<WhitneyCube>& cover,
                            const GridDomain& dom);

struct ChainCheckReport {
  bool c1_containment = false;   // sigma1 W inside Omega (lattice sampled)
  bool c1_overlap = false;       // sum 1_{sigma1 W} <= sigma2
  bool c2_monotone = false;      // W_{i,l1} subset sigma2 W_{i,l2}
  bool c2_balls = false;         // W_l cup W_{l+1} subset sigma2 B
  bool c3_local_finite = true;   // finite cover: automatic
  bool covers_all_cells = false;
  bool diam_bound = false;       // diam(Omega) <= sigma2 diam(W_0)
  int max_overlap_count = 0;     // of {sigma1 W}
  int max_ball_overlap = 0;      // of the recorded ball family
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double sigma2_chain = 0.0;  // monotone-containment component of sigma2
  double sigma1_capacity = 0.0;  // largest admissible sigma1 over the cover
  std::vector<int> offending_cubes;

  bool all_pass() const {
    return c1_containment && c1_overlap && c2_monotone && c2_balls &&
           c3_local_finite && covers_all_cells;
  }
};

// Exhaustive exact verification of (C1)-(C3) plus achieved constants; an
// optional sigma1 override supports negative tests.
ChainCheckReport check_chain_properties(const ChainCover& cc,
                                        const GridDomain& dom,
                                        const Rat* sigma1_override = nullptr);

}  // namespace ellikorn
