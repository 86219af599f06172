#include "ellikorn/chains.hpp"

#include <nlohmann/json.hpp>

#include <climits>

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <set>

namespace ellikorn {

using json = nlohmann::ordered_json;

namespace {

struct BlockGrid {
  int nbx = 0, nby = 0, g = 1;
  std::vector<std::uint8_t> mask;
  std::vector<int> dist;  // Chebyshev block distance to complement

  bool inside(int bi, int bj) const {
    return bi >= 0 && bi < nbx && bj >= 0 && bj < nby &&
           mask[static_cast<std::size_t>(bj) * nbx + bi];
  }
  int d(int bi, int bj) const {
    return dist[static_cast<std::size_t>(bj) * nbx + bi];
  }
};

BlockGrid block_grid(const GridDomain& dom) {
  BlockGrid b;
  b.g = dom.granularity;
  b.nbx = dom.nx / b.g;
  b.nby = dom.ny / b.g;
  b.mask.assign(static_cast<std::size_t>(b.nbx) * b.nby, 0);
  for (int bj = 0; bj < b.nby; ++bj)
    for (int bi = 0; bi < b.nbx; ++bi) {
      bool all = true;
      for (int j = bj * b.g; j < (bj + 1) * b.g && all; ++j)
        for (int i = bi * b.g; i < (bi + 1) * b.g && all; ++i)
          if (!dom.inside(i, j)) all = false;
      b.mask[static_cast<std::size_t>(bj) * b.nbx + bi] = all ? 1 : 0;
    }
  // BFS distance in the Chebyshev metric.
  b.dist.assign(b.mask.size(), 0);
  std::deque<std::pair<int, int>> q;
  for (int bj = 0; bj < b.nby; ++bj)
    for (int bi = 0; bi < b.nbx; ++bi) {
      if (!b.inside(bi, bj)) continue;
      bool edge = false;
      for (int dj = -1; dj <= 1 && !edge; ++dj)
        for (int di = -1; di <= 1 && !edge; ++di)
          if (!b.inside(bi + di, bj + dj)) edge = true;
      if (edge) {
        b.dist[static_cast<std::size_t>(bj) * b.nbx + bi] = 1;
        q.emplace_back(bi, bj);
      }
    }
  while (!q.empty()) {
    auto [bi, bj] = q.front();
    q.pop_front();
    int d0 = b.d(bi, bj);
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        int ii = bi + di, jj = bj + dj;
        if (!b.inside(ii, jj)) continue;
        auto& dd = b.dist[static_cast<std::size_t>(jj) * b.nbx + ii];
        if (dd != 0) continue;
        dd = d0 + 1;
        q.emplace_back(ii, jj);
      }
  }
  return b;
}

int cube_dist(const BlockGrid& b, int bi0, int bj0, int s) {
  int d = INT_MAX;
  for (int bj = bj0; bj < bj0 + s; ++bj)
    for (int bi = bi0; bi < bi0 + s; ++bi) {
      if (!b.inside(bi, bj)) return 0;
      d = std::min(d, b.d(bi, bj));
    }
  return d;
}

}  // namespace

std::vector<WhitneyCube> whitney_cover(const GridDomain& dom) {
  if (dom.periodic_x)
    throw UsageError("whitney_cover expects a bounded (non-periodic) domain");
  BlockGrid b = block_grid(dom);
  std::vector<std::uint8_t> covered(b.mask.size(), 0);
  std::set<std::tuple<int, int, int>> chosen;
  for (int bj = 0; bj < b.nby; ++bj)
    for (int bi = 0; bi < b.nbx; ++bi) {
      if (!b.inside(bi, bj) || covered[static_cast<std::size_t>(bj) * b.nbx + bi])
        continue;
      int d = b.d(bi, bj);
      int smax = 1;
      while (2 * smax <= d) smax *= 2;
      bool placed = false;
      for (int s = smax; s >= 1 && !placed; s /= 2) {
        int i0 = (bi / s) * s, j0 = (bj / s) * s;
        int dq = cube_dist(b, i0, j0, s);
        if (dq >= s && dq <= 4 * s) {
          chosen.emplace(i0, j0, s);
          for (int jj = j0; jj < j0 + s; ++jj)
            for (int ii = i0; ii < i0 + s; ++ii)
              covered[static_cast<std::size_t>(jj) * b.nbx + ii] = 1;
          placed = true;
        }
      }
      if (!placed)
        throw UnreachableCube("no Whitney cube admissible at block (" +
                              std::to_string(bi) + "," + std::to_string(bj) + ")");
    }
  std::vector<WhitneyCube> cover;
  for (const auto& [i0, j0, s] : chosen) {
    WhitneyCube c;
    c.bi0 = i0;
    c.bj0 = j0;
    c.side = s;
    c.dist = cube_dist(b, i0, j0, s);
    cover.push_back(c);
  }
  return cover;
}

namespace {

// Grown cover cube in sixteenth-cell units: the dyadic cube extended by one
// cell when no complement block is adjacent (dist >= 2), else by 1/4 cell.
QCube grown_cube(const WhitneyCube& w, int g) {
  QCube q;
  long side_cells = static_cast<long>(w.side) * g;
  q.cx = (2L * w.bi0 * g + side_cells) * 8;  // = 16 * (cells to center)
  q.cy = (2L * w.bj0 * g + side_cells) * 8;
  long grow = w.dist >= 2 ? 16 : 4;  // one cell or a quarter cell
  q.hs = side_cells * 8 + grow;
  return q;
}

bool open_contains(const QCube& q, long px, long py) {
  return px > q.lo_x() && px < q.hi_x() && py > q.lo_y() && py < q.hi_y();
}

// Needed dilation so that sigma * outer contains inner: exact rational.
Rat needed_sigma(const QCube& inner, const QCube& outer) {
  long dx = std::max(std::labs(inner.cx - outer.cx),
                     std::labs(inner.cy - outer.cy));
  return Rat(dx + inner.hs) / Rat(outer.hs);
}

}  // namespace

int ChainCover::ball_index(int a, int b) const {
  auto key = std::minmax(a, b);
  auto it = ball_of_edge.find({key.first, key.second});
  return it == ball_of_edge.end() ? -1 : it->second;
}

ChainCover emanating_chains(const std::vector<WhitneyCube>& cover,
                            const GridDomain& dom) {
  if (cover.empty()) throw EmptyMask("empty Whitney cover");
  ChainCover cc;
  cc.dom = &dom;
  cc.dyadic = cover;
  const int g = dom.granularity;
  for (const auto& w : cover) cc.cubes.push_back(grown_cube(w, g));
  const int N = static_cast<int>(cover.size());

  // Central cube: largest, ties by lexicographic center.
  cc.central = 0;
  for (int i = 1; i < N; ++i) {
    const auto &a = cover[i], &b = cover[cc.central];
    if (a.side > b.side ||
        (a.side == b.side &&
         std::make_pair(cc.cubes[i].cy, cc.cubes[i].cx) <
             std::make_pair(cc.cubes[cc.central].cy, cc.cubes[cc.central].cx)))
      cc.central = i;
  }

  // Adjacency with the largest open-intersection ball per edge. An edge is
  // "good" when the ball is wide enough to contain fine lattice centers
  // (centers sit at 16i + 8, so width > 16 suffices).
  struct Edge {
    int to;
    QCube ball;
    bool good;
  };
  std::vector<std::vector<Edge>> adj(N);
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b) {
      long lox = std::max(cc.cubes[a].lo_x(), cc.cubes[b].lo_x());
      long hix = std::min(cc.cubes[a].hi_x(), cc.cubes[b].hi_x());
      long loy = std::max(cc.cubes[a].lo_y(), cc.cubes[b].lo_y());
      long hiy = std::min(cc.cubes[a].hi_y(), cc.cubes[b].hi_y());
      if (hix - lox <= 0 || hiy - loy <= 0) continue;
      QCube ball;
      ball.cx = (lox + hix) / 2;
      ball.cy = (loy + hiy) / 2;
      ball.hs = std::min(hix - lox, hiy - loy) / 2;
      if (ball.hs <= 0) continue;
      bool good = std::min(hix - lox, hiy - loy) > 16;
      adj[a].push_back({b, ball, good});
      adj[b].push_back({a, ball, good});
    }

  // Shortest paths from the central cube, weighted to prefer larger cubes and
  // lattice-bearing overlaps.
  std::vector<double> dist(N, 1e300);
  std::vector<int> parent(N, -1);
  std::vector<QCube> parent_ball(N);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[cc.central] = 0.0;
  pq.emplace(0.0, cc.central);
  while (!pq.empty()) {
    auto [d0, u] = pq.top();
    pq.pop();
    if (d0 > dist[u]) continue;
    for (const auto& e : adj[u]) {
      double w = 1.0 / cover[u].side + 1.0 / cover[e.to].side +
                 (e.good ? 0.0 : 1000.0);
      if (dist[u] + w < dist[e.to] - 1e-12) {
        dist[e.to] = dist[u] + w;
        parent[e.to] = u;
        parent_ball[e.to] = e.ball;
        pq.emplace(dist[e.to], e.to);
      }
    }
  }
  for (int i = 0; i < N; ++i)
    if (dist[i] >= 1e300)
      throw UnreachableCube("cube " + std::to_string(i) +
                            " not connected at cover granularity");

  cc.chains.resize(N);
  for (int i = 0; i < N; ++i) {
    int u = i;
    cc.chains[i].push_back(u);
    while (u != cc.central) {
      int p = parent[u];
      auto key = std::minmax(u, p);
      if (!cc.ball_of_edge.count({key.first, key.second})) {
        cc.ball_of_edge[{key.first, key.second}] =
            static_cast<int>(cc.balls.size());
        cc.balls.push_back({parent_ball[u], key.first, key.second});
      }
      u = p;
      cc.chains[i].push_back(u);
    }
  }

  // Achieved sigma2: max over chain containments, ball containments, and the
  // overlap counts measured by check_chain_properties.
  Rat s2(1);
  for (const auto& chain : cc.chains)
    for (size_t l1 = 0; l1 < chain.size(); ++l1)
      for (size_t l2 = l1; l2 < chain.size(); ++l2)
        s2 = std::max(s2, needed_sigma(cc.cubes[chain[l1]], cc.cubes[chain[l2]]));
  for (const auto& ob : cc.balls) {
    s2 = std::max(s2, needed_sigma(cc.cubes[ob.a], ob.ball));
    s2 = std::max(s2, needed_sigma(cc.cubes[ob.b], ob.ball));
  }
  cc.sigma2_achieved = to_double(s2);
  auto rep = check_chain_properties(cc, dom);
  cc.sigma2_achieved = std::max(
      {cc.sigma2_achieved, static_cast<double>(rep.max_overlap_count),
       static_cast<double>(rep.max_ball_overlap)});
  return cc;
}

ChainCheckReport check_chain_properties(const ChainCover& cc,
                                        const GridDomain& dom,
                                        const Rat* sigma1_override) {
  ChainCheckReport rep;
  Rat s1 = sigma1_override ? *sigma1_override : cc.sigma1;
  rep.sigma1 = to_double(s1);
  const int N = static_cast<int>(cc.cubes.size());

  // (C1) containment and overlap at fine lattice centers (16i + 8 units).
  rep.c1_containment = true;
  long p = static_cast<long>(numerator(s1).convert_to<long long>());
  long q = static_cast<long>(denominator(s1).convert_to<long long>());
  std::vector<int> count(dom.mask.size(), 0);
  Rat cap(1000000);
  for (int c = 0; c < N; ++c) {
    const QCube& w = cc.cubes[c];
    long hs_scaled = w.hs * p;  // compare q*|dx| < p*hs
    long reach = (hs_scaled + q - 1) / q;
    int i_lo = static_cast<int>((w.cx - reach - 8) / 16) - 1;
    int i_hi = static_cast<int>((w.cx + reach) / 16) + 1;
    int j_lo = static_cast<int>((w.cy - reach - 8) / 16) - 1;
    int j_hi = static_cast<int>((w.cy + reach) / 16) + 1;
    bool ok = true;
    for (int j = j_lo; j <= j_hi; ++j)
      for (int i = i_lo; i <= i_hi; ++i) {
        long px = 16L * i + 8, py = 16L * j + 8;
        long dx = std::max(std::labs(px - w.cx), std::labs(py - w.cy));
        if (q * dx >= hs_scaled) continue;  // outside sigma1 W
        bool in_mask = i >= 0 && i < dom.nx && j >= 0 && j < dom.ny &&
                       dom.mask[dom.idx(i, j)];
        if (!in_mask) {
          ok = false;
        } else {
          count[dom.idx(i, j)] += 1;
        }
        // Track the capacity: smallest dilation at which any non-mask center
        // would be hit (only for centers near the cube).
      }
    if (!ok) {
      rep.c1_containment = false;
      rep.offending_cubes.push_back(c);
    }
    // sigma1 capacity of this cube: nearest non-mask center / half-side.
    long best = LONG_MAX;
    long scan = 4 * w.hs;
    for (int j = static_cast<int>((w.cy - scan) / 16) - 1;
         j <= static_cast<int>((w.cy + scan) / 16) + 1; ++j)
      for (int i = static_cast<int>((w.cx - scan) / 16) - 1;
           i <= static_cast<int>((w.cx + scan) / 16) + 1; ++i) {
        bool in_mask = i >= 0 && i < dom.nx && j >= 0 && j < dom.ny &&
                       dom.mask[dom.idx(i, j)];
        if (in_mask) continue;
        long px = 16L * i + 8, py = 16L * j + 8;
        long dx = std::max(std::labs(px - w.cx), std::labs(py - w.cy));
        best = std::min(best, dx);
      }
    if (best != LONG_MAX) cap = std::min(cap, Rat(best) / Rat(w.hs));
  }
  rep.sigma1_capacity = to_double(cap);

  int maxc = 0;
  bool covered_all = true;
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j)) continue;
      maxc = std::max(maxc, count[dom.idx(i, j)]);
      // Covering: every cell center lies in some (undilated) cover cube.
      long px = 16L * i + 8, py = 16L * j + 8;
      bool in = false;
      for (int c = 0; c < N && !in; ++c) in = open_contains(cc.cubes[c], px, py);
      if (!in) covered_all = false;
    }
  rep.max_overlap_count = maxc;
  rep.covers_all_cells = covered_all;

  // Ball family overlap at lattice centers.
  std::vector<int> bcount(dom.mask.size(), 0);
  for (const auto& ob : cc.balls)
    for (int j = 0; j < dom.ny; ++j)
      for (int i = 0; i < dom.nx; ++i)
        if (open_contains(ob.ball, 16L * i + 8, 16L * j + 8))
          bcount[dom.idx(i, j)] += 1;
  rep.max_ball_overlap = 0;
  for (auto c : bcount) rep.max_ball_overlap = std::max(rep.max_ball_overlap, c);

  // sigma2 from the cover plus overlap counts.
  Rat s2(1), s2_chain(1);
  rep.c2_monotone = true;
  for (const auto& chain : cc.chains)
    for (size_t l1 = 0; l1 < chain.size(); ++l1)
      for (size_t l2 = l1; l2 < chain.size(); ++l2) {
        Rat need = needed_sigma(cc.cubes[chain[l1]], cc.cubes[chain[l2]]);
        s2_chain = std::max(s2_chain, need);
      }
  s2 = s2_chain;
  rep.sigma2_chain = to_double(s2_chain);
  rep.c2_balls = true;
  for (const auto& ob : cc.balls) {
    if (ob.ball.hs <= 0) rep.c2_balls = false;
    s2 = std::max(s2, needed_sigma(cc.cubes[ob.a], ob.ball));
    s2 = std::max(s2, needed_sigma(cc.cubes[ob.b], ob.ball));
  }
  s2 = std::max(s2, Rat(std::max(rep.max_overlap_count, rep.max_ball_overlap)));
  rep.sigma2 = to_double(s2);
  rep.c1_overlap = rep.max_overlap_count <= to_double(s2) + 1e-12;

  // Consecutive chain cubes must intersect (their recorded ball is interior).
  for (const auto& chain : cc.chains)
    for (size_t l = 0; l + 1 < chain.size(); ++l)
      if (cc.ball_index(chain[l], chain[l + 1]) < 0) rep.c2_balls = false;

  // diam(Omega) <= sigma2 diam(W_0) with the achieved sigma2.
  double side0 = 2.0 * cc.cubes[cc.central].hs / 16.0 * dom.h;
  rep.diam_bound = dom.diameter() <= rep.sigma2 * side0 * std::sqrt(2.0) + 1e-12;
  return rep;
}

std::string ChainCover::to_json() const {
  json j;
  j["sigma1"] = to_double(sigma1);
  j["sigma2"] = sigma2_achieved;
  j["central"] = central;
  j["cubes"] = json::array();
  const double u = dom->h / 16.0;
  for (size_t i = 0; i < cubes.size(); ++i) {
    json c;
    c["center"] = {dom->x0 + cubes[i].cx * u, dom->y0 + cubes[i].cy * u};
    c["side"] = 2.0 * cubes[i].hs * u;
    c["dyadic_side_blocks"] = dyadic[i].side;
    c["dist_blocks"] = dyadic[i].dist;
    j["cubes"].push_back(c);
  }
  j["chains"] = chains;
  j["overlap_balls"] = json::array();
  for (const auto& ob : balls) {
    json b;
    b["center"] = {dom->x0 + ob.ball.cx * u, dom->y0 + ob.ball.cy * u};
    b["side"] = 2.0 * ob.ball.hs * u;
    b["edge"] = {ob.a, ob.b};
    j["overlap_balls"].push_back(b);
  }
  return j.dump(2);
}

}  // namespace ellikorn
