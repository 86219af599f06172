#include "ellikorn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <thread>

namespace ellikorn {

int GridDomain::cell_of_x(double x) const {
  return static_cast<int>(std::floor((x - x0) / h));
}
int GridDomain::cell_of_y(double y) const {
  return static_cast<int>(std::floor((y - y0) / h));
}

std::size_t GridDomain::cell_count() const {
  std::size_t c = 0;
  for (auto m : mask) c += m ? 1 : 0;
  return c;
}

void GridDomain::finalize() {
  if (cell_count() == 0) throw EmptyMask(kind);
  // Edge-connectivity check by BFS.
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::deque<std::pair<int, int>> q;
  for (int j = 0; j < ny && q.empty(); ++j)
    for (int i = 0; i < nx && q.empty(); ++i)
      if (mask[idx(i, j)]) {
        q.emplace_back(i, j);
        seen[idx(i, j)] = 1;
      }
  std::size_t reached = 0;
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop_front();
    ++reached;
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      int ii = i + di[d], jj = j + dj[d];
      if (periodic_x) ii = ((ii % nx) + nx) % nx;
      if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
      if (!mask[idx(ii, jj)] || seen[idx(ii, jj)]) continue;
      seen[idx(ii, jj)] = 1;
      q.emplace_back(ii, jj);
    }
  }
  if (reached != cell_count()) throw DisconnectedMask(kind);

  // Chebyshev distance to the complement, complement cells implicit outside
  // the bounding box as well (except across a periodic seam).
  dist_.assign(mask.size(), 0);
  std::deque<std::pair<int, int>> bfs;
  auto outside = [&](int i, int j) {
    if (periodic_x) {
      i = ((i % nx) + nx) % nx;
      if (j < 0 || j >= ny) return true;
      return !mask[idx(i, j)];
    }
    if (i < 0 || i >= nx || j < 0 || j >= ny) return true;
    return !mask[idx(i, j)];
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!mask[idx(i, j)]) continue;
      bool edge = false;
      for (int dj = -1; dj <= 1 && !edge; ++dj)
        for (int di = -1; di <= 1 && !edge; ++di)
          if (outside(i + di, j + dj)) edge = true;
      if (edge) {
        dist_[idx(i, j)] = 1;
        bfs.emplace_back(i, j);
      }
    }
  while (!bfs.empty()) {
    auto [i, j] = bfs.front();
    bfs.pop_front();
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        int ii = i + di, jj = j + dj;
        if (outside(ii, jj)) continue;
        if (periodic_x) ii = ((ii % nx) + nx) % nx;
        if (dist_[idx(ii, jj)] != 0) continue;
        dist_[idx(ii, jj)] = dist_[idx(i, j)] + 1;
        bfs.emplace_back(ii, jj);
      }
  }

  // Exact mask diameter over cell centers, via the convex hull.
  std::vector<std::pair<double, double>> pts;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (mask[idx(i, j)]) pts.emplace_back(cx(i), cy(j));
  std::sort(pts.begin(), pts.end());
  auto cross = [](auto& o, auto& a, auto& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> hull;
  for (int pass = 0; pass < 2; ++pass) {
    size_t start = hull.size();
    for (auto& p : pts) {
      while (hull.size() >= start + 2 &&
             cross(hull[hull.size() - 2], hull[hull.size() - 1], p) <= 0)
        hull.pop_back();
      hull.push_back(p);
    }
    hull.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  diam_ = 0.0;
  for (size_t a = 0; a < hull.size(); ++a)
    for (size_t b = a + 1; b < hull.size(); ++b)
      diam_ = std::max(diam_, std::hypot(hull[a].first - hull[b].first,
                                         hull[a].second - hull[b].second));
  if (hull.size() <= 1) diam_ = 0.0;
}

static double get_param(const std::vector<std::pair<std::string, double>>& p,
                        const std::string& key, double dflt) {
  for (const auto& [k, v] : p)
    if (k == key) return v;
  return dflt;
}

// Koch snowflake polygon after `iter` refinements of an equilateral triangle.
static std::vector<std::pair<double, double>> koch_polygon(int iter) {
  std::vector<std::pair<double, double>> poly = {
      {0.5, 0.5 + 0.42}, {0.5 - 0.42 * std::sqrt(3.0) / 2, 0.5 - 0.21},
      {0.5 + 0.42 * std::sqrt(3.0) / 2, 0.5 - 0.21}};
  for (int it = 0; it < iter; ++it) {
    std::vector<std::pair<double, double>> next;
    size_t m = poly.size();
    for (size_t e = 0; e < m; ++e) {
      auto [ax, ay] = poly[e];
      auto [bx, by] = poly[(e + 1) % m];
      double dx = (bx - ax) / 3.0, dy = (by - ay) / 3.0;
      double px = ax + dx, py = ay + dy;
      double qx = ax + 2 * dx, qy = ay + 2 * dy;
      // Outward apex (polygon is counter-clockwise... vertices listed
      // clockwise here, so rotate by -60 degrees).
      double tx = px + dx * 0.5 + dy * std::sqrt(3.0) / 2;
      double ty = py + dy * 0.5 - dx * std::sqrt(3.0) / 2;
      next.push_back({ax, ay});
      next.push_back({px, py});
      next.push_back({tx, ty});
      next.push_back({qx, qy});
    }
    poly = std::move(next);
  }
  return poly;
}

static bool point_in_polygon(const std::vector<std::pair<double, double>>& poly,
                             double x, double y) {
  bool in = false;
  size_t m = poly.size();
  for (size_t a = 0, b = m - 1; a < m; b = a++) {
    auto [xa, ya] = poly[a];
    auto [xb, yb] = poly[b];
    if ((ya > y) != (yb > y) && x < (xb - xa) * (y - ya) / (yb - ya) + xa)
      in = !in;
  }
  return in;
}

GridDomain make_domain(const std::string& kind, double h,
                       const std::vector<std::pair<std::string, double>>& params,
                       int granularity) {
  if (!(h > 0)) throw MalformedSpec("h must be positive");
  GridDomain d;
  d.h = h;
  d.kind = kind;
  d.granularity = granularity;
  const int g = granularity;

  auto raster = [&](int nx, int ny, double x0, double y0,
                    const std::function<bool(double, double)>& inside) {
    d.nx = nx;
    d.ny = ny;
    d.x0 = x0;
    d.y0 = y0;
    d.mask.assign(static_cast<std::size_t>(nx) * ny, 0);
    for (int bj = 0; bj < ny / g; ++bj)
      for (int bi = 0; bi < nx / g; ++bi) {
        double bx = x0 + (bi + 0.5) * g * h, by = y0 + (bj + 0.5) * g * h;
        if (!inside(bx, by)) continue;
        for (int j = bj * g; j < (bj + 1) * g; ++j)
          for (int i = bi * g; i < (bi + 1) * g; ++i) d.mask[d.idx(i, j)] = 1;
      }
  };

  if (kind == "square") {
    double side = get_param(params, "side", 1.0);
    int n = std::max(g, static_cast<int>(std::lround(side / h)));
    n = (n / g) * g;
    raster(n, n, 0.0, 0.0, [](double, double) { return true; });
  } else if (kind == "disk") {
    double r = get_param(params, "radius", 0.5);
    int n = static_cast<int>(std::lround(2 * r / h));
    n = ((n + g - 1) / g) * g;
    raster(n, n, -r, -r,
           [&](double x, double y) { return x * x + y * y < r * r; });
  } else if (kind == "lshape") {
    // [0,1]^2 minus the upper-right quadrant.
    int n = static_cast<int>(std::lround(1.0 / h));
    n = (n / g) * g;
    raster(n, n, 0.0, 0.0,
           [&](double x, double y) { return !(x > 0.5 && y > 0.5); });
  } else if (kind == "slit") {
    // Unit square minus a one-block-thick slit from the left edge to the
    // center at mid-height.
    int n = static_cast<int>(std::lround(1.0 / h));
    n = (n / g) * g;
    double gh = g * h;
    raster(n, n, 0.0, 0.0, [&](double x, double y) {
      return !(x < 0.5 && y > 0.5 - gh && y < 0.5);
    });
  } else if (kind == "snowflake") {
    int iter = static_cast<int>(get_param(params, "iter", 3));
    auto poly = koch_polygon(iter);
    int n = static_cast<int>(std::lround(1.0 / h));
    n = (n / g) * g;
    raster(n, n, 0.0, 0.0,
           [&](double x, double y) { return point_in_polygon(poly, x, y); });
  } else if (kind == "halfspace_strip") {
    double depth = get_param(params, "depth", 0.5);
    double width = get_param(params, "width", 1.0);
    int nx = static_cast<int>(std::lround(width / h));
    int ny = static_cast<int>(std::lround(depth / h));
    d.nx = nx;
    d.ny = ny;
    d.x0 = 0.0;
    d.y0 = 0.0;
    d.periodic_x = true;
    d.mask.assign(static_cast<std::size_t>(nx) * ny, 1);
  } else {
    throw UsageError("unknown domain kind '" + kind + "'");
  }
  d.finalize();
  return d;
}

GridFunction::GridFunction(const GridDomain& dom, int comps)
    : dom_(&dom), comps_(comps) {
  vals_.assign(dom.mask.size() * comps, 0.0);
}

double GridFunction::abs_at(int i, int j) const {
  double s = 0.0;
  for (int c = 0; c < comps_; ++c) s += at(i, j, c) * at(i, j, c);
  return std::sqrt(s);
}

void GridFunction::fill(
    const std::function<std::vector<double>(double, double)>& f) {
  for (int j = 0; j < dom_->ny; ++j)
    for (int i = 0; i < dom_->nx; ++i) {
      if (!dom_->inside(i, j)) continue;
      auto v = f(dom_->cx(i), dom_->cy(j));
      for (int c = 0; c < comps_; ++c) at(i, j, c) = v[c];
    }
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  for (size_t t = 0; t < vals_.size(); ++t) vals_[t] += o.vals_[t];
  return *this;
}
GridFunction& GridFunction::operator-=(const GridFunction& o) {
  for (size_t t = 0; t < vals_.size(); ++t) vals_[t] -= o.vals_[t];
  return *this;
}
GridFunction& GridFunction::operator*=(double s) {
  for (auto& v : vals_) v *= s;
  return *this;
}

double GridFunction::lp_norm(double p) const {
  double acc = 0.0;
  for (int j = 0; j < dom_->ny; ++j)
    for (int i = 0; i < dom_->nx; ++i)
      if (dom_->inside(i, j)) acc += std::pow(abs_at(i, j), p);
  return std::pow(acc * dom_->h * dom_->h, 1.0 / p);
}

double GridFunction::lp_norm_weighted(double p, const GridFunction& w) const {
  double acc = 0.0;
  for (int j = 0; j < dom_->ny; ++j)
    for (int i = 0; i < dom_->nx; ++i)
      if (dom_->inside(i, j))
        acc += std::pow(abs_at(i, j), p) * w.at(i, j, 0);
  return std::pow(acc * dom_->h * dom_->h, 1.0 / p);
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (int j = 0; j < dom_->ny; ++j)
    for (int i = 0; i < dom_->nx; ++i)
      if (dom_->inside(i, j)) m = std::max(m, abs_at(i, j));
  return m;
}

double GridFunction::integral(int c) const {
  double acc = 0.0;
  for (int j = 0; j < dom_->ny; ++j)
    for (int i = 0; i < dom_->nx; ++i)
      if (dom_->inside(i, j)) acc += at(i, j, c);
  return acc * dom_->h * dom_->h;
}

std::uint64_t Rng::next_u64() {
  // splitmix64; standard constants, portable and deterministic.
  s_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() { return std::ldexp(static_cast<double>(next_u64() >> 11), -53); }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0, u2 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 1e-300);
  u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2 * M_PI * u2);
  have_spare_ = true;
  return r * std::cos(2 * M_PI * u2);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("ELLIKORN_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) workers = static_cast<unsigned>(v);
  }
  workers = std::min<std::size_t>(workers ? workers : 1, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace ellikorn
