#pragma once

#include "ellikorn/errors.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ellikorn {

// 2-D lattice-cell domain: the mask marks interior cells of an nx x ny box
// with spacing h and origin (x0, y0). Functions are sampled at cell centers.
class GridDomain {
public:
  int nx = 0, ny = 0;
  double h = 0.0;
  double x0 = 0.0, y0 = 0.0;
  std::vector<std::uint8_t> mask;
  bool periodic_x = false;
  std::string kind;
  // Cells are grouped into g x g blocks when a chain cover needs coarser
  // granularity; the mask is then a union of blocks.
  int granularity = 1;

  bool inside(int i, int j) const {
    if (periodic_x) i = ((i % nx) + nx) % nx;
    return i >= 0 && i < nx && j >= 0 && j < ny && mask[idx(i, j)];
  }
  std::size_t idx(int i, int j) const {
    if (periodic_x) i = ((i % nx) + nx) % nx;
    return static_cast<std::size_t>(j) * nx + i;
  }
  double cx(int i) const { return x0 + (i + 0.5) * h; }
  double cy(int j) const { return y0 + (j + 0.5) * h; }
  int cell_of_x(double x) const;
  int cell_of_y(double y) const;
  std::size_t cell_count() const;
  double area() const { return static_cast<double>(cell_count()) * h * h; }
  double diameter() const { return diam_; }
  // Chebyshev distance, in cells, from each mask cell to the complement
  // (adjacent outside cell = distance 1).
  const std::vector<int>& boundary_distance() const { return dist_; }

  void finalize();  // connectivity check, distance map, diameter

private:
  std::vector<int> dist_;
  double diam_ = 0.0;
};

// kind: square | disk | lshape | slit | snowflake | halfspace_strip.
// params: side, radius, iter, depth ... depending on kind; granularity
// snaps the rasterization to g x g cell blocks.
GridDomain make_domain(const std::string& kind, double h,
                       const std::vector<std::pair<std::string, double>>& params = {},
                       int granularity = 1);

// Component-valued samples at cell centers; zero outside the mask.
class GridFunction {
public:
  GridFunction() = default;
  GridFunction(const GridDomain& dom, int comps);

  const GridDomain& domain() const { return *dom_; }
  int comps() const { return comps_; }
  double& at(int i, int j, int c = 0) {
    return vals_[dom_->idx(i, j) * comps_ + c];
  }
  double at(int i, int j, int c = 0) const {
    return vals_[dom_->idx(i, j) * comps_ + c];
  }
  double abs_at(int i, int j) const;  // euclidean norm over components

  void fill(const std::function<std::vector<double>(double, double)>& f);
  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double s);

  double lp_norm(double p) const;                       // (h^2 sum |f|^p)^(1/p)
  double lp_norm_weighted(double p, const GridFunction& w) const;
  double max_abs() const;
  double integral(int c) const;  // h^2 sum of component c over the mask

private:
  const GridDomain* dom_ = nullptr;
  int comps_ = 0;
  std::vector<double> vals_;
};

// Deterministic RNG utilities (seeded; identical across runs).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next_u64();
  double uniform();                 // [0,1)
  double uniform(double a, double b);
  double normal();

private:
  std::uint64_t s_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Runs fn(i) for i in [0, count) on up to ELLIKORN_THREADS workers; results
// must be written to preallocated index-addressed slots so the merge order is
// deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace ellikorn
