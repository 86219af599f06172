#include "ellikorn/maximal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

namespace ellikorn {

Weight Weight::unit(const GridDomain& dom) {
  Weight w;
  w.kind = Kind::Unit;
  w.values = GridFunction(dom, 1);
  w.values.fill([](double, double) { return std::vector<double>{1.0}; });
  return w;
}

Weight Weight::power(const GridDomain& dom, double a, double cx, double cy) {
  Weight w;
  w.kind = Kind::Power;
  w.exponent = a;
  w.cx = cx;
  w.cy = cy;
  w.values = GridFunction(dom, 1);
  w.values.fill([&](double x, double y) {
    double d = std::hypot(x - cx, y - cy);
    return std::vector<double>{std::pow(d, a)};
  });
  return w;
}

Weight Weight::custom(GridFunction values) {
  Weight w;
  w.kind = Kind::Custom;
  w.values = std::move(values);
  return w;
}

std::vector<LatticeCube> dyadic_cube_family(const GridDomain& dom,
                                            int max_depth, bool half_shifted) {
  std::vector<LatticeCube> cubes;
  int top = 1;
  while (2 * top <= std::min(dom.nx, dom.ny)) top *= 2;
  int s = top;
  for (int depth = 0; depth <= max_depth && s >= 1; ++depth, s /= 2) {
    std::vector<std::pair<int, int>> offsets = {{0, 0}};
    if (half_shifted && s >= 2) {
      offsets.push_back({s / 2, 0});
      offsets.push_back({0, s / 2});
      offsets.push_back({s / 2, s / 2});
    }
    for (auto [ox, oy] : offsets)
      for (int j0 = oy; j0 + s <= dom.ny; j0 += s)
        for (int i0 = ox; i0 + s <= dom.nx; i0 += s)
          cubes.push_back({i0, j0, s});
  }
  return cubes;
}

namespace {

bool sigma_cube_inside(const GridDomain& dom, const LatticeCube& q,
                       double sigma) {
  // sigma Q about the cube center, sampled at cell centers (cell units).
  double half = sigma * q.s / 2.0;
  double cx = q.i0 + q.s / 2.0, cy = q.j0 + q.s / 2.0;
  int ilo = static_cast<int>(std::floor(cx - half)) - 1;
  int ihi = static_cast<int>(std::ceil(cx + half)) + 1;
  int jlo = static_cast<int>(std::floor(cy - half)) - 1;
  int jhi = static_cast<int>(std::ceil(cy + half)) + 1;
  for (int j = jlo; j <= jhi; ++j)
    for (int i = ilo; i <= ihi; ++i) {
      if (std::abs(i + 0.5 - cx) >= half || std::abs(j + 0.5 - cy) >= half)
        continue;
      if (!dom.inside(i, j)) return false;
    }
  return true;
}

// L2 fit of f by span(nbasis) on the cube cells, with optional per-cell
// weights; returns the fitted coefficients.
Eigen::VectorXd cube_fit(const GridFunction& f, const GridDomain& dom,
                         const std::vector<std::pair<int, int>>& cells,
                         const std::vector<std::vector<std::vector<double>>>& bv,
                         const std::vector<double>& wts) {
  int nb = bv.empty() ? 0 : static_cast<int>(bv[0].size());
  int comps = f.comps();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nb);
  for (size_t t = 0; t < cells.size(); ++t) {
    auto [i, j] = cells[t];
    double wt = wts.empty() ? 1.0 : wts[t];
    for (int a = 0; a < nb; ++a) {
      for (int c2 = 0; c2 < nb; ++c2) {
        double dot = 0.0;
        for (int c = 0; c < comps; ++c) dot += bv[t][a][c] * bv[t][c2][c];
        A(a, c2) += wt * dot;
      }
      double dotf = 0.0;
      for (int c = 0; c < comps; ++c) dotf += bv[t][a][c] * f.at(i, j, c);
      b(a) += wt * dotf;
    }
  }
  for (int a = 0; a < nb; ++a) A(a, a) += 1e-13 * (1.0 + std::abs(A.trace()));
  return nb > 0 ? Eigen::VectorXd(A.ldlt().solve(b)) : Eigen::VectorXd();
}

// inf over span(nbasis) of the cube p-mean of f - pi; least squares for
// p = 2, one reweighting pass for p = 1 (two-sided comparable proxy).
double cube_oscillation(const GridFunction& f, const GridDomain& dom,
                        const LatticeCube& q, double p,
                        const std::vector<VPolynomial>& nbasis) {
  int nb = static_cast<int>(nbasis.size());
  int comps = f.comps();
  static thread_local const std::vector<VPolynomial>* cached_src = nullptr;
  static thread_local std::vector<DPoly> cached;
  if (cached_src != &nbasis) {
    cached.clear();
    for (const auto& b : nbasis) cached.emplace_back(b);
    cached_src = &nbasis;
  }
  std::vector<std::pair<int, int>> cells;
  for (int j = q.j0; j < q.j0 + q.s; ++j)
    for (int i = q.i0; i < q.i0 + q.s; ++i)
      if (dom.inside(i, j)) cells.emplace_back(i, j);
  if (cells.empty()) return 0.0;
  std::vector<std::vector<std::vector<double>>> bv(cells.size());
  for (size_t t = 0; t < cells.size(); ++t) {
    auto [i, j] = cells[t];
    bv[t].resize(nb);
    for (int a = 0; a < nb; ++a) bv[t][a] = cached[a].eval(dom.cx(i), dom.cy(j));
  }
  auto residuals = [&](const Eigen::VectorXd& coef) {
    std::vector<double> r(cells.size());
    for (size_t t = 0; t < cells.size(); ++t) {
      auto [i, j] = cells[t];
      double r2 = 0.0;
      for (int c = 0; c < comps; ++c) {
        double fit = 0.0;
        for (int a = 0; a < nb; ++a) fit += coef(a) * bv[t][a][c];
        double d = f.at(i, j, c) - fit;
        r2 += d * d;
      }
      r[t] = std::sqrt(r2);
    }
    return r;
  };
  auto pmean = [&](const std::vector<double>& r) {
    double acc = 0.0;
    for (double v : r) acc += std::pow(v, p);
    return std::pow(acc / cells.size(), 1.0 / p);
  };
  if (nb == 0) {
    std::vector<double> r(cells.size());
    for (size_t t = 0; t < cells.size(); ++t)
      r[t] = f.abs_at(cells[t].first, cells[t].second);
    return pmean(r);
  }
  Eigen::VectorXd coef = cube_fit(f, dom, cells, bv, {});
  auto r0 = residuals(coef);
  double best = pmean(r0);
  if (p == 1.0) {
    double scale = *std::max_element(r0.begin(), r0.end());
    std::vector<double> w(cells.size());
    for (size_t t = 0; t < cells.size(); ++t)
      w[t] = 1.0 / std::max(r0[t], 1e-8 * (scale + 1e-300));
    best = std::min(best, pmean(residuals(cube_fit(f, dom, cells, bv, w))));
  }
  return best;
}

}  // namespace

MaximalResult maximal(const GridFunction& f, const MaximalOptions& opt) {
  const GridDomain& dom = f.domain();
  MaximalResult out;
  out.value = GridFunction(dom, 1);
  out.no_cube.assign(dom.mask.size(), 1);

  auto family = dyadic_cube_family(dom, 30, true);
  std::vector<double> ps(static_cast<std::size_t>(dom.nx + 1) * (dom.ny + 1),
                         0.0);
  auto psat = [&](int i, int j) -> double& {
    return ps[static_cast<std::size_t>(j) * (dom.nx + 1) + i];
  };
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      double v = dom.inside(i, j) ? std::pow(f.abs_at(i, j), opt.p) : 0.0;
      psat(i + 1, j + 1) = v + psat(i, j + 1) + psat(i + 1, j) - psat(i, j);
    }

  const bool restricted =
      opt.variant != MaximalOptions::Variant::HardyLittlewood;
  const bool sharp = opt.variant == MaximalOptions::Variant::Sharp;
  std::vector<VPolynomial> empty;
  const auto& nbasis = sharp && opt.script_n ? *opt.script_n : empty;

  for (const auto& q : family) {
    if (restricted && !sigma_cube_inside(dom, q, opt.sigma)) continue;
    double mean;
    if (sharp) {
      mean = cube_oscillation(f, dom, q, opt.p, nbasis);
    } else {
      double sum = psat(q.i0 + q.s, q.j0 + q.s) - psat(q.i0, q.j0 + q.s) -
                   psat(q.i0 + q.s, q.j0) + psat(q.i0, q.j0);
      mean = std::pow(sum / (static_cast<double>(q.s) * q.s), 1.0 / opt.p);
    }
    for (int j = q.j0; j < q.j0 + q.s; ++j)
      for (int i = q.i0; i < q.i0 + q.s; ++i) {
        if (!dom.inside(i, j)) continue;
        out.value.at(i, j, 0) = std::max(out.value.at(i, j, 0), mean);
        out.no_cube[dom.idx(i, j)] = 0;
      }
  }
  return out;
}

double muckenhoupt_constant(const Weight& w, double q,
                            const std::vector<LatticeCube>& cubes) {
  const GridDomain& dom = w.values.domain();
  double best = 0.0;
  for (const auto& c : cubes) {
    double sw = 0.0, sdual = 0.0, inv_sup = 0.0;
    long cnt = 0;
    for (int j = c.j0; j < c.j0 + c.s; ++j)
      for (int i = c.i0; i < c.i0 + c.s; ++i) {
        if (!dom.inside(i, j)) continue;
        double v = w.values.at(i, j, 0);
        sw += v;
        if (q > 1.0) sdual += std::pow(v, -1.0 / (q - 1.0));
        inv_sup = std::max(inv_sup, 1.0 / v);
        ++cnt;
      }
    if (cnt == 0) continue;
    double val = q > 1.0 ? (sw / cnt) * std::pow(sdual / cnt, q - 1.0)
                         : (sw / cnt) * inv_sup;
    best = std::max(best, val);
  }
  return best;
}

CZDecomposition cz_decomposition(const GridFunction& f, double alpha) {
  const GridDomain& dom = f.domain();
  int top = 1;
  while (2 * top <= std::min(dom.nx, dom.ny)) top *= 2;
  CZDecomposition out;
  out.root = {0, 0, top, 0.0, 0};
  for (int j = 0; j < top; ++j)
    for (int i = 0; i < top; ++i)
      if (!dom.inside(i, j))
        throw EmptyMask("cz_decomposition needs the root cube inside the mask");
  auto avg_abs = [&](int i0, int j0, int s) {
    double acc = 0.0;
    for (int j = j0; j < j0 + s; ++j)
      for (int i = i0; i < i0 + s; ++i) acc += f.abs_at(i, j);
    return acc / (static_cast<double>(s) * s);
  };
  out.root.avg = avg_abs(0, 0, top);
  if (alpha < out.root.avg)
    throw ThresholdTooSmall("alpha below the global average");

  std::function<void(int, int, int, int)> rec = [&](int i0, int j0, int s,
                                                    int level) {
    int half = s / 2;
    if (half == 0) return;
    auto visit = [&](int a, int b) {
      double avg = avg_abs(a, b, half);
      if (avg > alpha)
        out.cubes.push_back({a, b, half, avg, level + 1});
      else if (half > 1)
        rec(a, b, half, level + 1);
    };
    visit(i0, j0);
    visit(i0 + half, j0);
    visit(i0, j0 + half);
    visit(i0 + half, j0 + half);
  };
  rec(0, 0, top, 0);
  return out;
}

double best_approx_distance(const GridFunction& f, double q, const Weight& w,
                            const std::vector<VPolynomial>& script_n) {
  const GridDomain& dom = f.domain();
  int nb = static_cast<int>(script_n.size());
  int comps = f.comps();
  std::vector<std::pair<int, int>> cells;
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i)
      if (dom.inside(i, j)) cells.emplace_back(i, j);
  std::vector<DPoly> dn;
  for (const auto& b : script_n) dn.emplace_back(b);
  std::vector<std::vector<std::vector<double>>> bv(cells.size());
  std::vector<double> wts(cells.size());
  for (size_t t = 0; t < cells.size(); ++t) {
    auto [i, j] = cells[t];
    bv[t].resize(nb);
    for (int a = 0; a < nb; ++a) bv[t][a] = dn[a].eval(dom.cx(i), dom.cy(j));
    wts[t] = w.values.at(i, j, 0);
  }
  Eigen::VectorXd coef = cube_fit(f, dom, cells, bv, wts);
  double acc = 0.0;
  for (size_t t = 0; t < cells.size(); ++t) {
    auto [i, j] = cells[t];
    double r2 = 0.0;
    for (int c = 0; c < comps; ++c) {
      double fit = 0.0;
      for (int a = 0; a < nb; ++a) fit += coef(a) * bv[t][a][c];
      double d = f.at(i, j, c) - fit;
      r2 += d * d;
    }
    acc += std::pow(std::sqrt(r2), q) * wts[t];
  }
  return std::pow(acc * dom.h * dom.h, 1.0 / q);
}

RatioResult fefferman_stein_check(const GridFunction& f, double sigma1,
                                  double q, const Weight& w,
                                  const std::vector<VPolynomial>& script_n) {
  MaximalOptions opt;
  opt.variant = MaximalOptions::Variant::Sharp;
  opt.sigma = sigma1;
  opt.p = 1.0;
  opt.script_n = &script_n;
  auto sharp = maximal(f, opt);

  RatioResult r;
  r.numerator = best_approx_distance(f, q, w, script_n);
  r.denominator = sharp.value.lp_norm_weighted(q, w.values);
  double scale = f.max_abs() + 1e-300;
  if (r.numerator < 1e-12 * scale && r.denominator < 1e-12 * scale) {
    r.exact = true;
    return r;
  }
  r.ratio = r.numerator / r.denominator;
  return r;
}

}  // namespace ellikorn
