#include "ellikorn/decompose.hpp"

#include "ellikorn/fd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace ellikorn {

MomentSubspace MomentSubspace::constants(int dim_e) {
  MomentSubspace n;
  for (int c = 0; c < dim_e; ++c)
    n.basis.push_back(
        VPolynomial::monomial(2, MultiIndex::zero(2), c, dim_e, Rat(1)));
  return n;
}

MomentSubspace MomentSubspace::gradient_of_kernel(
    const DiffOperator& op, const NullspaceProfile& profile) {
  if (profile.verdict != CVerdict::CElliptic)
    throw NotCElliptic("N = D^k ker(A) needs a C-elliptic operator");
  auto mis = multiindices_of_order(op.n, op.k);
  int dim_e = static_cast<int>(mis.size()) * op.dim_v;
  // Stack d^alpha q over |alpha| = k, then keep an independent subset.
  std::vector<VPolynomial> raw;
  for (const auto& q : profile.kernel_basis()) {
    VPolynomial g(op.n, dim_e);
    for (size_t t = 0; t < mis.size(); ++t) {
      VPolynomial dq = q.derivative(mis[t]);
      for (const auto& [a, v] : dq.coeffs())
        for (int c = 0; c < op.dim_v; ++c)
          g.add_term(a, static_cast<int>(t) * op.dim_v + c, v[c]);
    }
    if (!g.is_zero()) raw.push_back(std::move(g));
  }
  // Independent subset via rational row reduction on shared coordinates.
  int maxdeg = 0;
  for (const auto& g : raw) maxdeg = std::max(maxdeg, g.degree().value_or(0));
  auto coords_mis = multiindices_up_to(op.n, maxdeg);
  MomentSubspace n;
  RatMat rows;
  for (const auto& g : raw) {
    rows.push_back(monomial_coordinates(g, coords_mis));
    if (rat_rank(rows) < static_cast<int>(rows.size()))
      rows.pop_back();
    else
      n.basis.push_back(g);
  }
  return n;
}

namespace {

// Tensor bump supported exactly on the open cube (sixteenth-cell units).
double cube_bump(const QCube& q, long px, long py) {
  double tx = static_cast<double>(px - q.cx) / q.hs;
  double ty = static_cast<double>(py - q.cy) / q.hs;
  double bx = std::max(0.0, 1.0 - tx * tx);
  double by = std::max(0.0, 1.0 - ty * ty);
  return bx * bx * bx * by * by * by;
}

struct EtaBump {
  QCube ball;
  double norm = 0.0;  // lattice integral before normalization
  const GridDomain* dom = nullptr;

  double value(int i, int j) const {
    return cube_bump(ball, 16L * i + 8, 16L * j + 8) / norm;
  }
};

EtaBump make_eta(const GridDomain& dom, const QCube& ball) {
  EtaBump eta;
  eta.ball = ball;
  eta.dom = &dom;
  double acc = 0.0;
  int ilo = static_cast<int>((ball.lo_x()) / 16) - 1;
  int ihi = static_cast<int>((ball.hi_x()) / 16) + 1;
  int jlo = static_cast<int>((ball.lo_y()) / 16) - 1;
  int jhi = static_cast<int>((ball.hi_y()) / 16) + 1;
  for (int j = jlo; j <= jhi; ++j)
    for (int i = ilo; i <= ihi; ++i)
      acc += cube_bump(ball, 16L * i + 8, 16L * j + 8);
  if (acc <= 0.0)
    throw SingularGram("overlap ball carries no lattice points");
  eta.norm = acc * dom.h * dom.h;
  return eta;
}

struct EtaGram {
  EtaBump eta;
  Eigen::LDLT<Eigen::MatrixXd> gram;
  std::vector<std::pair<int, int>> cells;
};

std::vector<DPoly> dpoly_basis(const MomentSubspace& N) {
  std::vector<DPoly> out;
  for (const auto& b : N.basis) out.emplace_back(b);
  return out;
}

EtaGram make_eta_gram(const GridDomain& dom, const QCube& ball,
                      const MomentSubspace& N) {
  EtaGram g;
  g.eta = make_eta(dom, ball);
  int nb = static_cast<int>(N.basis.size());
  int ilo = static_cast<int>(ball.lo_x() / 16) - 1;
  int ihi = static_cast<int>(ball.hi_x() / 16) + 1;
  int jlo = static_cast<int>(ball.lo_y() / 16) - 1;
  int jhi = static_cast<int>(ball.hi_y() / 16) + 1;
  for (int j = jlo; j <= jhi; ++j)
    for (int i = ilo; i <= ihi; ++i)
      if (cube_bump(ball, 16L * i + 8, 16L * j + 8) > 0.0)
        g.cells.emplace_back(i, j);
  // Each lattice point contributes rank dim_e to the Gram.
  if (static_cast<int>(g.cells.size()) * N.dim_e() < nb)
    throw SingularGram("fewer lattice points than dim N on the overlap ball");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nb, nb);
  auto dn = dpoly_basis(N);
  for (auto [i, j] : g.cells) {
    double e = g.eta.value(i, j) * dom.h * dom.h;
    std::vector<std::vector<double>> bv(nb);
    for (int a = 0; a < nb; ++a) bv[a] = dn[a].eval(dom.cx(i), dom.cy(j));
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b) {
        double dot = 0.0;
        for (int c = 0; c < N.dim_e(); ++c) dot += bv[a][c] * bv[b][c];
        A(a, b) += e * dot;
      }
  }
  g.gram.compute(A);
  double dmin = g.gram.vectorD().minCoeff();
  if (g.gram.info() != Eigen::Success || !(dmin > 1e-14 * (1.0 + A.trace())))
    throw SingularGram("eta-weighted Gram is singular");
  return g;
}

// Moments int f . pi over the support of f (f vanishes outside its cells).
Eigen::VectorXd field_moments(const GridFunction& f, const MomentSubspace& N) {
  const GridDomain& dom = f.domain();
  int nb = static_cast<int>(N.basis.size());
  auto dn = dpoly_basis(N);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(nb);
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j)) continue;
      bool nonzero = false;
      for (int c = 0; c < f.comps(); ++c)
        if (f.at(i, j, c) != 0.0) nonzero = true;
      if (!nonzero) continue;
      for (int a = 0; a < nb; ++a) {
        auto bv = dn[a].eval(dom.cx(i), dom.cy(j));
        double dot = 0.0;
        for (int c = 0; c < f.comps(); ++c) dot += bv[c] * f.at(i, j, c);
        m(a) += dot;
      }
    }
  return m * dom.h * dom.h;
}

}  // namespace

MomentProjectionResult moment_projection(const GridFunction& f,
                                         const QCube& eta_ball,
                                         const MomentSubspace& N) {
  const GridDomain& dom = f.domain();
  EtaGram g = make_eta_gram(dom, eta_ball, N);
  Eigen::VectorXd rhs = field_moments(f, N);
  Eigen::VectorXd coef = g.gram.solve(rhs);
  MomentProjectionResult out;
  out.value = VPolynomial(2, N.dim_e());
  for (size_t a = 0; a < N.basis.size(); ++a)
    out.value = out.value + N.basis[a].scaled(rat_of(coef(a)));
  // Stability: sup |P f| over the ball region divided by int |f|.
  double sup = 0.0;
  DPoly dval(out.value);
  for (auto [i, j] : g.cells) {
    auto v = dval.eval(dom.cx(i), dom.cy(j));
    double s = 0.0;
    for (double t : v) s += t * t;
    sup = std::max(sup, std::sqrt(s));
  }
  double l1 = f.lp_norm(1.0);
  out.stability = l1 > 0 ? sup / l1 : 0.0;
  return out;
}

double max_moment_defect(const GridFunction& f, const MomentSubspace& N) {
  Eigen::VectorXd m = field_moments(f, N);
  double l1 = f.lp_norm(1.0);
  double worst = 0.0;
  const GridDomain& dom = f.domain();
  auto dn = dpoly_basis(N);
  for (size_t a = 0; a < N.basis.size(); ++a) {
    double sup = 0.0;
    for (int j = 0; j < dom.ny; ++j)
      for (int i = 0; i < dom.nx; ++i) {
        if (!dom.inside(i, j)) continue;
        auto v = dn[a].eval(dom.cx(i), dom.cy(j));
        double s = 0.0;
        for (double t : v) s += t * t;
        sup = std::max(sup, std::sqrt(s));
      }
    if (l1 * sup > 0) worst = std::max(worst, std::abs(m(a)) / (l1 * sup));
  }
  return worst;
}

GridFunction remove_moments(const GridFunction& f, const ChainCover& cc,
                            const MomentSubspace& N) {
  const GridDomain& dom = f.domain();
  QCube b0 = cc.cubes[cc.central];
  b0.hs /= 2;
  EtaBump eta = make_eta(dom, b0);
  EtaGram g = make_eta_gram(dom, b0, N);
  Eigen::VectorXd coef = g.gram.solve(field_moments(f, N));
  GridFunction out = f;
  auto dn = dpoly_basis(N);
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j)) continue;
      double e = eta.value(i, j);
      if (e == 0.0) continue;
      for (size_t a = 0; a < N.basis.size(); ++a) {
        auto bv = dn[a].eval(dom.cx(i), dom.cy(j));
        for (int c = 0; c < f.comps(); ++c)
          out.at(i, j, c) -= e * coef(a) * bv[c];
      }
    }
  return out;
}

Decomposition decompose(const GridFunction& f, const ChainCover& cc,
                        const MomentSubspace& N) {
  const GridDomain& dom = f.domain();
  if (max_moment_defect(f, N) > 1e-9)
    throw MomentsNotZero("pre-subtract the N-moments with remove_moments");

  const int NC = static_cast<int>(cc.cubes.size());
  // Partition of unity subordinate to the cover cubes at lattice points.
  std::vector<double> bump_sum(dom.mask.size(), 0.0);
  for (int c = 0; c < NC; ++c)
    for (int j = 0; j < dom.ny; ++j)
      for (int i = 0; i < dom.nx; ++i) {
        if (!dom.inside(i, j)) continue;
        bump_sum[dom.idx(i, j)] += cube_bump(cc.cubes[c], 16L * i + 8, 16L * j + 8);
      }
  auto xi_value = [&](int c, int i, int j) {
    double b = cube_bump(cc.cubes[c], 16L * i + 8, 16L * j + 8);
    return b > 0.0 ? b / bump_sum[dom.idx(i, j)] : 0.0;
  };

  // Local parts S_j f and their N-moments.
  std::vector<GridFunction> sjf(NC, GridFunction(dom, f.comps()));
  for (int c = 0; c < NC; ++c)
    for (int j = 0; j < dom.ny; ++j)
      for (int i = 0; i < dom.nx; ++i) {
        if (!dom.inside(i, j)) continue;
        double xi = xi_value(c, i, j);
        if (xi == 0.0) continue;
        for (int k = 0; k < f.comps(); ++k)
          sjf[c].at(i, j, k) = xi * f.at(i, j, k);
      }

  // Gram caches: one per overlap ball plus the central ball.
  QCube b0 = cc.cubes[cc.central];
  b0.hs /= 2;
  std::vector<EtaGram> ball_grams;
  for (const auto& ob : cc.balls) ball_grams.push_back(make_eta_gram(dom, ob.ball, N));
  EtaGram central_gram = make_eta_gram(dom, b0, N);

  // eta and coefficients of Pi_{j,l}(S_j f): since spt(S_j f) lies inside
  // every dilated chain cube, the right-hand side moments are independent of
  // the chain position l.
  auto eta_of = [&](int j, size_t l) -> std::pair<const EtaGram*, const EtaBump*> {
    const auto& chain = cc.chains[j];
    if (l + 1 < chain.size()) {
      int bi = cc.ball_index(chain[l], chain[l + 1]);
      return {&ball_grams[bi], &ball_grams[bi].eta};
    }
    return {&central_gram, &central_gram.eta};
  };

  std::vector<Eigen::VectorXd> sj_moments(NC);
  for (int c = 0; c < NC; ++c) sj_moments[c] = field_moments(sjf[c], N);

  Decomposition d;
  d.cover = &cc;
  d.source = f;
  d.pieces.assign(NC, GridFunction(dom, f.comps()));

  auto dn = dpoly_basis(N);
  auto add_eta_pi = [&](GridFunction& piece, const EtaBump& eta,
                        const Eigen::VectorXd& coef, double sign) {
    int ilo = std::max(0, static_cast<int>(eta.ball.lo_x() / 16) - 1);
    int ihi = std::min(dom.nx - 1, static_cast<int>(eta.ball.hi_x() / 16) + 1);
    int jlo = std::max(0, static_cast<int>(eta.ball.lo_y() / 16) - 1);
    int jhi = std::min(dom.ny - 1, static_cast<int>(eta.ball.hi_y() / 16) + 1);
    for (int j = jlo; j <= jhi; ++j)
      for (int i = ilo; i <= ihi; ++i) {
        if (!dom.inside(i, j)) continue;
        double e = eta.value(i, j);
        if (e == 0.0) continue;
        for (size_t a = 0; a < N.basis.size(); ++a) {
          auto bv = dn[a].eval(dom.cx(i), dom.cy(j));
          for (int c = 0; c < f.comps(); ++c)
            piece.at(i, j, c) += sign * e * coef(a) * bv[c];
        }
      }
  };

  // T_i f = S_i f - eta_{i,0} Pi_{i,0}(S_i f)
  //          + sum over chains passing through W_i of the transported pair.
  for (int i = 0; i < NC; ++i) {
    d.pieces[i] += sjf[i];
    auto [g0, e0] = eta_of(i, 0);
    add_eta_pi(d.pieces[i], *e0, g0->gram.solve(sj_moments[i]), -1.0);
  }
  for (int j = 0; j < NC; ++j) {
    const auto& chain = cc.chains[j];
    for (size_t l = 1; l < chain.size(); ++l) {
      int i = chain[l];
      auto [gp, ep] = eta_of(j, l - 1);
      auto [gc, ec] = eta_of(j, l);
      add_eta_pi(d.pieces[i], *ep, gp->gram.solve(sj_moments[j]), +1.0);
      add_eta_pi(d.pieces[i], *ec, gc->gram.solve(sj_moments[j]), -1.0);
    }
  }
  return d;
}

DecompositionCheck verify_decomposition(const Decomposition& d, double q,
                                        const Weight& w) {
  DecompositionCheck out;
  double fnorm = d.source.lp_norm_weighted(q, w.values);
  double acc = 0.0;
  for (const auto& piece : d.pieces)
    acc += std::pow(piece.lp_norm_weighted(q, w.values), q);
  double lq = std::pow(acc, 1.0 / q);
  out.lower_ratio = lq > 0 ? fnorm / lq : 0.0;
  out.upper_ratio = fnorm > 0 ? lq / fnorm : 0.0;

  // Pointwise majorant against the restricted maximal function.
  MaximalOptions opt;
  auto mf = maximal(d.source, opt);
  const GridDomain& dom = d.source.domain();
  double c = 0.0;
  for (size_t t = 0; t < d.pieces.size(); ++t)
    for (int j = 0; j < dom.ny; ++j)
      for (int i = 0; i < dom.nx; ++i) {
        if (!dom.inside(i, j)) continue;
        double v = d.pieces[t].abs_at(i, j);
        if (v == 0.0) continue;
        double m = mf.value.at(i, j, 0);
        if (m > 0) c = std::max(c, v / m);
      }
  out.majorant_constant = c;
  return out;
}

// ------------------------------------------------------------- replacement

namespace {

// Smoothstep of class C^m: 0 before 0, 1 after 1.
double smoothstep(double t, int m) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  // Integral of s^m (1-s)^m, normalized; C^m at both ends.
  // Closed form via the regularized incomplete beta recurrence.
  double acc = 0.0;
  // Simpson on [0, t] is plenty accurate and keeps the code short.
  const int n = 64;
  double h = t / n;
  auto g = [&](double s) { return std::pow(s * (1 - s), m); };
  for (int i = 0; i < n; ++i)
    acc += h / 6 * (g(i * h) + 4 * g((i + 0.5) * h) + g((i + 1) * h));
  static std::map<int, double> total_cache;
  auto it = total_cache.find(m);
  double total;
  if (it != total_cache.end()) {
    total = it->second;
  } else {
    total = 0.0;
    double hh = 1.0 / 1024;
    for (int i = 0; i < 1024; ++i)
      total += hh / 6 * (g(i * hh) + 4 * g((i + 0.5) * hh) + g((i + 1) * hh));
    total_cache[m] = total;
  }
  return acc / total;
}

double radial_bump(double t2, int m) {
  // (1 - t^2)^m for t^2 < 1.
  double s = 1.0 - t2;
  return s > 0 ? std::pow(s, m) : 0.0;
}

}  // namespace

ReplacementResult replacement_sequence(const GridFunction& u,
                                       const DiffOperator& op,
                                       const NullspaceProfile& profile,
                                       int j) {
  const GridDomain& dom = u.domain();
  if (!dom.periodic_x)
    throw UsageError("replacement_sequence expects a halfspace strip");
  if (profile.verdict != CVerdict::CElliptic)
    throw NotCElliptic("replacement sequence needs a C-elliptic operator");
  const double width = dom.nx * dom.h;
  const int k = op.k;

  auto kernel = profile.kernel_basis();

  // Ball lattice at scale 2^-j: spacing s, radius s, mirror-reflected
  // interior balls for the projections.
  auto build_scale = [&](int jj) {
    struct Scale {
      double s;
      int rows, cols;
      std::vector<VPolynomial> proj;  // per ball, element of ker(A)
      double band;                    // rho_j support height
    };
    Scale sc;
    sc.s = std::ldexp(1.0, -jj - 1);
    if (sc.s < 2 * dom.h)
      throw ScaleTooFine("2^-j below the grid resolution");
    sc.band = std::ldexp(1.0, -jj);
    sc.cols = static_cast<int>(std::lround(width / sc.s));
    sc.rows = static_cast<int>(std::ceil(sc.band / sc.s)) + 2;
    sc.proj.reserve(static_cast<std::size_t>(sc.rows) * sc.cols);
    for (int b = 0; b < sc.rows; ++b)
      for (int a = 0; a < sc.cols; ++a) {
        double cx = a * sc.s, cy = b * sc.s;
        double ry = std::max(cy, 3 * sc.s);  // reflected ball height
        // Discrete least squares onto ker(A) over the reflected ball,
        // weighted by a radial bump; exact on sampled kernel polynomials.
        int K = static_cast<int>(kernel.size());
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(K);
        double r = sc.s;
        int ilo = dom.cell_of_x(cx - r) - 1, ihi = dom.cell_of_x(cx + r) + 1;
        int jlo = std::max(0, dom.cell_of_y(ry - r) - 1);
        int jhi = std::min(dom.ny - 1, dom.cell_of_y(ry + r) + 1);
        long cnt = 0;
        for (int jc = jlo; jc <= jhi; ++jc)
          for (int ic = ilo; ic <= ihi; ++ic) {
            double dx = dom.x0 + (ic + 0.5) * dom.h - cx;
            double dy = dom.cy(jc) - ry;
            double t2 = (dx * dx + dy * dy) / (r * r);
            double wgt = radial_bump(t2, 2);
            if (wgt <= 0.0) continue;
            ++cnt;
            std::vector<double> x{cx + dx, ry + dy};
            std::vector<std::vector<double>> kv(K);
            for (int a2 = 0; a2 < K; ++a2) kv[a2] = kernel[a2].evaluate(x);
            for (int a2 = 0; a2 < K; ++a2) {
              for (int b2 = 0; b2 < K; ++b2) {
                double dot = 0.0;
                for (int c = 0; c < op.dim_v; ++c) dot += kv[a2][c] * kv[b2][c];
                A(a2, b2) += wgt * dot;
              }
              double dotu = 0.0;
              for (int c = 0; c < op.dim_v; ++c)
                dotu += kv[a2][c] * u.at(ic, jc, c);
              rhs(a2) += wgt * dotu;
            }
          }
        if (cnt < K) throw ScaleTooFine("reflected ball misses the lattice");
        Eigen::VectorXd coef = A.ldlt().solve(rhs);
        VPolynomial p(2, op.dim_v);
        for (int a2 = 0; a2 < K; ++a2)
          p = p + kernel[a2].scaled(rat_of(coef(a2)));
        sc.proj.push_back(std::move(p));
      }
    return sc;
  };

  auto sc_j = build_scale(j);
  auto sc_j1 = build_scale(j + 1);

  const int smooth_class = k + 1;
  auto rho = [&](double y, double band) {
    // 1 on [0, band/2], 0 beyond band, C^{k+1} profile; |d^a rho| <~ 2^{j|a|}.
    return 1.0 - smoothstep(2.0 * y / band - 1.0, smooth_class);
  };

  // G_s(x) = sum_i rho_{s,i}(x) Pi_{s,i} u(x) with the normalized ball PoU.
  auto G_field = [&](const decltype(sc_j)& sc, double x, double y,
                     std::vector<double>& out) {
    double acc = 0.0;
    std::fill(out.begin(), out.end(), 0.0);
    int a0 = static_cast<int>(std::floor(x / sc.s));
    int b0 = static_cast<int>(std::floor(y / sc.s));
    for (int b = std::max(0, b0 - 1); b <= std::min(sc.rows - 1, b0 + 1); ++b)
      for (int da = -1; da <= 2; ++da) {
        int a = ((a0 + da) % sc.cols + sc.cols) % sc.cols;
        double cx = a * sc.s;
        double dx = std::remainder(x - cx, width);
        double dy = y - b * sc.s;
        double bump = radial_bump((dx * dx + dy * dy) / (sc.s * sc.s),
                                  smooth_class + 1);
        if (bump <= 0.0) continue;
        auto pv = sc.proj[static_cast<std::size_t>(b) * sc.cols + a].evaluate(
            std::vector<double>{cx + dx, y});
        for (int c = 0; c < op.dim_v; ++c) out[c] += bump * pv[c];
        acc += bump;
      }
    if (acc > 0)
      for (auto& v : out) v /= acc;
    return acc > 0;
  };

  ReplacementResult res;
  res.Tj = GridFunction(dom, op.dim_v);
  res.Ij = GridFunction(dom, op.dim_v);
  res.IIj = GridFunction(dom, op.dim_v);
  std::vector<double> gj(op.dim_v), gj1(op.dim_v);
  double lo = 1e300, hi = 0.0;
  for (int jc = 0; jc < dom.ny; ++jc)
    for (int ic = 0; ic < dom.nx; ++ic) {
      double x = dom.cx(ic), y = dom.cy(jc);
      double rj = rho(y, sc_j.band), rj1 = rho(y, sc_j1.band);
      bool has_j = rj > 0 ? G_field(sc_j, x, y, gj) : false;
      bool has_j1 = rj1 > 0 ? G_field(sc_j1, x, y, gj1) : false;
      for (int c = 0; c < op.dim_v; ++c) {
        double uv = u.at(ic, jc, c);
        double tj = (1 - rj) * uv + rj * (has_j ? gj[c] : uv);
        res.Tj.at(ic, jc, c) = tj;
        // I_j = (rho_j - rho_{j+1}) sum_m rho_{j,m}(u - Pi_{j,m} u)
        double iv = (rj - rj1) * (uv - (has_j ? gj[c] : uv));
        res.Ij.at(ic, jc, c) = iv;
        double iiv = rj1 * ((has_j1 ? gj1[c] : uv) - (has_j ? gj[c] : uv));
        res.IIj.at(ic, jc, c) = iiv;
      }
      double a = res.IIj.abs_at(ic, jc);
      if (a > 1e-14) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
  GridFunction diff = res.Tj;
  diff -= u;
  res.sup_T_minus_u = diff.max_abs();
  res.strip_lo = lo > hi ? 0.0 : lo;
  res.strip_hi = lo > hi ? 0.0 : hi;

  // ||II_j||_{W^{k,1}}: centered differences up to order k.
  double wk1 = 0.0;
  for (int l = 0; l <= k; ++l) {
    FdField dl = fd_gradient_l(res.IIj, l);
    double acc = 0.0;
    for (int jc = 0; jc < dom.ny; ++jc)
      for (int ic = 0; ic < dom.nx; ++ic)
        if (dl.is_valid(dom, ic, jc)) acc += dl.val.abs_at(ic, jc);
    wk1 += acc * dom.h * dom.h;
  }
  res.IIj_wk1 = wk1;

  FdField au = apply_fd(op, u);
  double acc = 0.0;
  for (int jc = 0; jc < dom.ny; ++jc)
    for (int ic = 0; ic < dom.nx; ++ic) {
      double y = dom.cy(jc);
      if (y < res.strip_lo || y > res.strip_hi) continue;
      if (au.is_valid(dom, ic, jc)) acc += au.val.abs_at(ic, jc);
    }
  res.au_l1_strip = acc * dom.h * dom.h;
  return res;
}

}  // namespace ellikorn
