#include "ellikorn/taylor.hpp"

#include "ellikorn/grid.hpp"

#include <cmath>

namespace ellikorn {

VPolynomial averaged_taylor(const VPolynomial& u, int m, const BallSpec& ball) {
  VPolynomial out(u.n(), u.dim());
  if (m < 0) return out;
  for (const auto& alpha : multiindices_up_to(u.n(), m)) {
    VPolynomial dau = u.derivative(alpha);
    if (dau.is_zero()) continue;
    Rat inv_afac = Rat(1) / Rat(mi_factorial(alpha));
    for (const auto& tau : multiindices_up_to(u.n(), alpha.order())) {
      if (!alpha.contains(tau)) continue;
      // (x - y)^alpha expanded: C(alpha,tau) (-1)^|tau| x^{alpha-tau} y^tau.
      Rat c = inv_afac * Rat(mi_binomial(alpha, tau));
      if (tau.order() % 2 != 0) c = -c;
      RatVec mom(u.dim(), Rat(0));
      for (const auto& [beta, v] : dau.coeffs()) {
        Rat mu = weight_moment(ball, beta.plus(tau));
        if (mu == 0) continue;
        for (int i = 0; i < u.dim(); ++i) mom[i] += v[i] * mu;
      }
      MultiIndex xpow = alpha.minus(tau);
      for (int i = 0; i < u.dim(); ++i)
        if (mom[i] != 0) out.add_term(xpow, i, c * mom[i]);
    }
  }
  return out;
}

// Unnormalized bump polynomial (1 - |y-c|^2/r^2)^rho, exact.
static VPolynomial bump_polynomial(const BallSpec& ball) {
  int n = ball.n();
  VPolynomial base(n, 1);
  base.add_term(MultiIndex::zero(n), 0, Rat(1));
  Rat r2 = ball.radius * ball.radius;
  for (int j = 0; j < n; ++j) {
    std::vector<int> e2(n, 0);
    e2[j] = 2;
    base.add_term(MultiIndex(e2), 0, Rat(-1) / r2);
    base.add_term(MultiIndex::unit(n, j), 0, Rat(2) * ball.center[j] / r2);
    base.add_term(MultiIndex::zero(n), 0, -ball.center[j] * ball.center[j] / r2);
  }
  VPolynomial p(n, 1);
  p.add_term(MultiIndex::zero(n), 0, Rat(1));
  for (int t = 0; t < ball.bump_exponent; ++t) {
    // p *= base
    VPolynomial q(n, 1);
    for (const auto& [a, va] : p.coeffs())
      for (const auto& [b, vb] : base.coeffs())
        q.add_term(a.plus(b), 0, va[0] * vb[0]);
    p = q;
  }
  return p;
}

VPolynomial averaged_taylor(const GridFunction& u, int m, const BallSpec& ball) {
  const GridDomain& dom = u.domain();
  const int n = 2;
  if (ball.n() != n) throw DimensionMismatch("grid averaged_taylor is 2-D");
  double cx = to_double(ball.center[0]), cy = to_double(ball.center[1]);
  double r = to_double(ball.radius);

  // T_m u(x) = int u(y) K(x,y) dy with
  // K(x,y) = sum_{|g|<=m} S_{m,g} (y-x)^g d^g w(y) / g!,
  // S_{m,g} = sum_{|b| <= m-|g|} C(b+g, b).
  auto gammas = multiindices_up_to(n, m);
  VPolynomial wp = bump_polynomial(ball);
  double normalizer =
      1.0 / ball_moment(MultiIndex::zero(n), ball.radius, ball.bump_exponent)
                .value();
  std::vector<DPoly> dgw;
  std::vector<double> sfac;
  for (const auto& g : gammas) {
    dgw.emplace_back(wp.derivative(g));
    double s = 0.0;
    for (const auto& b : multiindices_up_to(n, m - g.order()))
      s += static_cast<double>(mi_binomial(b.plus(g), b).convert_to<long>());
    sfac.push_back(s / static_cast<double>(mi_factorial(g).convert_to<long>()));
  }

  auto out_mis = multiindices_up_to(n, m);
  std::vector<std::vector<double>> coeffs(out_mis.size(),
                                          std::vector<double>(u.comps(), 0.0));

  int i_lo = dom.cell_of_x(cx - r), i_hi = dom.cell_of_x(cx + r) + 1;
  int j_lo = dom.cell_of_y(cy - r), j_hi = dom.cell_of_y(cy + r) + 1;
  double h = dom.h;
  auto in_ball = [&](double x, double y) {
    return (x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r;
  };

  auto accumulate = [&](double y1, double y2, double w_cell,
                        const double* uval) {
    for (size_t gi = 0; gi < gammas.size(); ++gi) {
      const auto& g = gammas[gi];
      double dw = dgw[gi].eval(y1, y2)[0] * normalizer;
      if (dw == 0.0) continue;
      double base = sfac[gi] * dw * w_cell;
      // Expand (y-x)^g over x-monomials.
      for (size_t oi = 0; oi < out_mis.size(); ++oi) {
        const auto& d = out_mis[oi];
        if (!g.contains(d)) continue;
        MultiIndex rest = g.minus(d);
        double c = base *
                   static_cast<double>(mi_binomial(g, d).convert_to<long>()) *
                   std::pow(y1, rest[0]) * std::pow(y2, rest[1]);
        if (d.order() % 2 != 0) c = -c;
        for (int comp = 0; comp < u.comps(); ++comp)
          coeffs[oi][comp] += c * uval[comp];
      }
    }
  };

  // Gauss-Legendre nodes exact on the bump-kernel polynomial per cell (u is
  // frozen at the cell value, so constants are reproduced to roundoff).
  const int G = std::min(8, (2 * ball.bump_exponent + m) / 2 + 2);
  std::vector<double> gx(G), gw(G);
  {
    // Nodes of Legendre P_G by Newton on [-1,1].
    for (int q = 0; q < G; ++q) {
      double x = std::cos(M_PI * (q + 0.75) / (G + 0.5));
      for (int it = 0; it < 60; ++it) {
        double p0 = 1.0, p1 = x;
        for (int t = 2; t <= G; ++t) {
          double p2 = ((2 * t - 1) * x * p1 - (t - 1) * p0) / t;
          p0 = p1;
          p1 = p2;
        }
        double dp = G * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      double p0 = 1.0, p1 = x;
      for (int t = 2; t <= G; ++t) {
        double p2 = ((2 * t - 1) * x * p1 - (t - 1) * p0) / t;
        p0 = p1;
        p1 = p2;
      }
      double dp = G * (x * p1 - p0) / (x * x - 1.0);
      gx[q] = x;
      gw[q] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  std::vector<double> uval(u.comps());
  for (int j = j_lo; j <= j_hi; ++j)
    for (int i = i_lo; i <= i_hi; ++i) {
      double x1 = dom.cx(i), y1 = dom.cy(j);
      double hx = h / 2;
      bool c00 = in_ball(x1 - hx, y1 - hx), c01 = in_ball(x1 - hx, y1 + hx);
      bool c10 = in_ball(x1 + hx, y1 - hx), c11 = in_ball(x1 + hx, y1 + hx);
      bool any = c00 || c01 || c10 || c11 || in_ball(x1, y1);
      if (!any) continue;
      if (!dom.inside(i, j))
        throw BallOutsideGrid("ball cell (" + std::to_string(i) + "," +
                              std::to_string(j) + ") outside the sampled region");
      for (int c = 0; c < u.comps(); ++c) uval[c] = u.at(i, j, c);
      if (c00 && c01 && c10 && c11) {
        for (int qa = 0; qa < G; ++qa)
          for (int qb = 0; qb < G; ++qb)
            accumulate(x1 + hx * gx[qa], y1 + hx * gx[qb],
                       gw[qa] * gw[qb] * hx * hx, uval.data());
      } else {
        // Boundary cell: clip by subdivision depth 3.
        const int s = 8;
        double hs = h / s, ws = hs * hs;
        for (int b = 0; b < s; ++b)
          for (int a = 0; a < s; ++a) {
            double xs = x1 - hx + (a + 0.5) * hs, ys = y1 - hx + (b + 0.5) * hs;
            if (in_ball(xs, ys)) accumulate(xs, ys, ws, uval.data());
          }
      }
    }

  VPolynomial out(n, u.comps());
  for (size_t oi = 0; oi < out_mis.size(); ++oi)
    for (int c = 0; c < u.comps(); ++c)
      out.add_term(out_mis[oi], c, rat_of(coeffs[oi][c]));
  return out;
}

}  // namespace ellikorn
