#include "ellikorn/projection.hpp"

#include "ellikorn/fd.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Dense>

#include <cmath>

namespace ellikorn {

using json = nlohmann::ordered_json;

// Gram matrix of the monomial coordinate basis of P_{m-1}(R^n;V) under the
// normalized L2(B) pairing; block-diagonal over V-components.
static RatMat monomial_gram(const BallSpec& ball,
                            const std::vector<MultiIndex>& mis, int dim_v) {
  BallSpec flat = ball;
  flat.bump_exponent = 0;
  int nb = static_cast<int>(mis.size());
  RatMat g(nb * dim_v, RatVec(nb * dim_v, Rat(0)));
  for (int t = 0; t < nb; ++t)
    for (int s = 0; s < nb; ++s) {
      Rat mu = weight_moment(flat, mis[t].plus(mis[s]));
      if (mu == 0) continue;
      for (int i = 0; i < dim_v; ++i) g[t * dim_v + i][s * dim_v + i] = mu;
    }
  return g;
}

ProjectionOperator build_projection(const DiffOperator& op, const BallSpec& ball,
                                    const NullspaceProfile& profile,
                                    int m_override) {
  if (profile.verdict != CVerdict::CElliptic)
    throw NotCElliptic("projection requires a C-elliptic operator");
  ProjectionOperator P;
  P.op = op;
  P.ball = ball;
  P.m = m_override > 0 ? m_override : *profile.deg_p;
  if (P.m < *profile.deg_p)
    throw MalformedSpec("m must be at least deg_P(A)");
  if (ball.bump_exponent != 0 && ball.bump_exponent < P.m)
    throw MalformedSpec("bump exponent too small for exact Taylor identities");

  const int n = op.n, dv = op.dim_v;
  P.basis_mis = multiindices_up_to(n, P.m - 1);
  const int D = P.coord_dim();
  RatMat G = monomial_gram(ball, P.basis_mis, dv);

  // Kernel-first basis, per homogeneous degree; the complement W_l is the
  // L2(B)-orthogonal complement of Z_l inside P_l^h (x) V.
  std::vector<RatVec> kernel_coords, compl_coords;
  for (int l = 0; l < P.m; ++l) {
    auto z_basis = l < static_cast<int>(profile.per_degree.size())
                       ? profile.per_degree[l].second
                       : kernel_homogeneous(op, l);
    std::vector<RatVec> zc;
    for (const auto& z : z_basis)
      zc.push_back(monomial_coordinates(z, P.basis_mis));
    // Columns of the homogeneous block of degree l.
    std::vector<int> block_cols;
    for (size_t t = 0; t < P.basis_mis.size(); ++t)
      if (P.basis_mis[t].order() == l)
        for (int i = 0; i < dv; ++i)
          block_cols.push_back(static_cast<int>(t) * dv + i);
    // Nullspace of (z^T G) restricted to the block.
    RatMat sys(zc.size(), RatVec(block_cols.size(), Rat(0)));
    for (size_t r = 0; r < zc.size(); ++r) {
      RatVec gz = rat_matvec(G, zc[r]);
      for (size_t c = 0; c < block_cols.size(); ++c) sys[r][c] = gz[block_cols[c]];
    }
    auto wnull = rat_nullspace(sys, static_cast<int>(block_cols.size()));
    for (auto& kc : zc) kernel_coords.push_back(std::move(kc));
    for (const auto& w : wnull) {
      RatVec full(D, Rat(0));
      for (size_t c = 0; c < block_cols.size(); ++c) full[block_cols[c]] = w[c];
      compl_coords.push_back(std::move(full));
    }
  }
  P.kernel_count = static_cast<int>(kernel_coords.size());
  std::vector<RatVec> all_coords = kernel_coords;
  all_coords.insert(all_coords.end(), compl_coords.begin(), compl_coords.end());
  if (static_cast<int>(all_coords.size()) != D)
    throw SingularGram("kernel + complement do not span P_{m-1}");

  for (const auto& c : all_coords)
    P.psi.push_back(from_monomial_coordinates(n, dv, P.basis_mis, c));

  // Coordinate matrix (columns = psi), Gram in the psi basis, dual basis.
  RatMat Pm(D, RatVec(D, Rat(0)));
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) Pm[i][j] = all_coords[j][i];
  RatMat GP = rat_matmul(G, Pm);
  RatMat Gpsi(D, RatVec(D, Rat(0)));
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      Rat acc(0);
      for (int t = 0; t < D; ++t) acc += Pm[t][i] * GP[t][j];
      Gpsi[i][j] = acc;
    }
  RatMat Gpsi_inv = rat_inverse(Gpsi);
  P.dual_coeffs = rat_matmul(Pm, Gpsi_inv);

  // pi_matrix = P_K (Dual_K)^T G : coordinates of Pi~ q.
  RatMat DualK_T_G(P.kernel_count, RatVec(D, Rat(0)));
  for (int j = 0; j < P.kernel_count; ++j) {
    RatVec dj(D);
    for (int i = 0; i < D; ++i) dj[i] = P.dual_coeffs[i][j];
    RatVec gdj = rat_matvec(G, dj);
    DualK_T_G[j] = gdj;
  }
  P.pi_matrix.assign(D, RatVec(D, Rat(0)));
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      Rat acc(0);
      for (int t = 0; t < P.kernel_count; ++t)
        acc += Pm[i][t] * DualK_T_G[t][j];
      P.pi_matrix[i][j] = acc;
    }

  // Correctors xi_l in W: <w, psi*_l> = <A w, A xi_l> for all w in W.
  int wc = D - P.kernel_count;
  if (wc > 0) {
    std::vector<VPolynomial> Apsi;
    for (int a = 0; a < wc; ++a)
      Apsi.push_back(apply_to_polynomial(op, P.psi[P.kernel_count + a]));
    RatMat GA(wc, RatVec(wc, Rat(0)));
    for (int a = 0; a < wc; ++a)
      for (int b = 0; b <= a; ++b) {
        Rat v = l2_pair(ball, Apsi[a], Apsi[b]);
        GA[a][b] = v;
        GA[b][a] = v;
      }
    for (int l = 0; l < wc; ++l) {
      RatVec rhs(wc, Rat(0));
      // <psi_{K+a}, psi*_{K+l}> = delta_{al}
      rhs[l] = 1;
      RatVec x = rat_solve(GA, rhs);
      VPolynomial xi(n, dv);
      for (int a = 0; a < wc; ++a)
        xi = xi + P.psi[P.kernel_count + a].scaled(x[a]);
      P.xi_polys.push_back(std::move(xi));
    }
  }
  return P;
}

VPolynomial apply_projection(const ProjectionOperator& P, const VPolynomial& u) {
  VPolynomial t = averaged_taylor(u, P.m - 1, P.ball);
  RatVec coords = monomial_coordinates(t, P.basis_mis);
  RatVec out = rat_matvec(P.pi_matrix, coords);
  return from_monomial_coordinates(P.op.n, P.op.dim_v, P.basis_mis, out);
}

VPolynomial apply_projection(const ProjectionOperator& P, const GridFunction& u) {
  VPolynomial t = averaged_taylor(u, P.m - 1, P.ball);
  RatVec coords = monomial_coordinates(t, P.basis_mis);
  RatVec out = rat_matvec(P.pi_matrix, coords);
  return from_monomial_coordinates(P.op.n, P.op.dim_v, P.basis_mis, out);
}

double projection_stability_ratio(const ProjectionOperator& P,
                                  const GridFunction& u) {
  DPoly pu(apply_projection(P, u));
  const GridDomain& dom = u.domain();
  double sup = 0.0;
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j)) continue;
      auto v = pu.eval(dom.cx(i), dom.cy(j));
      double s = 0.0;
      for (double x : v) s += x * x;
      sup = std::max(sup, std::sqrt(s));
    }
  // avg_B |u| by midpoint quadrature over cells inside B.
  double bx = to_double(P.ball.center[0]), by = to_double(P.ball.center[1]);
  double r = to_double(P.ball.radius);
  double acc = 0.0;
  long cnt = 0;
  for (int j = dom.cell_of_y(by - r); j <= dom.cell_of_y(by + r) + 1; ++j)
    for (int i = dom.cell_of_x(bx - r); i <= dom.cell_of_x(bx + r) + 1; ++i) {
      if (!dom.inside(i, j)) continue;
      double dx = dom.cx(i) - bx, dy = dom.cy(j) - by;
      if (dx * dx + dy * dy >= r * r) continue;
      acc += u.abs_at(i, j);
      ++cnt;
    }
  if (cnt == 0) throw BallOutsideGrid("no lattice points in B");
  double avg = acc / cnt;
  if (avg == 0.0) return sup == 0.0 ? 0.0 : 1e300;
  return sup / avg;
}

VPolynomial kernel_projection_lsq(const ProjectionOperator& P,
                                  const GridFunction& u) {
  const GridDomain& dom = u.domain();
  double bx = to_double(P.ball.center[0]), by = to_double(P.ball.center[1]);
  double r = to_double(P.ball.radius);
  std::vector<DPoly> kb;
  for (int a = 0; a < P.kernel_count; ++a) kb.emplace_back(P.psi[a]);
  int K = P.kernel_count, dv = P.op.dim_v;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(K);
  long cnt = 0;
  for (int j = dom.cell_of_y(by - r); j <= dom.cell_of_y(by + r) + 1; ++j)
    for (int i = dom.cell_of_x(bx - r); i <= dom.cell_of_x(bx + r) + 1; ++i) {
      if (!dom.inside(i, j)) continue;
      double dx = dom.cx(i) - bx, dy = dom.cy(j) - by;
      if (dx * dx + dy * dy >= r * r) continue;
      ++cnt;
      std::vector<std::vector<double>> kv;
      for (const auto& q : kb) kv.push_back(q.eval(dom.cx(i), dom.cy(j)));
      for (int a = 0; a < K; ++a) {
        for (int bq = 0; bq < K; ++bq) {
          double dot = 0.0;
          for (int c = 0; c < dv; ++c) dot += kv[a][c] * kv[bq][c];
          A(a, bq) += dot;
        }
        double dotu = 0.0;
        for (int c = 0; c < dv; ++c) dotu += kv[a][c] * u.at(i, j, c);
        b(a) += dotu;
      }
    }
  if (cnt < K) throw SingularGram("fewer lattice points than kernel dimension");
  Eigen::VectorXd sol = A.ldlt().solve(b);
  VPolynomial out(P.op.n, dv);
  for (int a = 0; a < K; ++a) out = out + P.psi[a].scaled(rat_of(sol(a)));
  return out;
}

// ------------------------------------------------------------- Maz'ya kernel

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double tol,
                        int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  if (b <= a) return 0.0;
  double m = 0.5 * (a + b);
  return adaptive_simpson(f, a, b, f(a), f(m), f(b), tol, 28);
}

}  // namespace

double maz_kernel(const MultiIndex& alpha, const BallSpec& ball,
                  const std::vector<double>& x, const std::vector<double>& y) {
  const int n = ball.n();
  const int m = alpha.order();
  double d2 = 0.0;
  for (int j = 0; j < n; ++j) d2 += (y[j] - x[j]) * (y[j] - x[j]);
  double dist = std::sqrt(d2);
  if (dist < 1e-14) throw CoincidentPoints("maz_kernel needs x != y");
  std::vector<double> e(n);
  for (int j = 0; j < n; ++j) e[j] = (y[j] - x[j]) / dist;

  // Ray {x + t e : t >= dist} meets the ball for t in [t0, t1].
  double bq = 0.0, cq = -to_double(ball.radius) * to_double(ball.radius);
  for (int j = 0; j < n; ++j) {
    double dj = x[j] - to_double(ball.center[j]);
    bq += 2 * dj * e[j];
    cq += dj * dj;
  }
  double disc = bq * bq - 4 * cq;
  if (disc <= 0) return 0.0;
  double t0 = (-bq - std::sqrt(disc)) / 2.0, t1 = (-bq + std::sqrt(disc)) / 2.0;
  t0 = std::max(t0, dist);
  if (t1 <= t0) return 0.0;

  auto integrand = [&](double t) {
    std::vector<double> p(n);
    for (int j = 0; j < n; ++j) p[j] = x[j] + t * e[j];
    return weight_value(ball, p) * std::pow(t, n - 1);
  };
  double ray = integrate_adaptive(integrand, t0, t1, 1e-12);

  double mono = 1.0;
  for (int j = 0; j < n; ++j) mono *= std::pow(y[j] - x[j], alpha[j]);
  double sign = (m % 2 == 0) ? 1.0 : -1.0;
  double afac = to_double(Rat(mi_factorial(alpha)));
  return sign * m / afac * mono / std::pow(dist, n) * ray;
}

std::vector<double> maz_representation_residuals(
    const VPolynomial& u, int m, const BallSpec& ball, double half_side, int N,
    const std::vector<std::vector<double>>& points) {
  auto alphas = multiindices_of_order(2, m);
  std::vector<DPoly> dau;
  for (const auto& a : alphas) dau.emplace_back(u.derivative(a));
  DPoly tu(averaged_taylor(u, m - 1, ball));
  DPoly uD(u);

  const double h = 2.0 * half_side / N;
  const double gl2[2] = {-0.5 / std::sqrt(3.0), 0.5 / std::sqrt(3.0)};
  const double gl3x[3] = {-0.5 * std::sqrt(3.0 / 5.0), 0.0,
                          0.5 * std::sqrt(3.0 / 5.0)};
  const double gl3w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  double bx = to_double(ball.center[0]), by = to_double(ball.center[1]);
  double r = to_double(ball.radius);

  std::vector<double> residuals(points.size());
  parallel_for(points.size(), [&](std::size_t pi) {
    const auto& x = points[pi];
    // Shared ray integral per (x, y); alpha only changes the direction factor.
    auto kernel_parts = [&](double y1, double y2, double* out) {
      double dx = y1 - x[0], dy = y2 - x[1];
      double dist = std::hypot(dx, dy);
      for (size_t a = 0; a < alphas.size(); ++a) out[a] = 0.0;
      if (dist < 1e-14) return;
      double ex = dx / dist, ey = dy / dist;
      double bq = 2 * ((x[0] - bx) * ex + (x[1] - by) * ey);
      double cq = (x[0] - bx) * (x[0] - bx) + (x[1] - by) * (x[1] - by) - r * r;
      double disc = bq * bq - 4 * cq;
      if (disc <= 0) return;
      double t0 = std::max((-bq - std::sqrt(disc)) / 2, dist);
      double t1 = (-bq + std::sqrt(disc)) / 2;
      if (t1 <= t0) return;
      // Fixed-order GL on the chord: the integrand is a polynomial there.
      double ray = 0.0;
      const int G = 8;
      for (int q = 0; q < G; ++q) {
        static const double gx[8] = {-0.9602898564975363, -0.7966664774136267,
                                     -0.5255324099163290, -0.1834346424956498,
                                     0.1834346424956498,  0.5255324099163290,
                                     0.7966664774136267,  0.9602898564975363};
        static const double gw[8] = {0.1012285362903763, 0.2223810344533745,
                                     0.3137066458778873, 0.3626837833783620,
                                     0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};
        double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[q];
        std::vector<double> p{x[0] + t * ex, x[1] + t * ey};
        ray += 0.5 * (t1 - t0) * gw[q] * weight_value(ball, p) * t;
      }
      double base = m * ray / (dist * dist);
      for (size_t a = 0; a < alphas.size(); ++a) {
        double mono = std::pow(dx, alphas[a][0]) * std::pow(dy, alphas[a][1]);
        double afac = to_double(Rat(mi_factorial(alphas[a])));
        out[a] = ((m % 2 == 0) ? 1.0 : -1.0) * base * mono / afac;
      }
    };

    std::vector<double> acc(alphas.size(), 0.0), kv(alphas.size());
    auto add_gl = [&](double cx0, double cy0, double side, int order) {
      for (int qa = 0; qa < order; ++qa)
        for (int qb = 0; qb < order; ++qb) {
          double y1, y2, w;
          if (order == 3) {
            y1 = cx0 + side * gl3x[qa];
            y2 = cy0 + side * gl3x[qb];
            w = gl3w[qa] * gl3w[qb] * side * side;
          } else {
            y1 = cx0 + side * gl2[qa];
            y2 = cy0 + side * gl2[qb];
            w = 0.25 * side * side;
          }
          kernel_parts(y1, y2, kv.data());
          for (size_t a = 0; a < alphas.size(); ++a) {
            if (kv[a] == 0.0) continue;
            acc[a] += w * kv[a] * dau[a].eval(y1, y2)[0];
          }
        }
    };

    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        double cx0 = -half_side + (i + 0.5) * h;
        double cy0 = -half_side + (j + 0.5) * h;
        double d = std::max(std::abs(cx0 - x[0]), std::abs(cy0 - x[1]));
        if (d < 1.5 * h) {
          int s = 64;
          for (int b = 0; b < s; ++b)
            for (int a = 0; a < s; ++a)
              add_gl(cx0 - h / 2 + (a + 0.5) * h / s,
                     cy0 - h / 2 + (b + 0.5) * h / s, h / s, 2);
        } else if (d < 8.5 * h) {
          int s = 8;
          for (int b = 0; b < s; ++b)
            for (int a = 0; a < s; ++a)
              add_gl(cx0 - h / 2 + (a + 0.5) * h / s,
                     cy0 - h / 2 + (b + 0.5) * h / s, h / s, 2);
        } else {
          add_gl(cx0, cy0, h, 3);
        }
      }

    double integral_side = 0.0;
    for (size_t a = 0; a < alphas.size(); ++a) integral_side += acc[a];
    double lhs = uD.eval(x[0], x[1])[0];
    double rhs = tu.eval(x[0], x[1])[0] + integral_side;
    residuals[pi] = std::abs(lhs - rhs);
  });
  return residuals;
}

// Cell-average of |z|^{-a} over the unit square centered at 0 (computed once
// per exponent by refinement; scaled by h^{-a} at use sites).
static double unit_cell_avg_inverse_power(double a) {
  static std::map<double, double> cache;
  auto it = cache.find(a);
  if (it != cache.end()) return it->second;
  double acc = 0.0;
  const int N = 512;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      double x = (i + 0.5) / N - 0.5, y = (j + 0.5) / N - 0.5;
      acc += std::pow(std::hypot(x, y), -a);
    }
  double v = acc / (N * N);
  cache[a] = v;
  return v;
}

double riesz_bound_check(const DiffOperator& op, const ProjectionOperator& P,
                         const GridFunction& u, int l) {
  if (l < 0 || l >= op.k) throw MalformedSpec("need 0 <= l < k");
  const GridDomain& dom = u.domain();
  const double h = dom.h;
  FdField au = apply_fd(op, u);
  // |A u| at valid cells.
  std::vector<double> absau(dom.mask.size(), 0.0);
  bool all_zero = true;
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i)
      if (dom.inside(i, j) && au.is_valid(dom, i, j)) {
        absau[dom.idx(i, j)] = au.val.abs_at(i, j);
        if (absau[dom.idx(i, j)] > 1e-13 * u.max_abs()) all_zero = false;
      }

  VPolynomial pu = apply_projection(P, u);
  FdField dl_u = fd_gradient_l(u, l);
  auto dl_mis = multiindices_of_order(2, l);
  std::vector<DPoly> dl_pu;
  for (const auto& a : dl_mis) dl_pu.emplace_back(pu.derivative(a));
  std::vector<double> wts;
  for (const auto& a : dl_mis)
    wts.push_back(std::sqrt(to_double(Rat(factorial(l)) / Rat(mi_factorial(a)))));

  if (all_zero) return 0.0;  // u in ker(A): numerator vanishes by convention

  double beta = op.k - l;  // kernel exponent: |z|^{beta - n}, n = 2
  double self_avg =
      unit_cell_avg_inverse_power(2.0 - beta) * std::pow(h, beta - 2.0);

  double worst = 0.0;
  int margin = fd_margin(op) + std::max(1, fd_margin_order(l));
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j) || !footprint_interior(dom, i, j, margin)) continue;
      if (!dl_u.is_valid(dom, i, j)) continue;
      // numerator |D^l (u - Pi u)|
      double num2 = 0.0;
      for (size_t t = 0; t < dl_mis.size(); ++t) {
        auto pv = dl_pu[t].eval(dom.cx(i), dom.cy(j));
        for (int c = 0; c < op.dim_v; ++c) {
          int comp = static_cast<int>(t) * op.dim_v + c;
          double diff = dl_u.val.at(i, j, comp) - wts[t] * pv[c];
          num2 += diff * diff;
        }
      }
      double num = std::sqrt(num2);
      // denominator: discrete Riesz potential
      double den = 0.0;
      for (int jj = 0; jj < dom.ny; ++jj)
        for (int ii = 0; ii < dom.nx; ++ii) {
          double a = absau[dom.idx(ii, jj)];
          if (a == 0.0) continue;
          if (ii == i && jj == j) {
            den += a * self_avg * h * h;
          } else {
            double dx = (ii - i) * h, dy = (jj - j) * h;
            den += a * std::pow(std::hypot(dx, dy), beta - 2.0) * h * h;
          }
        }
      if (den <= 0)
        throw DegenerateDenominator("Riesz potential vanished at an interior node");
      worst = std::max(worst, num / den);
    }
  return worst;
}

// ----------------------------------------------------------- serialization

std::string ProjectionOperator::to_json() const {
  json j;
  j["op"] = json::parse(operator_to_json(op));
  j["ball"] = {{"center", {rat_to_string(ball.center[0]), rat_to_string(ball.center[1])}},
               {"radius", rat_to_string(ball.radius)},
               {"bump_exponent", ball.bump_exponent}};
  j["m"] = m;
  j["kernel_count"] = kernel_count;
  auto poly_to_json = [&](const VPolynomial& p) {
    json t = json::array();
    for (const auto& [a, v] : p.coeffs()) {
      json term;
      term["alpha"] = a.entries();
      json vv = json::array();
      for (const auto& x : v) vv.push_back(rat_to_string(x));
      term["coef"] = vv;
      t.push_back(term);
    }
    return t;
  };
  j["psi"] = json::array();
  for (const auto& p : psi) j["psi"].push_back(poly_to_json(p));
  j["xi_polys"] = json::array();
  for (const auto& p : xi_polys) j["xi_polys"].push_back(poly_to_json(p));
  auto mat_to_json = [&](const RatMat& m_) {
    json rows = json::array();
    for (const auto& r : m_) {
      json row = json::array();
      for (const auto& x : r) row.push_back(rat_to_string(x));
      rows.push_back(row);
    }
    return rows;
  };
  j["dual_coeffs"] = mat_to_json(dual_coeffs);
  j["pi_matrix"] = mat_to_json(pi_matrix);
  return j.dump(2);
}

static Rat rat_from_string(const std::string& s) {
  return Rat(s);
}

ProjectionOperator projection_from_json(const std::string& text) {
  json j = json::parse(text);
  ProjectionOperator P;
  {
    // Round-trip the operator through a temp file-less path.
    json jop = j["op"];
    std::vector<OperatorTerm> terms;
    for (const auto& jt : jop["terms"]) {
      OperatorTerm t;
      t.alpha = MultiIndex(jt["alpha"].get<std::vector<int>>());
      t.matrix = jt["matrix"].get<std::vector<std::vector<double>>>();
      terms.push_back(t);
    }
    P.op = make_operator(jop["n"], jop["k"], jop["dim_v"], jop["dim_w"], terms);
    if (jop.contains("name")) P.op.name = jop["name"];
  }
  P.ball.center = {rat_from_string(j["ball"]["center"][0]),
                   rat_from_string(j["ball"]["center"][1])};
  P.ball.radius = rat_from_string(j["ball"]["radius"]);
  P.ball.bump_exponent = j["ball"]["bump_exponent"];
  P.m = j["m"];
  P.kernel_count = j["kernel_count"];
  P.basis_mis = multiindices_up_to(P.op.n, P.m - 1);
  auto poly_from_json = [&](const json& t) {
    VPolynomial p(P.op.n, P.op.dim_v);
    for (const auto& term : t) {
      MultiIndex a(term["alpha"].get<std::vector<int>>());
      for (int i = 0; i < P.op.dim_v; ++i)
        p.add_term(a, i, rat_from_string(term["coef"][i].get<std::string>()));
    }
    return p;
  };
  for (const auto& t : j["psi"]) P.psi.push_back(poly_from_json(t));
  for (const auto& t : j["xi_polys"]) P.xi_polys.push_back(poly_from_json(t));
  auto mat_from_json = [&](const json& rows) {
    RatMat m_;
    for (const auto& r : rows) {
      RatVec row;
      for (const auto& x : r) row.push_back(rat_from_string(x.get<std::string>()));
      m_.push_back(std::move(row));
    }
    return m_;
  };
  P.dual_coeffs = mat_from_json(j["dual_coeffs"]);
  P.pi_matrix = mat_from_json(j["pi_matrix"]);
  return P;
}

}  // namespace ellikorn
