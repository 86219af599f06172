#include "ellikorn/korn.hpp"

#include "ellikorn/fft.hpp"
#include "ellikorn/gallery.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

namespace ellikorn {

// ------------------------------------------------------------ fd primitives

const std::vector<std::pair<int, double>>& stencil_1d(int order) {
  static const std::vector<std::vector<std::pair<int, double>>> table = {
      {{0, 1.0}},
      {{-1, -0.5}, {1, 0.5}},
      {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
      {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
      {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
  };
  if (order < 0 || order >= static_cast<int>(table.size()))
    throw MalformedSpec("unsupported stencil order " + std::to_string(order));
  return table[order];
}

int fd_margin_order(int order) {
  int m = 0;
  for (const auto& [off, c] : stencil_1d(order)) m = std::max(m, std::abs(off));
  return m;
}

int fd_margin(const DiffOperator& op) {
  int m = 0;
  for (const auto& [a, mat] : op.terms)
    m = std::max(m, std::max(fd_margin_order(a[0]), fd_margin_order(a[1])));
  return m;
}

bool footprint_interior(const GridDomain& dom, int i, int j, int margin) {
  for (int dj = -margin; dj <= margin; ++dj)
    for (int di = -margin; di <= margin; ++di)
      if (!dom.inside(i + di, j + dj)) return false;
  return true;
}

// 2-D tensor stencil of d^alpha scaled by h^{-|alpha|}.
static std::vector<std::tuple<int, int, double>> tensor_stencil(
    const MultiIndex& a, double h) {
  std::vector<std::tuple<int, int, double>> out;
  double scale = std::pow(h, -a.order());
  for (const auto& [ox, cx] : stencil_1d(a[0]))
    for (const auto& [oy, cy] : stencil_1d(a[1]))
      out.emplace_back(ox, oy, cx * cy * scale);
  return out;
}

FdField apply_fd(const DiffOperator& op, const GridFunction& u) {
  const GridDomain& dom = u.domain();
  FdField out;
  out.val = GridFunction(dom, op.dim_w);
  out.valid.assign(dom.mask.size(), 0);
  int margin = fd_margin(op);
  std::vector<std::pair<MultiIndex, std::vector<std::tuple<int, int, double>>>>
      stencils;
  for (const auto& [a, mat] : op.terms) stencils.emplace_back(a, tensor_stencil(a, dom.h));
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j) || !footprint_interior(dom, i, j, margin)) continue;
      out.valid[dom.idx(i, j)] = 1;
      for (size_t t = 0; t < stencils.size(); ++t) {
        const auto& mat = op.terms.at(stencils[t].first);
        for (const auto& [ox, oy, c] : stencils[t].second)
          for (int w = 0; w < op.dim_w; ++w)
            for (int v = 0; v < op.dim_v; ++v) {
              double m = to_double(mat[w][v]);
              if (m != 0.0)
                out.val.at(i, j, w) += c * m * u.at(i + ox, j + oy, v);
            }
      }
    }
  return out;
}

FdField fd_gradient_l(const GridFunction& u, int l) {
  const GridDomain& dom = u.domain();
  auto mis = multiindices_of_order(2, l);
  int comps = u.comps();
  FdField out;
  out.val = GridFunction(dom, static_cast<int>(mis.size()) * comps);
  out.valid.assign(dom.mask.size(), 0);
  int margin = 0;
  for (const auto& a : mis)
    margin = std::max(margin, std::max(fd_margin_order(a[0]), fd_margin_order(a[1])));
  std::vector<std::vector<std::tuple<int, int, double>>> stencils;
  std::vector<double> wts;
  for (const auto& a : mis) {
    stencils.push_back(tensor_stencil(a, dom.h));
    wts.push_back(std::sqrt(to_double(Rat(factorial(l)) / Rat(mi_factorial(a)))));
  }
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j) || !footprint_interior(dom, i, j, margin)) continue;
      out.valid[dom.idx(i, j)] = 1;
      for (size_t t = 0; t < mis.size(); ++t)
        for (const auto& [ox, oy, c] : stencils[t])
          for (int v = 0; v < comps; ++v)
            out.val.at(i, j, static_cast<int>(t) * comps + v) +=
                wts[t] * c * u.at(i + ox, j + oy, v);
    }
  return out;
}

// ----------------------------------------------------------------- assembly

AssembledOperator assemble_fd(const DiffOperator& op, const GridDomain& dom,
                              bool dirichlet) {
  AssembledOperator A;
  A.dom = &dom;
  A.op = op;
  A.margin = fd_margin(op);
  A.dirichlet = dirichlet;
  A.dof_of_cell.assign(dom.mask.size(), -1);
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j)) continue;
      bool is_dof = dirichlet ? footprint_interior(dom, i, j, A.margin) : true;
      if (is_dof) {
        A.dof_of_cell[dom.idx(i, j)] = static_cast<int>(A.dof_cells.size());
        A.dof_cells.emplace_back(i, j);
      }
    }
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j)) continue;
      if (dirichlet || footprint_interior(dom, i, j, A.margin))
        A.row_cells.emplace_back(i, j);
    }
  if (A.row_cells.empty() || A.dof_cells.empty())
    throw DomainTooThin("no stencil-valid nodes for the footprint");

  std::vector<Eigen::Triplet<double>> trips;
  std::vector<std::pair<MultiIndex, std::vector<std::tuple<int, int, double>>>>
      stencils;
  for (const auto& [a, mat] : op.terms) stencils.emplace_back(a, tensor_stencil(a, dom.h));
  for (size_t r = 0; r < A.row_cells.size(); ++r) {
    auto [i, j] = A.row_cells[r];
    for (const auto& [a, st] : stencils) {
      const auto& mat = op.terms.at(a);
      for (const auto& [ox, oy, c] : st) {
        int dof = -1;
        int ii = i + ox, jj = j + oy;
        if (dom.inside(ii, jj)) dof = A.dof_of_cell[dom.idx(ii, jj)];
        if (dof < 0) continue;  // dirichlet: value zero outside the dof set
        for (int w = 0; w < op.dim_w; ++w)
          for (int v = 0; v < op.dim_v; ++v) {
            double m = to_double(mat[w][v]);
            if (m != 0.0)
              trips.emplace_back(static_cast<int>(r) * op.dim_w + w,
                                 dof * op.dim_v + v, c * m);
          }
      }
    }
  }
  A.mat.resize(static_cast<int>(A.row_cells.size()) * op.dim_w,
               static_cast<int>(A.dof_cells.size()) * op.dim_v);
  A.mat.setFromTriplets(trips.begin(), trips.end());
  return A;
}

// -------------------------------------------------------------- eigensolver

namespace {

struct Pencil {
  Eigen::SparseMatrix<double> m1;  // numerator
  Eigen::SparseMatrix<double> m2;  // denominator, SPD
};

Pencil build_pencil(const DiffOperator& op, const GridDomain& dom,
                    bool dirichlet, double diam_weight) {
  auto Ak = assemble_fd(op_gradient_k(2, op.k, op.dim_v), dom, dirichlet);
  auto Aop = assemble_fd(op, dom, dirichlet);
  Pencil p;
  p.m1 = Eigen::SparseMatrix<double>(Ak.mat.transpose()) * Ak.mat;
  Eigen::SparseMatrix<double> ata =
      Eigen::SparseMatrix<double>(Aop.mat.transpose()) * Aop.mat;
  Eigen::SparseMatrix<double> eye(ata.rows(), ata.cols());
  eye.setIdentity();
  p.m2 = ata + diam_weight * eye;
  return p;
}

// Largest generalized eigenpair of (m1, m2) by Lanczos in the m2 inner
// product with full reorthogonalization and sparse LDLT solves.
std::pair<double, Eigen::VectorXd> lanczos_largest(const Pencil& p,
                                                   std::uint64_t seed,
                                                   int iters = 140) {
  const int n = static_cast<int>(p.m2.rows());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(p.m2);
  if (ldlt.info() != Eigen::Success)
    throw SingularPencil("denominator operator is not positive definite");
  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  auto b_norm = [&](const Eigen::VectorXd& x) {
    return std::sqrt(std::max(0.0, x.dot(p.m2 * x)));
  };
  v /= b_norm(v);
  std::vector<Eigen::VectorXd> basis{v};
  std::vector<double> alpha, beta;
  Eigen::VectorXd prev;
  iters = std::min(iters, n);
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd w = ldlt.solve(p.m1 * basis.back());
    double a = w.dot(p.m2 * basis.back());
    alpha.push_back(a);
    w -= a * basis.back();
    if (it > 0) w -= beta.back() * prev;
    // full reorthogonalization in the m2 inner product
    for (const auto& q : basis) w -= (w.dot(p.m2 * q)) * q;
    double b = b_norm(w);
    if (b < 1e-13) break;
    beta.push_back(b);
    prev = basis.back();
    basis.push_back(w / b);
  }
  int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < m) {
      T(i, i + 1) = beta[i];
      T(i + 1, i) = beta[i];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  int imax = m - 1;  // eigenvalues ascending
  Eigen::VectorXd y = es.eigenvectors().col(imax);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) x += y(i) * basis[i];
  return {es.eigenvalues()(imax), x};
}

}  // namespace

KornP2Result korn_constant_p2(const DiffOperator& op, const GridDomain& dom,
                              bool dirichlet, int force_mode) {
  double diam = dom.diameter();
  double dw = std::pow(diam, -2.0 * op.k);
  Pencil p = build_pencil(op, dom, dirichlet, dw);
  const int n = static_cast<int>(p.m2.rows());

  KornP2Result res;
  res.dofs = n;
  Eigen::VectorXd x;
  bool dense = force_mode == 1 || (force_mode == 0 && n <= 4096);
  if (dense) {
    Eigen::MatrixXd M1 = Eigen::MatrixXd(p.m1);
    Eigen::MatrixXd M2 = Eigen::MatrixXd(p.m2);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(M1, M2);
    if (es.info() != Eigen::Success)
      throw SingularPencil("generalized eigensolve failed");
    res.C = es.eigenvalues()(n - 1);
    x = es.eigenvectors().col(n - 1);
    res.used_dense = true;
  } else {
    auto [lam, vec] = lanczos_largest(p, 1234567);
    res.C = lam;
    x = vec;
  }

  // Same eigenvector under the unnormalized ||u||^2 denominator.
  auto Ak = assemble_fd(op_gradient_k(2, op.k, op.dim_v), dom, dirichlet);
  auto Aop = assemble_fd(op, dom, dirichlet);
  double num = (Ak.mat * x).squaredNorm();
  double den_plain = x.squaredNorm() + (Aop.mat * x).squaredNorm();
  res.C_unnormalized = num / den_plain;

  res.witness = GridFunction(dom, op.dim_v);
  for (size_t t = 0; t < Aop.dof_cells.size(); ++t) {
    auto [i, j] = Aop.dof_cells[t];
    for (int c = 0; c < op.dim_v; ++c)
      res.witness.at(i, j, c) = x(static_cast<int>(t) * op.dim_v + c);
  }
  return res;
}

// --------------------------------------------------------- norms / modulars

double lorentz_norm(const GridFunction& f, double p, double q,
                    const std::vector<std::uint8_t>* cell_filter) {
  const GridDomain& dom = f.domain();
  std::vector<double> vals;
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j)) continue;
      if (cell_filter && !(*cell_filter)[dom.idx(i, j)]) continue;
      vals.push_back(f.abs_at(i, j));
    }
  std::sort(vals.begin(), vals.end(), std::greater<>());
  double cell = dom.h * dom.h;
  // ||f||^q = sum_i v_i^q (p/q)(t_i^{q/p} - t_{i-1}^{q/p}), piecewise-exact.
  double acc = 0.0, t_prev = 0.0;
  for (size_t i = 0; i < vals.size(); ++i) {
    double t = t_prev + cell;
    acc += std::pow(vals[i], q) * (p / q) *
           (std::pow(t, q / p) - std::pow(t_prev, q / p));
    t_prev = t;
  }
  return std::pow(acc, 1.0 / q);
}

static double orlicz_phi(double t, double p, double beta) {
  return std::pow(t, p) * std::pow(1.0 + std::log1p(t), beta);
}

void check_orlicz_conditions(double p, double beta) {
  if (!(p > 1.0) || beta < 0.0)
    throw InvalidOrlicz("need p > 1 and beta >= 0");
  double delta2 = 0.0, nabla2 = 0.0;
  for (int e = -20; e <= 20; ++e) {
    double t = std::ldexp(1.0, e);
    delta2 = std::max(delta2, orlicz_phi(2 * t, p, beta) / orlicz_phi(t, p, beta));
    // Conjugate doubling via a log-spaced Legendre transform.
    auto conj = [&](double s) {
      double best = 0.0;
      for (int g = -40; g <= 40; ++g) {
        double u = std::ldexp(1.0, g);
        best = std::max(best, s * u - orlicz_phi(u, p, beta));
      }
      return best;
    };
    double c1 = conj(t), c2 = conj(2 * t);
    if (c1 > 0) nabla2 = std::max(nabla2, c2 / c1);
  }
  if (!(delta2 < 1e6) || !(nabla2 < 1e6))
    throw InvalidOrlicz("doubling ratios diverge on dyadic samples");
}

double orlicz_modular(const GridFunction& f, double p, double beta,
                      const std::vector<std::uint8_t>* cell_filter) {
  const GridDomain& dom = f.domain();
  double acc = 0.0;
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j)) continue;
      if (cell_filter && !(*cell_filter)[dom.idx(i, j)]) continue;
      acc += orlicz_phi(f.abs_at(i, j), p, beta);
    }
  return acc * dom.h * dom.h;
}

// --------------------------------------------------------------- quotients

namespace {

// ||f||_X over the filtered cells for the three space scales.
double x_norm(const GridFunction& f, const Weight& w,
              const SampledKornOptions& opt,
              const std::vector<std::uint8_t>* filter) {
  if (opt.orlicz_beta) return orlicz_modular(f, opt.p, *opt.orlicz_beta, filter);
  if (opt.lorentz_q) return lorentz_norm(f, opt.p, *opt.lorentz_q, filter);
  const GridDomain& dom = f.domain();
  double acc = 0.0;
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j)) continue;
      if (filter && !(*filter)[dom.idx(i, j)]) continue;
      acc += std::pow(f.abs_at(i, j), opt.p) * w.values.at(i, j, 0);
    }
  return std::pow(acc * dom.h * dom.h, 1.0 / opt.p);
}

GridFunction sample_field(const GridDomain& dom, const SmoothField& u) {
  GridFunction g(dom, u.comps());
  g.fill([&](double x, double y) { return u.value(x, y); });
  return g;
}

}  // namespace

SampledKornResult korn_constant_sampled(const DiffOperator& op,
                                        const ProjectionOperator& P,
                                        const GridDomain& dom, const Weight& w,
                                        const SampledKornOptions& opt) {
  if (opt.orlicz_beta) check_orlicz_conditions(opt.p, *opt.orlicz_beta);
  Rng rng(opt.seed);
  auto kernel = P.psi;
  kernel.resize(P.kernel_count, VPolynomial(2, op.dim_v));

  SampledKornResult out;
  for (int trial = 0; trial < opt.family; ++trial) {
    SmoothField u(op.dim_v);
    int mode = trial % 3;
    if (mode == 0) {
      // random smooth bumps
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < op.dim_v; ++c)
          u = u + SmoothField::bump(op.dim_v, c, rng.uniform(-1, 1),
                                    rng.uniform(0.25, 0.75),
                                    rng.uniform(0.25, 0.75),
                                    rng.uniform(0.08, 0.2));
    } else if (mode == 1 && !kernel.empty()) {
      // kernel field times a cutoff, plus a small bump so A u != 0
      const auto& q = kernel[trial % kernel.size()];
      u = polynomial_times_bump(q, rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7),
                                rng.uniform(0.15, 0.3));
      u = u + SmoothField::bump(op.dim_v, 0, 0.2 * rng.uniform(-1, 1), 0.5, 0.5,
                                0.15);
    } else {
      // oscillatory-ish: products of offset bumps
      for (int b = 0; b < 5; ++b) {
        int c = static_cast<int>(rng.next_u64() % op.dim_v);
        u = u + SmoothField::bump(op.dim_v, c, rng.uniform(-1, 1),
                                  rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8),
                                  rng.uniform(0.05, 0.12));
      }
    }
    GridFunction ug = sample_field(dom, u);
    FdField au = apply_fd(op, ug);
    FdField dku = fd_gradient_l(ug, op.k);

    VPolynomial pu = apply_projection(P, ug);
    // D^k(u - Pi u) on valid cells: subtract exact derivatives of Pi u.
    auto mis = multiindices_of_order(2, op.k);
    GridFunction diff(dom, static_cast<int>(mis.size()) * op.dim_v);
    std::vector<DPoly> dpk;
    std::vector<double> wts;
    for (const auto& a : mis) {
      dpk.emplace_back(pu.derivative(a));
      wts.push_back(
          std::sqrt(to_double(Rat(factorial(op.k)) / Rat(mi_factorial(a)))));
    }
    for (int j = 0; j < dom.ny; ++j)
      for (int i = 0; i < dom.nx; ++i) {
        if (!dom.inside(i, j) || !dku.is_valid(dom, i, j)) continue;
        for (size_t t = 0; t < mis.size(); ++t) {
          auto pv = dpk[t].eval(dom.cx(i), dom.cy(j));
          for (int c = 0; c < op.dim_v; ++c)
            diff.at(i, j, static_cast<int>(t) * op.dim_v + c) =
                dku.val.at(i, j, static_cast<int>(t) * op.dim_v + c) -
                wts[t] * pv[c];
        }
      }
    double num = x_norm(diff, w, opt, &dku.valid);
    double den = x_norm(au.val, w, opt, &au.valid);
    if (den <= 1e-300) continue;
    out.ratios.push_back(num / den);
    out.max_ratio = std::max(out.max_ratio, num / den);
  }
  return out;
}

PoincareResult poincare_and_bestapprox(const DiffOperator& op,
                                       const ProjectionOperator& P,
                                       const GridFunction& u, int l, double p,
                                       const Weight& w) {
  const GridDomain& dom = u.domain();
  FdField au = apply_fd(op, u);
  FdField dlu = fd_gradient_l(u, l);
  VPolynomial pu = apply_projection(P, u);

  auto mis = multiindices_of_order(2, l);
  std::vector<double> wts;
  std::vector<DPoly> dpl;
  for (const auto& a : mis) {
    dpl.emplace_back(pu.derivative(a));
    wts.push_back(std::sqrt(to_double(Rat(factorial(l)) / Rat(mi_factorial(a)))));
  }
  GridFunction diff(dom, static_cast<int>(mis.size()) * op.dim_v);
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j) || !dlu.is_valid(dom, i, j)) continue;
      for (size_t t = 0; t < mis.size(); ++t) {
        auto pv = dpl[t].eval(dom.cx(i), dom.cy(j));
        for (int c = 0; c < op.dim_v; ++c)
          diff.at(i, j, static_cast<int>(t) * op.dim_v + c) =
              dlu.val.at(i, j, static_cast<int>(t) * op.dim_v + c) -
              wts[t] * pv[c];
      }
    }

  auto wnorm = [&](const GridFunction& f, const std::vector<std::uint8_t>* flt) {
    double acc = 0.0;
    for (int j = 0; j < dom.ny; ++j)
      for (int i = 0; i < dom.nx; ++i) {
        if (!dom.inside(i, j)) continue;
        if (flt && !(*flt)[dom.idx(i, j)]) continue;
        acc += std::pow(f.abs_at(i, j), p) * w.values.at(i, j, 0);
      }
    return std::pow(acc * dom.h * dom.h, 1.0 / p);
  };
  double num = wnorm(diff, &dlu.valid);
  double den_poincare =
      std::pow(dom.diameter(), op.k - l) * wnorm(au.val, &au.valid);

  PoincareResult res;
  double scale = u.max_abs() + 1e-300;
  if (num < 1e-10 * scale && den_poincare < 1e-10 * scale) {
    res.exact = true;
    return res;
  }
  res.poincare_ratio = num / den_poincare;

  // Best approximation: weighted least squares over the kernel basis at the
  // D^l level.
  int K = P.kernel_count;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(K);
  std::vector<std::vector<DPoly>> dq(K);
  for (int a = 0; a < K; ++a)
    for (const auto& mi : mis) dq[a].emplace_back(P.psi[a].derivative(mi));
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j) || !dlu.is_valid(dom, i, j)) continue;
      double wt = w.values.at(i, j, 0);
      std::vector<std::vector<double>> qv(K);
      for (int a = 0; a < K; ++a) {
        qv[a].assign(static_cast<std::size_t>(mis.size()) * op.dim_v, 0.0);
        for (size_t t = 0; t < mis.size(); ++t) {
          auto pv = dq[a][t].eval(dom.cx(i), dom.cy(j));
          for (int c = 0; c < op.dim_v; ++c)
            qv[a][t * op.dim_v + c] = wts[t] * pv[c];
        }
      }
      for (int a = 0; a < K; ++a) {
        for (int c2 = 0; c2 < K; ++c2) {
          double dot = 0.0;
          for (size_t s = 0; s < qv[a].size(); ++s) dot += qv[a][s] * qv[c2][s];
          A(a, c2) += wt * dot;
        }
        double dotf = 0.0;
        for (size_t s = 0; s < qv[a].size(); ++s)
          dotf += qv[a][s] * dlu.val.at(i, j, static_cast<int>(s));
        b(a) += wt * dotf;
      }
    }
  for (int a = 0; a < K; ++a) A(a, a) += 1e-12 * (1.0 + std::abs(A.trace()));
  Eigen::VectorXd coef = A.ldlt().solve(b);
  GridFunction best(dom, static_cast<int>(mis.size()) * op.dim_v);
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      if (!dom.inside(i, j) || !dlu.is_valid(dom, i, j)) continue;
      for (size_t t = 0; t < mis.size(); ++t)
        for (int c = 0; c < op.dim_v; ++c) {
          double fit = 0.0;
          for (int a = 0; a < K; ++a)
            fit += coef(a) * wts[t] * dq[a][t].eval(dom.cx(i), dom.cy(j))[c];
          best.at(i, j, static_cast<int>(t) * op.dim_v + c) =
              dlu.val.at(i, j, static_cast<int>(t) * op.dim_v + c) - fit;
        }
    }
  double den_best = wnorm(best, &dlu.valid);
  res.bestapprox_ratio = den_best <= 1e-300 ? 1.0 : num / den_best;
  return res;
}

// ------------------------------------------------------ Fourier multipliers

double multiplier_reconstruction(const DiffOperator& op, const SmoothField& u,
                                 const MultiIndex& alpha, int N) {
  if (alpha.order() != op.k)
    throw MalformedSpec("multiplier order must equal k");
  if ((N & (N - 1)) != 0) throw NonPowerOfTwoGrid("box size must be 2^m");

  // Ellipticity at resolvable frequencies.
  for (int t = 0; t < 64; ++t) {
    double th = M_PI * t / 64.0;
    Eigen::VectorXcd xi(2);
    xi << std::cos(th), std::sin(th);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.symbol(xi));
    if (svd.singularValues()(op.dim_v - 1) < 1e-9)
      throw NotElliptic("symbol degenerates at a resolvable real frequency");
  }

  SmoothField au = apply_operator(op, u);
  SmoothField dau = u.derivative(alpha);
  const double h = 1.0 / N;

  // DFT of each W component of A u.
  std::vector<std::vector<std::complex<double>>> hat(
      op.dim_w, std::vector<std::complex<double>>(
                    static_cast<std::size_t>(N) * N));
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      auto v = au.value((i + 0.5) * h, (j + 0.5) * h);
      for (int w = 0; w < op.dim_w; ++w)
        hat[w][static_cast<std::size_t>(j) * N + i] = v[w];
    }
  for (int w = 0; w < op.dim_w; ++w) fft2_inplace(hat[w], N, N, false);

  std::vector<std::vector<std::complex<double>>> out(
      op.dim_v, std::vector<std::complex<double>>(
                    static_cast<std::size_t>(N) * N, 0.0));
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      int ki = i <= N / 2 ? i : i - N;
      int kj = j <= N / 2 ? j : j - N;
      if (ki == 0 && kj == 0) continue;  // zero frequency zeroed
      Eigen::VectorXcd xi(2);
      xi << 2 * M_PI * ki, 2 * M_PI * kj;
      Eigen::MatrixXcd sym = op.symbol(xi);
      Eigen::MatrixXcd ata = sym.adjoint() * sym;
      std::complex<double> mono = 1.0;
      for (int d = 0; d < 2; ++d)
        for (int t = 0; t < alpha[d]; ++t) mono *= xi(d);
      Eigen::VectorXcd av(op.dim_w);
      for (int w = 0; w < op.dim_w; ++w)
        av(w) = hat[w][static_cast<std::size_t>(j) * N + i];
      Eigen::VectorXcd res = mono * ata.ldlt().solve(sym.adjoint() * av);
      for (int v = 0; v < op.dim_v; ++v)
        out[v][static_cast<std::size_t>(j) * N + i] = res(v);
    }
  for (int v = 0; v < op.dim_v; ++v) fft2_inplace(out[v], N, N, true);

  double err2 = 0.0, ref2 = 0.0;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      auto dv = dau.value((i + 0.5) * h, (j + 0.5) * h);
      for (int v = 0; v < op.dim_v; ++v) {
        double d = out[v][static_cast<std::size_t>(j) * N + i].real() - dv[v];
        err2 += d * d;
        ref2 += dv[v] * dv[v];
      }
    }
  if (ref2 <= 0) throw ZeroDenominator("reference derivative vanishes");
  return std::sqrt(err2 / ref2);
}

double interpolation_check(const DiffOperator& op, const SmoothField& u, int l,
                           int N) {
  if (l < 1 || l > op.k - 1) throw MalformedSpec("need 1 <= l <= k-1");
  const double h = 1.0 / N;
  auto mis = multiindices_of_order(2, l);
  std::vector<SmoothField> dl;
  std::vector<double> wts;
  for (const auto& a : mis) {
    dl.push_back(u.derivative(a));
    wts.push_back(std::sqrt(to_double(Rat(factorial(l)) / Rat(mi_factorial(a)))));
  }
  SmoothField au = apply_operator(op, u);
  double n_u = 0.0, n_au = 0.0, n_dl = 0.0;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      double x = (i + 0.5) * h, y = (j + 0.5) * h;
      auto uv = u.value(x, y);
      double s = 0.0;
      for (double v : uv) s += v * v;
      n_u += std::sqrt(s);
      auto av = au.value(x, y);
      s = 0.0;
      for (double v : av) s += v * v;
      n_au += std::sqrt(s);
      s = 0.0;
      for (size_t t = 0; t < mis.size(); ++t) {
        auto dv = dl[t].value(x, y);
        for (double v : dv) s += wts[t] * wts[t] * v * v;
      }
      n_dl += std::sqrt(s);
    }
  n_u *= h * h;
  n_au *= h * h;
  n_dl *= h * h;
  if (n_u <= 0 || n_au <= 0) throw ZeroDenominator("u or A u vanishes");
  double frac = static_cast<double>(l) / op.k;
  return n_dl / (std::pow(n_u, 1.0 - frac) * std::pow(n_au, frac));
}

}  // namespace ellikorn
