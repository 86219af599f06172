#include "ellikorn/ellipticity.hpp"

#include "ellikorn/errors.hpp"
#include "ellikorn/grid.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>

namespace ellikorn {

std::vector<int> NullspaceProfile::kernel_dims() const {
  std::vector<int> d;
  for (const auto& [l, basis] : per_degree) d.push_back(static_cast<int>(basis.size()));
  return d;
}

int NullspaceProfile::total_kernel_dim() const {
  int t = 0;
  for (const auto& [l, basis] : per_degree) t += static_cast<int>(basis.size());
  return t;
}

std::vector<VPolynomial> NullspaceProfile::kernel_basis() const {
  std::vector<VPolynomial> out;
  for (const auto& [l, basis] : per_degree)
    out.insert(out.end(), basis.begin(), basis.end());
  return out;
}

std::vector<VPolynomial> kernel_homogeneous(const DiffOperator& op, int l) {
  auto cols_mi = multiindices_of_order(op.n, l);
  int cols = static_cast<int>(cols_mi.size()) * op.dim_v;
  RatMat m;
  if (l >= op.k) {
    auto rows_mi = multiindices_of_order(op.n, l - op.k);
    std::map<MultiIndex, int> row_of;
    for (size_t t = 0; t < rows_mi.size(); ++t) row_of[rows_mi[t]] = static_cast<int>(t);
    m.assign(rows_mi.size() * op.dim_w, RatVec(cols, Rat(0)));
    for (size_t ci = 0; ci < cols_mi.size(); ++ci) {
      const MultiIndex& alpha = cols_mi[ci];
      for (const auto& [beta, mat] : op.terms) {
        if (!alpha.contains(beta)) continue;
        Rat ff(falling_factorial(alpha, beta));
        int row_base = row_of.at(alpha.minus(beta)) * op.dim_w;
        for (int w = 0; w < op.dim_w; ++w)
          for (int i = 0; i < op.dim_v; ++i)
            if (mat[w][i] != 0)
              m[row_base + w][ci * op.dim_v + i] += ff * mat[w][i];
      }
    }
  }
  auto null = rat_nullspace(m, cols);
  std::vector<VPolynomial> basis;
  for (const auto& v : null)
    basis.push_back(from_monomial_coordinates(op.n, op.dim_v, cols_mi, v));
  return basis;
}

// ------------------------------------------------------------- minimization

namespace {

double sigma_min(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// Generic Nelder-Mead; small dimensions only.
Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                            Eigen::VectorXd x0, double scale, int iters) {
  const int d = static_cast<int>(x0.size());
  std::vector<std::pair<double, Eigen::VectorXd>> simplex;
  simplex.reserve(d + 1);
  simplex.emplace_back(f(x0), x0);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd xi = x0;
    xi(i) += scale;
    simplex.emplace_back(f(xi), xi);
  }
  auto by_value = [](const auto& a, const auto& b) { return a.first < b.first; };
  for (int it = 0; it < iters; ++it) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    if (simplex.back().first - simplex.front().first < 1e-15) break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) centroid += simplex[i].second;
    centroid /= d;
    const auto& worst = simplex.back();
    Eigen::VectorXd xr = centroid + (centroid - worst.second);
    double fr = f(xr);
    if (fr < simplex.front().first) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst.second);
      double fe = f(xe);
      simplex.back() = fe < fr ? std::make_pair(fe, xe) : std::make_pair(fr, xr);
    } else if (fr < simplex[d - 1].first) {
      simplex.back() = {fr, xr};
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * (worst.second - centroid);
      double fc = f(xc);
      if (fc < worst.first) {
        simplex.back() = {fc, xc};
      } else {
        for (int i = 1; i <= d; ++i) {
          simplex[i].second = simplex[0].second +
                              0.5 * (simplex[i].second - simplex[0].second);
          simplex[i].first = f(simplex[i].second);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(), by_value);
  return simplex.front().second;
}

Eigen::VectorXcd normalize_phase(Eigen::VectorXcd xi) {
  xi.normalize();
  int imax = 0;
  for (int i = 1; i < xi.size(); ++i)
    if (std::abs(xi(i)) > std::abs(xi(imax))) imax = i;
  std::complex<double> ph = xi(imax) / std::abs(xi(imax));
  return xi / ph;
}

}  // namespace

EllipticityReport is_elliptic(const DiffOperator& op, int samples, double tol,
                              std::uint64_t seed) {
  if (samples < 100) samples = 100;
  Rng rng(seed);
  auto eval = [&](const Eigen::VectorXd& x) -> double {
    Eigen::VectorXd xi = x;
    double nn = xi.norm();
    if (nn < 1e-12) return 1e100;
    xi /= nn;
    return sigma_min(op.symbol(xi.cast<std::complex<double>>()));
  };
  double best = 1e100;
  Eigen::VectorXd best_xi(op.n);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(op.n);
    for (int i = 0; i < op.n; ++i) x(i) = rng.normal();
    if (x.norm() < 1e-12) continue;
    double v = eval(x);
    if (v < best) {
      best = v;
      best_xi = x / x.norm();
    }
  }
  Eigen::VectorXd refined = nelder_mead(eval, best_xi, 0.2, 400);
  refined.normalize();
  double vr = eval(refined);
  if (vr < best) {
    best = vr;
    best_xi = refined;
  }
  EllipticityReport rep;
  rep.min_singular_value = best;
  rep.elliptic = best > tol;
  rep.argmin_xi.assign(best_xi.data(), best_xi.data() + op.n);
  return rep;
}

ComplexWitness newton_polish(const DiffOperator& op, ComplexWitness w) {
  const int n = op.n;
  Eigen::VectorXcd xi(n), v(op.dim_v);
  for (int i = 0; i < n; ++i) xi(i) = w.xi[i];
  for (int i = 0; i < op.dim_v; ++i) v(i) = w.v[i];
  xi = normalize_phase(xi);
  v.normalize();

  // Gauss-Newton on F(xi) = A[xi] v over the real parameters of xi, then
  // refresh v as the smallest right singular vector.
  Eigen::VectorXcd F = op.symbol(xi) * v;
  Eigen::MatrixXcd Jc(op.dim_w, n);
  Jc.setZero();
  for (const auto& [a, mat] : op.terms) {
    Eigen::VectorXcd Av = Eigen::VectorXcd::Zero(op.dim_w);
    for (int r = 0; r < op.dim_w; ++r)
      for (int c = 0; c < op.dim_v; ++c) Av(r) += to_double(mat[r][c]) * v(c);
    for (int j = 0; j < n; ++j) {
      if (a[j] == 0) continue;
      std::complex<double> mono = static_cast<double>(a[j]);
      for (int t = 0; t < n; ++t) {
        int pw = a[t] - (t == j ? 1 : 0);
        for (int q = 0; q < pw; ++q) mono *= xi(t);
      }
      Jc.col(j) += mono * Av;
    }
  }
  Eigen::MatrixXd J(2 * op.dim_w, 2 * n);
  Eigen::VectorXd Fr(2 * op.dim_w);
  for (int r = 0; r < op.dim_w; ++r) {
    Fr(2 * r) = F(r).real();
    Fr(2 * r + 1) = F(r).imag();
    for (int c = 0; c < n; ++c) {
      // d/d(Re xi_c) and d/d(Im xi_c)
      J(2 * r, 2 * c) = Jc(r, c).real();
      J(2 * r + 1, 2 * c) = Jc(r, c).imag();
      J(2 * r, 2 * c + 1) = -Jc(r, c).imag();
      J(2 * r + 1, 2 * c + 1) = Jc(r, c).real();
    }
  }
  Eigen::VectorXd delta =
      J.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-Fr);
  for (int c = 0; c < n; ++c)
    xi(c) += std::complex<double>(delta(2 * c), delta(2 * c + 1));
  xi = normalize_phase(xi);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.symbol(xi), Eigen::ComputeFullV);
  v = svd.matrixV().col(op.dim_v - 1);

  ComplexWitness out;
  out.xi.assign(xi.data(), xi.data() + n);
  out.v.assign(v.data(), v.data() + op.dim_v);
  out.residual = (op.symbol(xi) * v).norm() / v.norm();
  return out;
}

static ComplexWitness search_once(const DiffOperator& op, Rng& rng) {
  const int n = op.n;
  auto eval = [&](const Eigen::VectorXd& z) -> double {
    Eigen::VectorXcd xi(n);
    for (int i = 0; i < n; ++i) xi(i) = std::complex<double>(z(2 * i), z(2 * i + 1));
    double nn = xi.norm();
    if (nn < 1e-12) return 1e100;
    return sigma_min(op.symbol(xi / nn));
  };
  Eigen::VectorXd z0(2 * n);
  for (int i = 0; i < 2 * n; ++i) z0(i) = rng.normal();
  z0.normalize();
  Eigen::VectorXd z = nelder_mead(eval, z0, 0.3, 600);
  Eigen::VectorXcd xi(n);
  for (int i = 0; i < n; ++i) xi(i) = std::complex<double>(z(2 * i), z(2 * i + 1));
  xi = normalize_phase(xi);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op.symbol(xi), Eigen::ComputeFullV);
  ComplexWitness w;
  w.xi.assign(xi.data(), xi.data() + n);
  Eigen::VectorXcd v = svd.matrixV().col(op.dim_v - 1);
  w.v.assign(v.data(), v.data() + op.dim_v);
  w.residual = svd.singularValues()(op.dim_v - 1);
  for (int polish = 0; polish < 6 && w.residual > 1e-14; ++polish)
    w = newton_polish(op, w);
  return w;
}

std::optional<ComplexWitness> complex_witness_search(const DiffOperator& op,
                                                     int restarts, double tol,
                                                     std::uint64_t seed) {
  if (restarts < 1) restarts = 1;
  std::vector<ComplexWitness> results(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    Rng rng(seed + 1000003ull * (r + 1));
    results[r] = search_once(op, rng);
  });
  // Deterministic merge: lowest residual wins, ties by lexicographic xi.
  auto lex_less = [](const ComplexWitness& a, const ComplexWitness& b) {
    for (size_t i = 0; i < a.xi.size(); ++i) {
      if (a.xi[i].real() != b.xi[i].real()) return a.xi[i].real() < b.xi[i].real();
      if (a.xi[i].imag() != b.xi[i].imag()) return a.xi[i].imag() < b.xi[i].imag();
    }
    return false;
  };
  const ComplexWitness* best = &results[0];
  for (const auto& w : results)
    if (w.residual < best->residual ||
        (w.residual == best->residual && lex_less(w, *best)))
      best = &w;
  if (best->residual <= tol) return *best;
  return std::nullopt;
}

double complex_symbol_infimum(const DiffOperator& op, int restarts,
                              std::uint64_t seed) {
  std::vector<double> vals(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    Rng rng(seed + 1000003ull * (r + 1));
    vals[r] = search_once(op, rng).residual;
  });
  return *std::min_element(vals.begin(), vals.end());
}

Rat witness_residual2_exact(const DiffOperator& op, const ComplexWitness& w) {
  std::vector<RatC> xi;
  for (const auto& z : w.xi) xi.emplace_back(rat_of(z.real()), rat_of(z.imag()));
  auto sym = op.symbol_exact(xi);
  Rat num(0), den(0);
  for (int r = 0; r < op.dim_w; ++r) {
    RatC acc;
    for (int c = 0; c < op.dim_v; ++c) {
      RatC vc(rat_of(w.v[c].real()), rat_of(w.v[c].imag()));
      acc += sym[r][c] * vc;
    }
    num += acc.norm2();
  }
  for (const auto& z : w.v) {
    RatC vc(rat_of(z.real()), rat_of(z.imag()));
    den += vc.norm2();
  }
  if (den == 0) throw WitnessInvalid("zero vector v");
  return num / den;
}

NullspaceProfile c_ellipticity(const DiffOperator& op, int max_degree,
                               double witness_tol, std::uint64_t seed) {
  if (max_degree < op.k) max_degree = op.k;
  NullspaceProfile prof;
  for (int l = 0; l <= max_degree; ++l) {
    auto basis = kernel_homogeneous(op, l);
    bool vanished = basis.empty();
    prof.per_degree.emplace_back(l, std::move(basis));
    if (vanished) {
      // d_j maps Z_{l+1} into Z_l and is jointly injective on positive-degree
      // homogeneous polynomials, so Z_l = 0 forces all later Z to vanish.
      prof.verdict = CVerdict::CElliptic;
      prof.deg_p = l;
      return prof;
    }
  }
  auto witness = complex_witness_search(op, 24, witness_tol, seed);
  if (witness) {
    // Certify with exact rational-complex arithmetic before trusting it.
    ComplexWitness polished = newton_polish(op, *witness);
    Rat res2 = witness_residual2_exact(op, polished);
    if (res2 <= rat_of(witness_tol) * rat_of(witness_tol)) {
      prof.verdict = CVerdict::NotCElliptic;
      prof.witness = polished;
      return prof;
    }
  }
  prof.verdict = CVerdict::Undecided;
  return prof;
}

ImageIntersection cancellation_image_intersection(const DiffOperator& op,
                                                  int samples,
                                                  std::uint64_t seed) {
  if (samples < op.n + 1) samples = op.n + 1;
  auto rep = is_elliptic(op, 512, 1e-6, seed);
  if (!rep.elliptic)
    throw NotElliptic("image intersection requires an elliptic operator");
  Rng rng(seed + 7);
  auto orth_cols = [&](const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-10 * svd.singularValues()(0)) ++r;
    return svd.matrixU().leftCols(r);
  };

  ImageIntersection out;
  Eigen::MatrixXd U;
  int stable = 0;
  for (int s = 0; s < samples + 64 && stable < 10; ++s) {
    Eigen::VectorXd xi(op.n);
    for (int i = 0; i < op.n; ++i) xi(i) = rng.normal();
    if (xi.norm() < 1e-12) continue;
    xi.normalize();
    out.sampled_xi.push_back({xi.data(), xi.data() + op.n});
    Eigen::MatrixXd V = orth_cols(op.symbol_real(xi));
    int prev_dim = s == 0 ? -1 : static_cast<int>(U.cols());
    if (s == 0) {
      U = V;
    } else if (U.cols() == 0) {
      // already trivial
    } else {
      Eigen::MatrixXd M = U.transpose() * V;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
      int keep = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1.0 - 1e-9) ++keep;
      U = U * svd.matrixU().leftCols(keep);
    }
    stable = (static_cast<int>(U.cols()) == prev_dim) ? stable + 1 : 0;
  }
  out.dimension = static_cast<int>(U.cols());
  for (int c = 0; c < U.cols(); ++c)
    out.basis.push_back({U.col(c).data(), U.col(c).data() + op.dim_w});
  return out;
}

}  // namespace ellikorn
