#include <doctest.h>

#include "ellikorn/diffop.hpp"
#include "ellikorn/errors.hpp"
#include "ellikorn/gallery.hpp"
#include "ellikorn/grid.hpp"
#include "ellikorn/moments.hpp"

#include <cmath>
#include <fstream>

using namespace ellikorn;

namespace {

// Independent 2-D quadrature oracle: iterated adaptive Simpson over the unit
// disk for integrands f(x, y).
double simpson_1d(const std::function<double(double)>& f, double a, double b,
                  double tol, int depth) {
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  std::function<double(double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi,
          int d) -> double {
    double mid = 0.5 * (lo + hi);
    double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    double flm = f(lm), frm = f(rm);
    double whole = (hi - lo) / 6 * (flo + 4 * fmid + fhi);
    double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
    double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) < 15 * tol)
      return left + right + (left + right - whole) / 15;
    return rec(lo, mid, flo, flm, fmid, d - 1) +
           rec(mid, hi, fmid, frm, fhi, d - 1);
  };
  return rec(a, b, fa, fm, fb, depth);
}

double disk_integral_oracle(const std::function<double(double, double)>& f) {
  auto outer = [&](double x) {
    double half = std::sqrt(std::max(0.0, 1.0 - x * x));
    if (half == 0.0) return 0.0;
    return simpson_1d([&](double y) { return f(x, y); }, -half, half, 1e-15, 24);
  };
  return simpson_1d(outer, -1.0, 1.0, 1e-14, 26);
}

}  // namespace

TEST_CASE("make_operator validates shapes and homogeneity") {
  auto d2 = op_gradient(2);
  CHECK(d2.k == 1);
  CHECK(d2.dim_v == 1);
  CHECK(d2.dim_w == 2);

  auto eps = op_sym_gradient(2);
  CHECK(eps.dim_v == 2);
  CHECK(eps.dim_w == 3);

  // A term of order k-1 must be rejected.
  std::vector<OperatorTerm> terms;
  terms.push_back({MultiIndex({2, 0}), {{1.0}}});
  terms.push_back({MultiIndex({1, 0}), {{1.0}}});
  CHECK_THROWS_AS(make_operator(2, 2, 1, 1, terms), InhomogeneousOrder);

  std::vector<OperatorTerm> zero;
  zero.push_back({MultiIndex({1, 0}), {{0.0}, {0.0}}});
  CHECK_THROWS_AS(make_operator(2, 1, 1, 2, zero), ZeroOperator);
}

TEST_CASE("symbol of the gradient is xi itself") {
  auto d = op_gradient(2);
  Eigen::VectorXcd xi(2);
  xi << 1.0, 2.0;
  auto m = d.symbol(xi);
  CHECK(m(0, 0).real() == doctest::Approx(1.0));
  CHECK(m(1, 0).real() == doctest::Approx(2.0));

  // xi = 0 gives the zero matrix for any k >= 1 operator.
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
  CHECK(op_sym_gradient(2).symbol(zero).norm() == 0.0);
}

TEST_CASE("trace-free symmetric gradient symbol kills the CR direction") {
  auto epsd = op_dev_sym_gradient(2);
  Eigen::VectorXcd xi(2), v(2);
  xi << std::complex<double>(1, 0), std::complex<double>(0, 1);
  v << std::complex<double>(1, 0), std::complex<double>(0, -1);
  CHECK((epsd.symbol(xi) * v).norm() < 1e-14);
}

TEST_CASE("symbol is homogeneous of degree k") {
  Rng rng(42);
  for (const auto& entry : gallery()) {
    const auto& op = entry.op;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXcd xi(op.n);
      for (int i = 0; i < op.n; ++i)
        xi(i) = std::complex<double>(rng.normal(), rng.normal());
      double lam = 0.25 + 2.0 * rng.uniform();
      Eigen::MatrixXcd lhs = op.symbol(lam * xi);
      Eigen::MatrixXcd rhs = std::pow(lam, op.k) * op.symbol(xi);
      CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
  }
}

TEST_CASE("apply_to_polynomial annihilates rigid fields under eps") {
  auto eps = op_sym_gradient(2);
  // u = (-y, x)
  VPolynomial u(2, 2);
  u.add_term(MultiIndex({0, 1}), 0, Rat(-1));
  u.add_term(MultiIndex({1, 0}), 1, Rat(1));
  CHECK(apply_to_polynomial(eps, u).is_zero());

  auto d = op_gradient(2);
  VPolynomial c(2, 1);
  c.add_term(MultiIndex({0, 0}), 0, Rat(7));
  CHECK(apply_to_polynomial(d, c).is_zero());

  // Hessian of x1^2: value 2 in the (1,1) slot, 0 elsewhere.
  auto hess = op_gradient_k(2, 2);
  VPolynomial p(2, 1);
  p.add_term(MultiIndex({2, 0}), 0, Rat(1));
  auto hp = apply_to_polynomial(hess, p);
  CHECK(hp.degree().has_value());
  CHECK(*hp.degree() == 0);
  auto v = hp.coeff(MultiIndex({0, 0}));
  CHECK(to_double(v[0]) == doctest::Approx(2.0));  // alpha = (2,0) row
  for (size_t i = 1; i < v.size(); ++i) CHECK(v[i] == 0);
}

TEST_CASE("apply_to_polynomial commutes with coordinate partials exactly") {
  auto eps = op_sym_gradient(2);
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    VPolynomial p(2, 2);
    for (const auto& a : multiindices_up_to(2, 3))
      for (int c = 0; c < 2; ++c)
        p.add_term(a, c, rat_frac(static_cast<long>(rng.next_u64() % 19) - 9, 4));
    for (int j = 0; j < 2; ++j) {
      auto lhs = apply_to_polynomial(eps, p).derivative(j);
      auto rhs = apply_to_polynomial(eps, p.derivative(j));
      CHECK((lhs - rhs).is_zero());
    }
  }
}

TEST_CASE("apply_to_polynomial matches finite differences pointwise") {
  auto eps = op_sym_gradient(2);
  Rng rng(11);
  VPolynomial p(2, 2);
  for (const auto& a : multiindices_up_to(2, 3))
    for (int c = 0; c < 2; ++c) p.add_term(a, c, rat_of(rng.uniform(-1, 1)));
  auto ap = apply_to_polynomial(eps, p);
  const double h = 1e-3;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    auto exact = ap.evaluate(x);
    // centered stencils for each term of eps
    std::vector<double> fd(3, 0.0);
    for (int j = 0; j < 2; ++j) {
      std::vector<double> xp(x), xm(x);
      xp[j] += h;
      xm[j] -= h;
      auto up = p.evaluate(xp), um = p.evaluate(xm);
      std::vector<double> du(2);
      for (int c = 0; c < 2; ++c) du[c] = (up[c] - um[c]) / (2 * h);
      if (j == 0) {
        fd[0] += du[0];
        fd[2] += du[1] / std::sqrt(2.0);
      } else {
        fd[1] += du[1];
        fd[2] += du[0] / std::sqrt(2.0);
      }
    }
    for (int c = 0; c < 3; ++c) CHECK(std::abs(exact[c] - fd[c]) <= 1e-6);
  }
}

TEST_CASE("ball moments: area, odd vanishing, quadrature oracle") {
  // Flat weight on the unit disk: integral is pi.
  auto total = ball_moment(MultiIndex({0, 0}), Rat(1), 0);
  CHECK(total.coef == Rat(1));
  CHECK(total.pi_power == 1);

  // Odd multi-index vanishes exactly for any radial weight.
  for (int rho : {0, 1, 3, 6}) {
    CHECK(ball_moment(MultiIndex({1, 0}), Rat(1), rho).coef == Rat(0));
    CHECK(ball_moment(MultiIndex({3, 2}), Rat(2), rho).coef == Rat(0));
  }

  // alpha = (2,0), flat unit disk -> pi/4; frozen against the quadrature
  // oracle.
  auto m20 = ball_moment(MultiIndex({2, 0}), Rat(1), 0);
  CHECK(m20.coef == Rat(1, 4));
  CHECK(m20.pi_power == 1);
  double oracle = disk_integral_oracle([](double x, double) { return x * x; });
  CHECK(std::abs(m20.value() - oracle) < 1e-12);

  // Bump-weighted moment against the oracle, rho = 2.
  auto m22 = ball_moment(MultiIndex({2, 2}), Rat(1), 2);
  double oracle22 = disk_integral_oracle([](double x, double y) {
    double s = 1.0 - x * x - y * y;
    return x * x * y * y * s * s;
  });
  CHECK(std::abs(m22.value() - oracle22) < 1e-12);

  // Normalized moments are exactly rational and scale by r^{|alpha|}.
  Rat half = ball_moment_normalized(MultiIndex({2, 0}), Rat(1, 2), 0);
  CHECK(half == Rat(1, 4) * Rat(1, 4));
}

TEST_CASE("operator JSON spec round-trips bit-exactly") {
  auto eps = op_sym_gradient(2);
  std::string tmp = "eps_roundtrip_test.json";
  {
    std::ofstream out(tmp);
    out << operator_to_json(eps);
  }
  auto back = load_operator_json(tmp);
  CHECK(back.n == eps.n);
  CHECK(back.k == eps.k);
  CHECK(back.dim_v == eps.dim_v);
  CHECK(back.dim_w == eps.dim_w);
  REQUIRE(back.terms.size() == eps.terms.size());
  for (const auto& [a, mat] : eps.terms) {
    REQUIRE(back.terms.count(a) == 1);
    const auto& bm = back.terms.at(a);
    for (int r = 0; r < eps.dim_w; ++r)
      for (int c = 0; c < eps.dim_v; ++c) CHECK(bm[r][c] == mat[r][c]);
  }
  std::remove(tmp.c_str());
  CHECK_THROWS_AS(load_operator_json("does_not_exist.json"), FileError);
}
