#include <doctest.h>

#include "ellikorn/errors.hpp"
#include "ellikorn/gallery.hpp"
#include "ellikorn/projection.hpp"

#include <cmath>

using namespace ellikorn;

namespace {

VPolynomial random_poly(Rng& rng, int dim, int deg) {
  VPolynomial p(2, dim);
  for (const auto& a : multiindices_up_to(2, deg))
    for (int c = 0; c < dim; ++c)
      p.add_term(a, c, rat_frac(static_cast<long>(rng.next_u64() % 17) - 8, 3));
  return p;
}

struct EpsSetup {
  DiffOperator op = op_sym_gradient(2);
  NullspaceProfile prof = c_ellipticity(op, 8);
  BallSpec ball = BallSpec::make({0.5, 0.5}, 0.35, 5);  // rho = m + k + 2
  ProjectionOperator P = build_projection(op, ball, prof);
};

}  // namespace

TEST_CASE("averaged Taylor reproduces polynomials of degree <= m") {
  Rng rng(3);
  BallSpec ball = BallSpec::make({0.25, -0.5}, 0.6, 4);
  for (int trial = 0; trial < 5; ++trial) {
    VPolynomial u = random_poly(rng, 2, 3);
    auto t = averaged_taylor(u, 3, ball);
    CHECK((t - u).is_zero());
  }
  // m = 0: the constant int u w dy.
  VPolynomial u = random_poly(rng, 1, 2);
  auto t0 = averaged_taylor(u, 0, ball);
  CHECK(t0.degree().value_or(-1) <= 0);
  Rat expected(0);
  for (const auto& [a, v] : u.coeffs()) expected += v[0] * weight_moment(ball, a);
  CHECK(t0.coeff(MultiIndex::zero(2))[0] == expected);
}

TEST_CASE("averaged Taylor commutes with A on 20 random cubics, exactly") {
  auto eps = op_sym_gradient(2);
  BallSpec ball = BallSpec::make({0.0, 0.0}, 1.0, 5);
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    VPolynomial u = random_poly(rng, 2, 3);
    auto lhs = apply_to_polynomial(eps, averaged_taylor(u, 2, ball));
    auto rhs = averaged_taylor(apply_to_polynomial(eps, u), 1, ball);
    CHECK((lhs - rhs).is_zero());
  }
  // m - 1 - k < 0 collapses to the zero polynomial.
  auto hess = op_gradient_k(2, 2);
  VPolynomial u = random_poly(rng, 1, 1);
  auto lhs = apply_to_polynomial(hess, averaged_taylor(u, 1, ball));
  CHECK(lhs.is_zero());
}

TEST_CASE("projection fixes its range and never raises degree") {
  EpsSetup s;
  // Dual-basis exactness.
  const int D = s.P.coord_dim();
  RatMat G(D, RatVec(D, Rat(0)));
  for (int l = 0; l < D; ++l)
    for (int j = 0; j < D; ++j) {
      VPolynomial dual = from_monomial_coordinates(
          2, 2, s.P.basis_mis,
          [&] {
            RatVec col(D);
            for (int t = 0; t < D; ++t) col[t] = s.P.dual_coeffs[t][j];
            return col;
          }());
      Rat pair = l2_pair(s.ball, s.P.psi[l], dual);
      CHECK(pair == (l == j ? Rat(1) : Rat(0)));
    }

  // Idempotence of the projection matrix, exact.
  RatMat sq = rat_matmul(s.P.pi_matrix, s.P.pi_matrix);
  CHECK(sq == s.P.pi_matrix);

  // q in ker(A) is fixed exactly.
  for (const auto& q : s.prof.kernel_basis()) {
    auto pq = apply_projection(s.P, q);
    CHECK((pq - q).is_zero());
  }

  // (K4): homogeneous input of degree l < deg_P maps into P_l cap ker, exact.
  for (int l = 0; l < *s.prof.deg_p; ++l)
    for (const auto& alpha : multiindices_of_order(2, l))
      for (int c = 0; c < 2; ++c) {
        auto mono = VPolynomial::monomial(2, alpha, c, 2);
        auto img = apply_projection(s.P, mono);
        CHECK(img.degree().value_or(-1000) <= l);
        CHECK(apply_to_polynomial(s.op, img).is_zero());
      }
}

TEST_CASE("corrector identity holds exactly for every basis element") {
  EpsSetup s;
  int K = s.P.kernel_count;
  int W = static_cast<int>(s.P.psi.size()) - K;
  for (int l = 0; l < W; ++l) {
    VPolynomial dual = from_monomial_coordinates(
        2, 2, s.P.basis_mis,
        [&] {
          RatVec col(s.P.coord_dim());
          for (int t = 0; t < s.P.coord_dim(); ++t)
            col[t] = s.P.dual_coeffs[t][K + l];
          return col;
        }());
    auto a_xi = apply_to_polynomial(s.op, s.P.xi_polys[l]);
    for (const auto& q : s.P.psi) {
      Rat lhs = l2_pair(s.ball, q, dual);
      Rat rhs = l2_pair(s.ball, apply_to_polynomial(s.op, q), a_xi);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("projection of the gradient operator is the weighted average") {
  auto d = op_gradient(2);
  auto prof = c_ellipticity(d, 6);
  REQUIRE(prof.verdict == CVerdict::CElliptic);
  CHECK(*prof.deg_p == 1);
  BallSpec ball = BallSpec::make({0.0, 0.0}, 0.5, 5);
  auto P = build_projection(d, ball, prof);
  Rng rng(5);
  VPolynomial u = random_poly(rng, 1, 3);
  auto pu = apply_projection(P, u);
  Rat avg(0);
  for (const auto& [a, v] : u.coeffs()) avg += v[0] * weight_moment(ball, a);
  CHECK(pu.degree().value_or(-1) <= 0);
  CHECK(pu.coeff(MultiIndex::zero(2))[0] == avg);
}

TEST_CASE("grid path: constants are reproduced and stability is bounded") {
  EpsSetup s;
  auto dom = make_domain("square", 1.0 / 48);
  GridFunction c0(dom, 2);
  c0.fill([](double, double) { return std::vector<double>{0.7, -0.3}; });
  // Interior cells integrate the bump kernel exactly; the residual comes from
  // the clipped boundary cells only.
  auto pc = apply_projection(s.P, c0);
  auto v = pc.evaluate(std::vector<double>{0.3, 0.8});
  CHECK(v[0] == doctest::Approx(0.7).epsilon(2e-5));
  CHECK(v[1] == doctest::Approx(-0.3).epsilon(2e-5));

  // Idempotence via the exact path on the produced polynomial.
  auto pc2 = apply_projection(s.P, pc);
  double diff = 0.0;
  for (const auto& [a, vv] : (pc2 - pc).coeffs())
    for (const auto& x : vv) diff = std::max(diff, std::abs(to_double(x)));
  CHECK(diff <= 1e-10);

  // 50 random grid functions: stability ratios uniformly bounded.
  Rng rng(23);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    GridFunction u(dom, 2);
    u.fill([&](double x, double y) {
      return std::vector<double>{std::sin(3 * x + rng.uniform()) + rng.uniform(-0.1, 0.1),
                                 std::cos(2 * y) * x};
    });
    worst = std::max(worst, projection_stability_ratio(s.P, u));
  }
  CHECK(worst < 50.0);
  CHECK(worst > 0.0);
}

TEST_CASE("discrete kernel least squares reproduces sampled kernel fields") {
  EpsSetup s;
  auto dom = make_domain("square", 1.0 / 48);
  // rigid field a(-y,x) + (b,c)
  GridFunction rigid(dom, 2);
  rigid.fill([](double x, double y) {
    return std::vector<double>{-2.0 * y + 0.3, 2.0 * x - 1.1};
  });
  auto q = kernel_projection_lsq(s.P, rigid);
  for (double xx : {0.1, 0.6}) {
    auto v = q.evaluate(std::vector<double>{xx, 0.4});
    CHECK(v[0] == doctest::Approx(-2.0 * 0.4 + 0.3).epsilon(1e-10));
    CHECK(v[1] == doctest::Approx(2.0 * xx - 1.1).epsilon(1e-10));
  }
}

TEST_CASE("Maz'ya kernel: shadow support and scaling") {
  BallSpec ball = BallSpec::make({0.0, 0.0}, 0.5, 4);
  std::vector<double> x{0.8, 0.0};
  // Ray from x away from the ball misses spt(w).
  CHECK(maz_kernel(MultiIndex({2, 0}), ball, x, {0.95, 0.0}) == 0.0);
  CHECK(maz_kernel(MultiIndex({2, 0}), ball, x, {0.4, 0.0}) != 0.0);
  CHECK_THROWS_AS(maz_kernel(MultiIndex({2, 0}), ball, x, x), CoincidentPoints);

  // |K(x,y)| <= C |x-y|^{m-n}: log-log regression slope for m = 3, n = 2.
  std::vector<double> logs_t, logs_k;
  std::vector<double> xc{0.05, -0.02};
  for (double t = 1e-3; t < 0.12; t *= 1.6) {
    double k = maz_kernel(MultiIndex({3, 0}), ball, xc, {xc[0] + t, xc[1]});
    logs_t.push_back(std::log(t));
    logs_k.push_back(std::log(std::abs(k)));
  }
  double n = static_cast<double>(logs_t.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < logs_t.size(); ++i) {
    sx += logs_t[i];
    sy += logs_k[i];
    sxx += logs_t[i] * logs_t[i];
    sxy += logs_t[i] * logs_k[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.05));  // m - n = 1
}

TEST_CASE("Maz'ya representation formula at interior points (coarse grid)") {
  Rng rng(29);
  BallSpec ball = BallSpec::make({0.0, 0.0}, 0.7, 4);
  VPolynomial u = random_poly(rng, 1, 2);
  std::vector<std::vector<double>> pts = {{0.31, -0.22}, {-0.55, 0.4}, {0.0, 0.05}};
  auto res = maz_representation_residuals(u, 2, ball, 1.0, 96, pts);
  double scale = std::abs(u.evaluate(std::vector<double>{0.3, 0.3})[0]) + 1.0;
  for (double r : res) CHECK(r <= 1e-5 * scale);
}

TEST_CASE("Riesz bound: kernel fields give zero, ratios are finite") {
  EpsSetup s;
  auto dom32 = make_domain("square", 1.0 / 32);
  GridFunction rigid(dom32, 2);
  rigid.fill([](double x, double y) {
    return std::vector<double>{-y + 0.2, x};
  });
  CHECK(riesz_bound_check(s.op, s.P, rigid, 0) == 0.0);

  Rng rng(31);
  VPolynomial upoly = random_poly(rng, 2, 3);
  GridFunction u32(dom32, 2);
  u32.fill([&](double x, double y) {
    return upoly.evaluate(std::vector<double>{x, y});
  });
  double c32 = riesz_bound_check(s.op, s.P, u32, 0);
  CHECK(c32 > 0.0);
  CHECK(std::isfinite(c32));

  auto dom64 = make_domain("square", 1.0 / 64);
  GridFunction u64(dom64, 2);
  u64.fill([&](double x, double y) {
    return upoly.evaluate(std::vector<double>{x, y});
  });
  double c64 = riesz_bound_check(s.op, s.P, u64, 0);
  CHECK(std::abs(c64 - c32) <= 0.2 * std::max(c32, c64));

  // John domain variant: finite on the L-shape.
  auto doml = make_domain("lshape", 1.0 / 32);
  BallSpec bl = BallSpec::make({0.25, 0.25}, 0.2, 5);
  auto Pl = build_projection(s.op, bl, s.prof);
  GridFunction ul(doml, 2);
  ul.fill([&](double x, double y) {
    return upoly.evaluate(std::vector<double>{x, y});
  });
  double cl = riesz_bound_check(s.op, Pl, ul, 0);
  CHECK(std::isfinite(cl));
  CHECK(cl > 0.0);
}

TEST_CASE("projection serialization round-trips") {
  EpsSetup s;
  auto text = s.P.to_json();
  auto back = projection_from_json(text);
  CHECK(back.m == s.P.m);
  CHECK(back.kernel_count == s.P.kernel_count);
  CHECK(back.pi_matrix == s.P.pi_matrix);
  CHECK(back.dual_coeffs == s.P.dual_coeffs);
}
