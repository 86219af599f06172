#include <doctest.h>

#include "ellikorn/ellipticity.hpp"
#include "ellikorn/errors.hpp"
#include "ellikorn/gallery.hpp"
#include "ellikorn/grid.hpp"

#include <Eigen/SVD>

#include <cmath>

using namespace ellikorn;

namespace {

DiffOperator op_d1_scalar() {
  std::vector<OperatorTerm> terms;
  terms.push_back({MultiIndex({1, 0}), {{1.0}}});
  return make_operator(2, 1, 1, 1, terms, "d1");
}

// Independent oracle for dim Z_l: numerical rank of the coefficient map
// assembled through apply_to_polynomial, via SVD.
int kernel_dim_oracle(const DiffOperator& op, int l) {
  auto cols_mi = multiindices_of_order(op.n, l);
  auto rows_mi = multiindices_of_order(op.n, std::max(l - op.k, -1));
  int cols = static_cast<int>(cols_mi.size()) * op.dim_v;
  if (l < op.k) return cols;
  int rows = static_cast<int>(rows_mi.size()) * op.dim_w;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  for (size_t t = 0; t < cols_mi.size(); ++t)
    for (int i = 0; i < op.dim_v; ++i) {
      auto img = apply_to_polynomial(
          op, VPolynomial::monomial(op.n, cols_mi[t], i, op.dim_v));
      for (size_t r = 0; r < rows_mi.size(); ++r) {
        auto v = img.coeff(rows_mi[r]);
        for (int w = 0; w < op.dim_w; ++w)
          m(r * op.dim_w + w, t * op.dim_v + i) = to_double(v[w]);
      }
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  int rank = 0;
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10 * std::max(1.0, smax)) ++rank;
  return cols - rank;
}

}  // namespace

TEST_CASE("homogeneous kernels match the rank oracle") {
  auto lap = op_laplacian(2);
  CHECK(kernel_homogeneous(lap, 0).size() == 1);  // constants
  CHECK(kernel_homogeneous(lap, 2).size() == 2);  // harmonic quadratics
  CHECK(kernel_dim_oracle(lap, 2) == 2);

  auto eps = op_sym_gradient(2);
  CHECK(kernel_homogeneous(eps, 0).size() == 2);
  CHECK(kernel_homogeneous(eps, 1).size() == 1);
  CHECK(kernel_homogeneous(eps, 2).size() == 0);
  CHECK(kernel_dim_oracle(eps, 2) == 0);

  for (const auto& e : gallery())
    for (int l = 0; l <= 3; ++l)
      CHECK(static_cast<int>(kernel_homogeneous(e.op, l).size()) ==
            kernel_dim_oracle(e.op, l));
}

TEST_CASE("kernel basis elements are annihilated exactly") {
  for (const auto& e : gallery())
    for (int l = 0; l <= 3; ++l)
      for (const auto& z : kernel_homogeneous(e.op, l))
        CHECK(apply_to_polynomial(e.op, z).is_zero());
}

TEST_CASE("dim Z_l below order k is the full space") {
  for (const auto& e : gallery())
    for (int l = 0; l < e.op.k; ++l)
      CHECK(static_cast<int>(kernel_homogeneous(e.op, l).size()) ==
            dim_homogeneous(e.op.n, l) * e.op.dim_v);
}

TEST_CASE("c_ellipticity reproduces the gallery verdicts") {
  for (const auto& e : gallery()) {
    auto prof = c_ellipticity(e.op, 12);
    if (e.expected_verdict == "c_elliptic") {
      CHECK(prof.verdict == CVerdict::CElliptic);
      REQUIRE(prof.deg_p.has_value());
      CHECK(*prof.deg_p == e.expected_deg_p);
    } else {
      CHECK(prof.verdict == CVerdict::NotCElliptic);
      REQUIRE(prof.witness.has_value());
      // Witness soundness: exact residual after one extra polish step.
      auto polished = newton_polish(e.op, *prof.witness);
      Rat r2 = witness_residual2_exact(e.op, polished);
      CHECK(r2 <= rat_of(1e-16));
    }
  }
}

TEST_CASE("symmetric gradient: deg_P = 2 and a 3-dimensional kernel") {
  auto prof = c_ellipticity(op_sym_gradient(2), 12);
  REQUIRE(prof.verdict == CVerdict::CElliptic);
  CHECK(*prof.deg_p == 2);
  CHECK(prof.total_kernel_dim() == 3);
  auto dims = prof.kernel_dims();
  REQUIRE(dims.size() == 3);
  CHECK(dims[0] == 2);
  CHECK(dims[1] == 1);
  CHECK(dims[2] == 0);
}

TEST_CASE("monotone vanishing of kernel dimensions") {
  for (const auto& e : gallery()) {
    bool seen_zero = false;
    for (int l = 0; l <= 8; ++l) {
      int d = static_cast<int>(kernel_homogeneous(e.op, l).size());
      if (seen_zero) CHECK(d == 0);
      if (d == 0) seen_zero = true;
    }
  }
}

TEST_CASE("is_elliptic: gradient has unit minimum, d1 is degenerate") {
  auto rep = is_elliptic(op_gradient(2), 512);
  CHECK(rep.elliptic);
  CHECK(rep.min_singular_value == doctest::Approx(1.0).epsilon(1e-9));

  auto bad = is_elliptic(op_d1_scalar(), 512);
  CHECK_FALSE(bad.elliptic);
  CHECK(bad.min_singular_value < 1e-6);
  CHECK(std::abs(bad.argmin_xi[1]) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("is_elliptic matches a dense sphere-sampling oracle for eps") {
  auto eps = op_sym_gradient(2);
  auto rep = is_elliptic(eps, 2048);
  CHECK(rep.elliptic);
  // Dense oracle at 1e5 points.
  double oracle = 1e300;
  for (int t = 0; t < 100000; ++t) {
    double th = 2 * M_PI * t / 100000.0;
    Eigen::VectorXcd xi(2);
    xi << std::cos(th), std::sin(th);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eps.symbol(xi));
    oracle = std::min(oracle, svd.singularValues()(1));
  }
  CHECK(rep.min_singular_value <= oracle + 1e-9);
  CHECK(rep.min_singular_value >= 1.0 / std::sqrt(2.0) - 1e-6);
  CHECK(oracle >= 1.0 / std::sqrt(2.0) - 1e-6);
}

TEST_CASE("complex witness search: eps^D and Delta yield certified witnesses") {
  auto epsd = op_dev_sym_gradient(2);
  auto w = complex_witness_search(epsd, 16, 1e-10);
  REQUIRE(w.has_value());
  CHECK(w->residual <= 1e-10);
  CHECK(witness_residual2_exact(epsd, *w) <= rat_of(1e-20));

  auto lap = op_laplacian(2);
  auto wl = complex_witness_search(lap, 16, 1e-10);
  REQUIRE(wl.has_value());
  // xi proportional to (1, +-i)/sqrt(2)
  CHECK(std::abs(std::abs(wl->xi[0]) - 1.0 / std::sqrt(2.0)) < 1e-8);
  CHECK(std::abs(std::abs(wl->xi[1]) - 1.0 / std::sqrt(2.0)) < 1e-8);
}

TEST_CASE("complex witness search: Hessian admits none") {
  auto hess = op_gradient_k(2, 2);
  auto w = complex_witness_search(hess, 12, 1e-8);
  CHECK_FALSE(w.has_value());
  CHECK(complex_symbol_infimum(hess, 12) >= 0.1);
}

TEST_CASE("ellipticity is implied by C-ellipticity on the gallery") {
  for (const auto& e : gallery()) {
    auto prof = c_ellipticity(e.op, 12);
    if (prof.verdict == CVerdict::CElliptic)
      CHECK(is_elliptic(e.op, 1024).elliptic);
  }
  // Contrapositive on the degenerate example: d1 not elliptic, so not
  // C-elliptic either.
  auto prof = c_ellipticity(op_d1_scalar(), 8);
  CHECK(prof.verdict == CVerdict::NotCElliptic);
}

TEST_CASE("cancellation image intersection") {
  auto lap = op_laplacian(2);
  auto r = cancellation_image_intersection(lap, 64);
  CHECK(r.dimension == 1);

  auto d = op_gradient(2);
  CHECK(cancellation_image_intersection(d, 64).dimension == 0);

  auto eps = op_sym_gradient(2);
  CHECK(cancellation_image_intersection(eps, 64).dimension == 0);

  CHECK_THROWS_AS(cancellation_image_intersection(op_d1_scalar(), 64),
                  NotElliptic);
}
