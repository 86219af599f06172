#include <doctest.h>

#include "ellikorn/besov.hpp"
#include "ellikorn/errors.hpp"
#include "ellikorn/gallery.hpp"

#include <algorithm>
#include <cmath>

using namespace ellikorn;

namespace {

Samples1D bump_1d(int N, double c, double w, double a) {
  Samples1D f;
  f.h = 1.0 / N;
  f.x0 = 0.0;
  f.periodic = true;
  f.v.assign(N, 0.0);
  for (int i = 0; i < N; ++i) {
    double x = f.x_of(i);
    f.v[i] = a * std::exp(-0.5 * (x - c) * (x - c) / (w * w));
  }
  return f;
}

Samples1D family_member(int which, int N) {
  Samples1D f;
  f.h = 1.0 / N;
  f.x0 = 0.0;
  f.periodic = true;
  f.v.assign(N, 0.0);
  Rng rng(100 + which);
  int nb = 2 + which % 3;
  for (int b = 0; b < nb; ++b) {
    double c = rng.uniform(0.2, 0.8), w = rng.uniform(0.02, 0.08);
    double a = rng.uniform(-1, 1);
    for (int i = 0; i < N; ++i) {
      double x = f.x_of(i);
      f.v[i] += a * std::exp(-0.5 * (x - c) * (x - c) / (w * w));
    }
  }
  return f;
}

DiffOperator op_d1() {
  std::vector<OperatorTerm> terms;
  terms.push_back({MultiIndex({1, 0}), {{1.0}}});
  return make_operator(2, 1, 1, 1, terms, "d1");
}

}  // namespace

TEST_CASE("oscillation: polynomial reproduction, M-monotonicity, scaling") {
  Samples1D f;
  f.h = 1.0 / 256;
  f.x0 = -0.5;
  f.v.resize(256);
  for (int i = 0; i < 256; ++i) {
    double x = f.x_of(i);
    f.v[i] = 1.0 - 2 * x + 0.5 * x * x;
  }
  // f in P_2: oscillation vanishes.
  CHECK(oscillation(f, 0.1, 0.07, 2, 2.0) <= 1e-10);
  CHECK(oscillation(f, 0.1, 0.07, 2, 1.0) <= 1e-10);

  // Larger competitor class can only decrease the infimum.
  for (int i = 0; i < 256; ++i) {
    double x = f.x_of(i);
    f.v[i] = std::sin(9 * x) + x * x * x;
  }
  for (double r : {0.05, 0.1, 0.2})
    for (double x : {-0.2, 0.0, 0.3})
      CHECK(oscillation(f, x, r, 3, 2.0) <= oscillation(f, x, r, 2, 2.0) + 1e-12);

  CHECK_THROWS_AS(oscillation(f, 0.0, 1.2 * f.h, 2, 2.0), TooFewPoints);

  // f = x^{M+1} near 0: osc(0, r) ~ r^{M+1} (log-log slope within 5%).
  const int M = 2;
  Samples1D g;
  g.h = 1.0 / 4096;
  g.x0 = -0.5;
  g.v.resize(4096);
  for (int i = 0; i < 4096; ++i) {
    double x = g.x_of(i);
    g.v[i] = std::pow(x, M + 1);
  }
  std::vector<double> lt, lo;
  for (double r = 0.01; r <= 0.17; r *= 2) {
    lt.push_back(std::log(r));
    lo.push_back(std::log(oscillation(g, 0.0, r, M, 2.0)));
  }
  double n = static_cast<double>(lt.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < lt.size(); ++i) {
    sx += lt[i];
    sy += lo[i];
    sxx += lt[i] * lt[i];
    sxy += lt[i] * lo[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(M + 1.0).epsilon(0.05));
}

TEST_CASE("2-D oscillation vanishes on fitted polynomials") {
  auto dom = make_domain("square", 1.0 / 32);
  GridFunction f(dom, 1);
  f.fill([](double x, double y) {
    return std::vector<double>{1.0 + x - 2 * y + x * y};
  });
  CHECK(oscillation(f, 0.5, 0.5, 0.2, 2, 2.0) <= 1e-10);
  CHECK(oscillation(f, 0.5, 0.5, 0.2, 1, 2.0) > 1e-6);
}

TEST_CASE("Besov norms: homogeneity, zero, translation additivity") {
  BesovParams bp;
  bp.s = 1.0;
  bp.p = 1.0;
  bp.q = 1.0;
  bp.M = 2;

  Samples1D zero = bump_1d(512, 0.5, 0.05, 0.0);
  CHECK(besov_norm_osc(zero, bp) == 0.0);
  CHECK(besov_norm_lp(zero, bp) == 0.0);

  Samples1D f = bump_1d(512, 0.5, 0.04, 1.0);
  double base = besov_norm_osc(f, bp);
  Samples1D f3 = f;
  for (auto& v : f3.v) v *= -3.0;
  CHECK(besov_norm_osc(f3, bp) == doctest::Approx(3.0 * base).epsilon(1e-12));

  // Two distant translated copies: norm doubles within 2 percent.
  Samples1D two = bump_1d(512, 0.25, 0.02, 1.0);
  Samples1D copy = bump_1d(512, 0.75, 0.02, 1.0);
  for (size_t i = 0; i < two.v.size(); ++i) two.v[i] += copy.v[i];
  Samples1D one = bump_1d(512, 0.25, 0.02, 1.0);
  BesovParams bp2 = bp;
  bp2.t_max = 0.1;  // locality at these scales
  double n2 = besov_norm_osc(two, bp2), n1 = besov_norm_osc(one, bp2);
  CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(0.02));
}

TEST_CASE("Littlewood-Paley multipliers form an exact partition of unity") {
  Samples1D f = bump_1d(1024, 0.5, 0.03, 1.0);
  CHECK(lp_partition_defect(f) <= 1e-12);
  Samples1D bad = bump_1d(1000, 0.5, 0.03, 1.0);
  BesovParams bp;
  CHECK_THROWS_AS(besov_norm_lp(bad, bp), NonPowerOfTwoGrid);
}

TEST_CASE("oscillation and Littlewood-Paley norms agree within one bracket") {
  // Frozen bracket c = 15, family spread <= 2.5 (s=1) / 1.5 (s=3/2).
  for (auto [s, p, spread_cap] :
       {std::tuple<double, double, double>{1.0, 1.0, 2.5}, {1.5, 2.0, 1.5}}) {
    BesovParams bp;
    bp.s = s;
    bp.p = p;
    bp.q = p;
    bp.M = 2;
    std::vector<double> ratios;
    for (int which = 0; which < 10; ++which) {
      auto f = family_member(which, 1024);
      double osc = besov_norm_osc(f, bp);
      double lp = besov_norm_lp(f, bp);
      double r = osc / lp;
      CHECK(r >= 1.0 / 15.0);
      CHECK(r <= 15.0);
      ratios.push_back(r);
    }
    double mx = *std::max_element(ratios.begin(), ratios.end());
    double mn = *std::min_element(ratios.begin(), ratios.end());
    CHECK(mx / mn <= spread_cap);
  }
}

TEST_CASE("half-space trace experiment: guards and invariance") {
  auto hess = op_gradient_k(2, 2);
  auto prof = c_ellipticity(hess, 8);
  TraceExperimentConfig cfg;
  cfg.n_tangential = 64;
  cfg.depth = 0.75;

  std::vector<SmoothField> zero_fam = {SmoothField(1)};
  auto rz = halfspace_trace_experiment(hess, prof, zero_fam, cfg);
  REQUIRE(rz.size() == 1);
  CHECK(rz[0].exact);

  auto d = op_gradient(2);
  auto dprof = c_ellipticity(d, 6);
  CHECK_THROWS_AS(halfspace_trace_experiment(d, dprof, zero_fam, cfg),
                  OrderTooLow);

  // Tangential translation invariance of the ratio (periodic wrap).
  auto fam = trace_test_family(1, 1, cfg.depth, 99);
  SmoothField shifted(1);
  for (auto t : fam[0].terms()) {
    t.cx += 0.37;
    shifted.add_term(t);
  }
  std::vector<SmoothField> both = {fam[0], shifted};
  auto rr = halfspace_trace_experiment(hess, prof, both, cfg);
  CHECK(rr[0].ratio == doctest::Approx(rr[1].ratio).epsilon(0.01));
}

TEST_CASE("non-elliptic blow-up family: bounded interior, divergent boundary") {
  auto d1 = op_d1();
  auto rows = nonelliptic_blowup_family(d1, {0.0, 1.0}, {1.0}, 6, 2.0, 4.0);
  REQUIRE(rows.size() == 5);  // j = 2..6
  double mean = 0.0;
  for (const auto& r : rows) mean += r.interior;
  mean /= rows.size();
  for (const auto& r : rows) {
    CHECK(r.interior <= 1.10 * mean);
    CHECK(r.interior >= 0.90 * mean);
  }
  for (size_t t = 1; t < rows.size(); ++t)
    CHECK(rows[t].boundary >= 1.5 * rows[t - 1].boundary);

  // Non-kernel direction is rejected by the exact symbol check.
  CHECK_THROWS_AS(nonelliptic_blowup_family(d1, {1.0, 0.0}, {1.0}, 4, 2.0, 4.0),
                  WitnessInvalid);
}
