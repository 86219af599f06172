#include <doctest.h>

#include "ellikorn/gallery.hpp"
#include "ellikorn/maximal.hpp"

#include <algorithm>
#include <cmath>

using namespace ellikorn;

namespace {

GridFunction band_field(const GridDomain& dom, int comps, Rng& rng) {
  GridFunction f(dom, comps);
  std::vector<double> a(comps), bx(comps), by(comps), ph(comps), ph2(comps);
  for (int c = 0; c < comps; ++c) {
    a[c] = rng.uniform(0.5, 1.0);
    bx[c] = rng.uniform(6, 12);
    by[c] = rng.uniform(6, 12);
    ph[c] = rng.uniform(0, 6);
    ph2[c] = rng.uniform(0, 6);
  }
  f.fill([&](double x, double y) {
    std::vector<double> v(comps);
    for (int c = 0; c < comps; ++c)
      v[c] = a[c] * std::sin(bx[c] * x + ph[c]) * std::sin(by[c] * y + ph2[c]);
    return v;
  });
  return f;
}

}  // namespace

TEST_CASE("maximal operator basics") {
  auto dom = make_domain("square", 1.0 / 32);
  GridFunction f(dom, 1);
  f.fill([](double, double) { return std::vector<double>{-3.0}; });
  MaximalOptions hl;
  auto m = maximal(f, hl);
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i)
      CHECK(m.value.at(i, j, 0) == doctest::Approx(3.0).epsilon(1e-14));

  // Sharp maximal of an element of N vanishes at every eligible point.
  auto mono = VPolynomial::monomial(2, MultiIndex({1, 0}), 0, 1, Rat(2));
  std::vector<VPolynomial> script_n = {
      VPolynomial::monomial(2, MultiIndex::zero(2), 0, 1), mono};
  GridFunction g(dom, 1);
  g.fill([](double x, double) { return std::vector<double>{0.5 + 2 * x}; });
  MaximalOptions sharp;
  sharp.variant = MaximalOptions::Variant::Sharp;
  sharp.sigma = 1.25;
  sharp.script_n = &script_n;
  auto ms = maximal(g, sharp);
  CHECK(ms.value.max_abs() <= 1e-10);

  // Pointwise domination sharp <= restricted, and sublinearity of M.
  Rng rng(5);
  GridFunction u = band_field(dom, 1, rng);
  MaximalOptions restr;
  restr.variant = MaximalOptions::Variant::Restricted;
  restr.sigma = 1.25;
  auto mr = maximal(u, restr);
  sharp.script_n = &script_n;
  auto msu = maximal(u, sharp);
  GridFunction v = band_field(dom, 1, rng);
  auto mv = maximal(v, hl);
  auto mu_hl = maximal(u, hl);
  GridFunction uv = u;
  uv += v;
  auto muv = maximal(uv, hl);
  for (int j = 0; j < dom.ny; ++j)
    for (int i = 0; i < dom.nx; ++i) {
      CHECK(msu.value.at(i, j, 0) <= mr.value.at(i, j, 0) + 1e-12);
      CHECK(muv.value.at(i, j, 0) <=
            mu_hl.value.at(i, j, 0) + mv.value.at(i, j, 0) + 1e-12);
    }
}

TEST_CASE("Muckenhoupt constants: unit weight, Jensen, q-monotonicity") {
  auto dom = make_domain("square", 1.0 / 32);
  auto unit = Weight::unit(dom);
  auto cubes = dyadic_cube_family(dom, 4);
  for (double q : {1.0, 1.5, 2.0, 4.0})
    CHECK(muckenhoupt_constant(unit, q, cubes) == 1.0);

  auto w = Weight::power(dom, 0.5, 0.5, 0.5);
  double prev = 1e300;
  for (double q : {1.5, 2.0, 3.0}) {
    double v = muckenhoupt_constant(w, q, cubes);
    CHECK(v >= 1.0);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("power weight A_2 constants: stable in range, divergent outside") {
  // Joint cube-depth and lattice refinement.
  auto value_at_depth = [&](double a, int depth) {
    double h = 1.0 / (1 << (depth + 1));
    auto dom = make_domain("square", h);
    auto w = Weight::power(dom, a, 0.5, 0.5);
    auto cubes = dyadic_cube_family(dom, depth);
    return muckenhoupt_constant(w, 2.0, cubes);
  };
  double in5 = value_at_depth(0.5, 5), in6 = value_at_depth(0.5, 6);
  CHECK(std::abs(in6 - in5) <= 0.10 * std::max(in5, in6));

  double out4 = value_at_depth(3.0, 4);
  double out5 = value_at_depth(3.0, 5);
  double out6 = value_at_depth(3.0, 6);
  CHECK(out5 >= 2.0 * out4);
  CHECK(out6 >= 2.0 * out5);
}

TEST_CASE("Calderon-Zygmund cubes: properties (a)-(e)") {
  auto dom = make_domain("square", 1.0 / 64);
  Rng rng(19);

  // |f| <= alpha everywhere: empty list and |f| <= alpha off the union.
  GridFunction flat(dom, 1);
  flat.fill([](double, double) { return std::vector<double>{0.5}; });
  auto czf = cz_decomposition(flat, 1.0);
  CHECK(czf.cubes.empty());

  CHECK_THROWS_AS(cz_decomposition(flat, 0.25), ThresholdTooSmall);

  for (int trial = 0; trial < 10; ++trial) {
    GridFunction f = band_field(dom, 1, rng);
    // a couple of heavy spikes to make the decomposition nontrivial
    for (int s = 0; s < 3; ++s) {
      int i = static_cast<int>(rng.next_u64() % dom.nx);
      int j = static_cast<int>(rng.next_u64() % dom.ny);
      f.at(i, j, 0) += rng.uniform(4.0, 10.0);
    }
    double base = 0.0;
    for (int j = 0; j < dom.ny; ++j)
      for (int i = 0; i < dom.nx; ++i) base += f.abs_at(i, j);
    base /= dom.nx * dom.ny;
    double alpha = std::max(base, 0.6);
    auto cz = cz_decomposition(f, alpha);

    // (a) alpha < avg <= 2^n alpha, exact from stored averages.
    for (const auto& q : cz.cubes) {
      CHECK(q.avg > alpha);
      CHECK(q.avg <= 4.0 * alpha + 1e-12);
    }
    // pairwise disjoint
    for (size_t s = 0; s < cz.cubes.size(); ++s)
      for (size_t t = s + 1; t < cz.cubes.size(); ++t) {
        const auto &a = cz.cubes[s], &b = cz.cubes[t];
        bool overlap = a.i0 < b.i0 + b.s && b.i0 < a.i0 + a.s &&
                       a.j0 < b.j0 + b.s && b.j0 < a.j0 + a.s;
        CHECK_FALSE(overlap);
      }
    // (c) |f| <= alpha off the union.
    std::vector<std::uint8_t> in_union(dom.mask.size(), 0);
    for (const auto& q : cz.cubes)
      for (int j = q.j0; j < q.j0 + q.s; ++j)
        for (int i = q.i0; i < q.i0 + q.s; ++i) in_union[dom.idx(i, j)] = 1;
    for (int j = 0; j < cz.root.s; ++j)
      for (int i = 0; i < cz.root.s; ++i)
        if (!in_union[dom.idx(i, j)]) CHECK(f.abs_at(i, j) <= alpha + 1e-12);

    // (b) nesting: cubes at level alpha refine cubes at level beta <= alpha.
    auto cz_lo = cz_decomposition(f, std::max(base, alpha / 2));
    for (const auto& q : cz.cubes) {
      bool contained = false;
      for (const auto& p : cz_lo.cubes)
        if (p.i0 <= q.i0 && q.i0 + q.s <= p.i0 + p.s && p.j0 <= q.j0 &&
            q.j0 + q.s <= p.j0 + p.s)
          contained = true;
      CHECK(contained);
    }

    // (d)-(e): union inside {M f > alpha}; superlevel of 5^n alpha covered by
    // 5-dilations.
    MaximalOptions restr;
    restr.variant = MaximalOptions::Variant::Restricted;
    restr.sigma = 1.0;
    auto mf = maximal(f, restr);
    for (const auto& q : cz.cubes)
      for (int j = q.j0; j < q.j0 + q.s; ++j)
        for (int i = q.i0; i < q.i0 + q.s; ++i)
          CHECK(mf.value.at(i, j, 0) > alpha - 1e-12);
    for (int j = 0; j < cz.root.s; ++j)
      for (int i = 0; i < cz.root.s; ++i) {
        if (mf.value.at(i, j, 0) <= 25.0 * alpha) continue;
        bool covered = false;
        for (const auto& q : cz.cubes) {
          double ccx = q.i0 + q.s / 2.0, ccy = q.j0 + q.s / 2.0;
          if (std::abs(i + 0.5 - ccx) < 2.5 * q.s &&
              std::abs(j + 0.5 - ccy) < 2.5 * q.s)
            covered = true;
        }
        CHECK(covered);
      }
  }
}

TEST_CASE("Fefferman-Stein: exact case and bounded ratios") {
  auto dom = make_domain("square", 1.0 / 48, {}, 4);
  // N = D^1 ker(eps): constants spanned by the rotation direction.
  std::vector<VPolynomial> script_n;
  {
    VPolynomial rot(2, 4);
    rot.add_term(MultiIndex::zero(2), 1, Rat(-1));
    rot.add_term(MultiIndex::zero(2), 2, Rat(1));
    script_n.push_back(rot);
  }
  auto w1 = Weight::unit(dom);

  // f in N: both sides vanish -> Exact.
  GridFunction fn(dom, 4);
  fn.fill([](double, double) {
    return std::vector<double>{0.0, -0.8, 0.8, 0.0};
  });
  auto r0 = fefferman_stein_check(fn, 1.25, 2.0, w1, script_n);
  CHECK(r0.exact);

  Rng rng(61);
  std::vector<double> ratios;
  for (int t = 0; t < 30; ++t) {
    GridFunction f = band_field(dom, 4, rng);
    auto r = fefferman_stein_check(f, 1.25, 2.0, w1, script_n);
    REQUIRE_FALSE(r.exact);
    CHECK(std::isfinite(r.ratio));
    ratios.push_back(r.ratio);
  }
  double mx = *std::max_element(ratios.begin(), ratios.end());
  double mn = *std::min_element(ratios.begin(), ratios.end());
  CHECK(mx / mn <= 4.0);

  auto wp = Weight::power(dom, 0.5, 0.5, 0.5);
  GridFunction f = band_field(dom, 4, rng);
  auto rp = fefferman_stein_check(f, 1.25, 2.0, wp, script_n);
  CHECK(std::isfinite(rp.ratio));
  CHECK(rp.ratio > 0.0);
}
