#include <doctest.h>

#include "ellikorn/chains.hpp"
#include "ellikorn/errors.hpp"

#include <cmath>
#include <set>

using namespace ellikorn;

TEST_CASE("make_domain: square, slit, strip") {
  auto sq = make_domain("square", 1.0 / 32);
  CHECK(sq.nx == 32);
  CHECK(sq.ny == 32);
  CHECK(sq.cell_count() == 32 * 32);
  CHECK(sq.diameter() == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));

  auto slit = make_domain("slit", 1.0 / 64, {}, 4);
  CHECK(slit.cell_count() < 64 * 64);
  // The slit cells are genuinely removed and the rest stays connected
  // (finalize throws otherwise).
  bool found_removed = false;
  for (int i = 0; i < slit.nx / 2; ++i)
    if (!slit.inside(i, slit.ny / 2 - 2)) found_removed = true;
  CHECK(found_removed);

  auto strip = make_domain("halfspace_strip", 1.0 / 64,
                           {{"depth", 0.25}, {"width", 1.0}});
  CHECK(strip.periodic_x);
  CHECK(strip.ny == 16);
  CHECK(strip.inside(-3, 0));  // tangential wrap

  CHECK_THROWS_AS(make_domain("disk", 1.0 / 8, {{"radius", 0.01}}), EmptyMask);
  CHECK_THROWS_AS(make_domain("nonsense", 0.1), UsageError);
}

TEST_CASE("whitney cubes satisfy side <= dist <= 4 side and cover the mask") {
  for (const char* kind : {"disk", "lshape", "slit"}) {
    auto dom = make_domain(kind, 1.0 / 64, {}, 4);
    auto cover = whitney_cover(dom);
    CHECK(!cover.empty());
    std::set<std::pair<int, int>> covered;
    for (const auto& c : cover) {
      CHECK(c.side <= c.dist);
      CHECK(c.dist <= 4 * c.side);
      for (int b = 0; b < c.side; ++b)
        for (int a = 0; a < c.side; ++a)
          covered.insert({c.bi0 + a, c.bj0 + b});
    }
    // every mask block covered
    int g = dom.granularity;
    for (int bj = 0; bj < dom.ny / g; ++bj)
      for (int bi = 0; bi < dom.nx / g; ++bi)
        if (dom.inside(bi * g, bj * g)) CHECK(covered.count({bi, bj}) == 1);
  }
}

TEST_CASE("whitney cube sides shrink toward the boundary") {
  auto dom = make_domain("disk", 1.0 / 128, {}, 4);
  auto cover = whitney_cover(dom);
  int near_max = 0, far_max = 0;
  for (const auto& c : cover) {
    if (c.dist <= 2) near_max = std::max(near_max, c.side);
    far_max = std::max(far_max, c.side);
  }
  CHECK(near_max <= 2);
  CHECK(far_max >= 4);
}

TEST_CASE("single-cell domain yields the single-cube cover, chain length 0") {
  auto dom = make_domain("square", 1.0 / 16, {{"side", 1.0 / 16}});
  CHECK(dom.cell_count() == 1);
  auto cover = whitney_cover(dom);
  REQUIRE(cover.size() == 1);
  auto cc = emanating_chains(cover, dom);
  CHECK(cc.chains[0].size() == 1);
  auto rep = check_chain_properties(cc, dom);
  CHECK(rep.c1_containment);
  CHECK(rep.c2_monotone);
  CHECK(rep.covers_all_cells);
}

TEST_CASE("emanating chains pass (C1)-(C3) on the four test geometries") {
  struct Geo {
    std::string kind;
    double h;
    std::vector<std::pair<std::string, double>> params;
  };
  std::vector<Geo> geos = {{"disk", 1.0 / 64, {}},
                           {"lshape", 1.0 / 64, {}},
                           {"slit", 1.0 / 64, {}},
                           {"snowflake", 1.0 / 128, {{"iter", 3}}}};
  size_t disk_maxchain = 0, slit_maxchain = 0;
  double disk_sigma2 = 0.0, slit_sigma2 = 0.0;
  for (const auto& g : geos) {
    auto dom = make_domain(g.kind, g.h, g.params, 4);
    auto cover = whitney_cover(dom);
    auto cc = emanating_chains(cover, dom);
    auto rep = check_chain_properties(cc, dom);
    INFO(g.kind, " sigma2=", rep.sigma2, " overlap=", rep.max_overlap_count);
    CHECK(rep.c1_containment);
    CHECK(rep.c1_overlap);
    CHECK(rep.c2_monotone);
    CHECK(rep.c2_balls);
    CHECK(rep.c3_local_finite);
    CHECK(rep.covers_all_cells);
    CHECK(rep.diam_bound);
    CHECK(rep.sigma1 > 1.0);
    CHECK(rep.sigma1_capacity > rep.sigma1);
    size_t maxchain = 0;
    for (const auto& ch : cc.chains) maxchain = std::max(maxchain, ch.size());
    if (g.kind == "disk") {
      disk_sigma2 = rep.sigma2_chain;
      disk_maxchain = maxchain;
    }
    if (g.kind == "slit") {
      slit_sigma2 = rep.sigma2_chain;
      slit_maxchain = maxchain;
    }
  }
  // Chains route around the slit tip: visibly longer chains, and the
  // containment constant is at least the disk's.
  CHECK(slit_maxchain > disk_maxchain);
  CHECK(slit_sigma2 >= disk_sigma2);
}

TEST_CASE("(C1) fails with an offending cube when sigma1 is forced to 10") {
  auto dom = make_domain("slit", 1.0 / 64, {}, 4);
  auto cc = emanating_chains(whitney_cover(dom), dom);
  Rat big(10);
  auto rep = check_chain_properties(cc, dom, &big);
  CHECK_FALSE(rep.c1_containment);
  CHECK(!rep.offending_cubes.empty());
}

TEST_CASE("chain cover serializes to JSON") {
  auto dom = make_domain("lshape", 1.0 / 32, {}, 4);
  auto cc = emanating_chains(whitney_cover(dom), dom);
  auto js = cc.to_json();
  CHECK(js.find("\"cubes\"") != std::string::npos);
  CHECK(js.find("\"chains\"") != std::string::npos);
  CHECK(js.find("\"overlap_balls\"") != std::string::npos);
}
