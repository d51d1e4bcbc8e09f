#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qslide/graph.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

using namespace qslide;

TEST_CASE("runway: uniform chain with the attach site at the midpoint") {
  CouplingGraph g = build_runway(3, 1.0);
  CHECK(g.sites == 3);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0].a == 1);
  CHECK(g.edges[0].b == 2);
  CHECK(g.edges[1].a == 2);
  CHECK(g.edges[1].b == 3);
  CHECK(g.attach_site == 2);

  CouplingGraph full = build_runway(31, 0.48);
  CHECK(full.attach_site == 16);
  REQUIRE(full.edges.size() == 30);
  for (const Edge& e : full.edges) CHECK(e.coupling == 0.48);

  CHECK_THROWS_AS(build_runway(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_runway(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_runway(3, 0.0), std::invalid_argument);
}

TEST_CASE("slide: tapered couplings, weakest at the tip") {
  CouplingGraph g = build_slide(20, 0.48);
  REQUIRE(g.edges.size() == 19);
  // J_1 = 0.48 sqrt(1 * 37) / 19, J_19 lands on the bulk coupling exactly
  CHECK(g.edges.front().coupling == doctest::Approx(0.153670).epsilon(1e-5));
  CHECK(g.edges.front().coupling ==
        doctest::Approx(0.48 * std::sqrt(37.0) / 19.0).epsilon(1e-12));
  CHECK(g.edges.back().coupling == doctest::Approx(0.48).epsilon(1e-13));

  CouplingGraph s = build_slide(20, 0.48, SlideVariant::supplement);
  // J_19 = (0.48 / 20) sqrt(19 * 21) with the full half-parabola profile
  CHECK(s.edges.back().coupling == doctest::Approx(0.47940).epsilon(1e-5));
  CHECK(s.edges.back().coupling == doctest::Approx(0.024 * std::sqrt(399.0)).epsilon(1e-12));

  // the two-site slide degenerates to a single bulk-strength coupling
  CouplingGraph tiny = build_slide(2, 1.0);
  REQUIRE(tiny.edges.size() == 1);
  CHECK(tiny.edges[0].coupling == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS(build_slide(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_slide(20, -0.5), std::invalid_argument);
}

TEST_CASE("slide: couplings increase monotonically toward the runway") {
  for (int length : {2, 3, 5, 12, 20, 40}) {
    for (SlideVariant v : {SlideVariant::main_text, SlideVariant::supplement}) {
      CouplingGraph g = build_slide(length, 0.7, v);
      for (size_t i = 1; i < g.edges.size(); ++i)
        CHECK(g.edges[i].coupling > g.edges[i - 1].coupling);
    }
  }
}

TEST_CASE("nand tree: sites follow the input bits") {
  NandTreeSpec both_zero(1, {0, 0});
  CouplingGraph g = build_nand_tree(both_zero, 0.48);
  CHECK(g.sites == 3);
  CHECK(g.edges.size() == 2);
  CHECK(g.tree_root == 1);

  // a set bit hangs one leaf below the corresponding bottom node
  NandTreeSpec one_zero(1, {1, 0});
  CouplingGraph h = build_nand_tree(one_zero, 0.48);
  CHECK(h.sites == 4);
  REQUIRE(h.edges.size() == 3);
  CHECK(h.edges[2].a == 2);
  CHECK(h.edges[2].b == 4);

  NandTreeSpec full(2, {1, 1, 1, 1});
  CHECK(build_nand_tree(full, 0.48).sites == 11);

  for (int mask = 0; mask < 16; ++mask) {
    std::vector<int> bits(4);
    int ones = 0;
    for (int i = 0; i < 4; ++i) {
      bits[i] = (mask >> (3 - i)) & 1;
      ones += bits[i];
    }
    NandTreeSpec spec(2, bits);
    CHECK(spec.site_count() == 7 + ones);
    CHECK(build_nand_tree(spec, 1.0).sites == 7 + ones);
  }
}

TEST_CASE("nand tree spec: shape validation") {
  CHECK_THROWS_AS(NandTreeSpec(1, {0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(NandTreeSpec(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(NandTreeSpec(1, {0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(NandTreeSpec::from_inputs({0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(NandTreeSpec::from_inputs({1}), std::invalid_argument);
  CHECK(NandTreeSpec::from_inputs({0, 1, 1, 0}).depth == 2);
}

TEST_CASE("assembled system: default geometry with a depth-1 tree") {
  CouplingGraph g = assemble_system(build_slide(20, 0.48), build_runway(31, 0.48),
                                    build_nand_tree(NandTreeSpec(1, {0, 0}), 0.48), 0.48);
  CHECK(g.sites == 54);
  CHECK(g.attach_site == 36);
  CHECK(g.tree_root == 52);
  CHECK(region_sites(g, "slide").size() == 20);
  CHECK(region_sites(g, "runway").size() == 31);
  CHECK(region_sites(g, "tree").size() == 3);

  bool bridge = false, attach = false;
  for (const Edge& e : g.edges) {
    if (e.a == 20 && e.b == 21) bridge = true;
    if (e.a == 36 && e.b == 52) attach = true;
  }
  CHECK(bridge);
  CHECK(attach);
}

TEST_CASE("assembled system: optional slide and tree") {
  CouplingGraph bare = assemble_system(std::nullopt, build_runway(31, 0.48), std::nullopt, 0.48);
  CHECK(bare.sites == 31);
  CHECK(bare.edges.size() == 30);
  CHECK(bare.attach_site == 16);
  CHECK(bare.tree_root == 0);

  CouplingGraph no_tree =
      assemble_system(build_slide(20, 0.48), build_runway(31, 0.48), std::nullopt, 0.48);
  CHECK(no_tree.sites == 51);
  CHECK(no_tree.edges.size() == 50);
}

TEST_CASE("assembled system: random compositions stay well formed") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    int l_qs = static_cast<int>(rng() % 3) == 0 ? 0 : 2 + static_cast<int>(rng() % 24);
    int l_rw = 3 + 2 * static_cast<int>(rng() % 20);
    std::optional<CouplingGraph> slide;
    if (l_qs > 0) slide = build_slide(l_qs, 0.48);
    std::optional<CouplingGraph> tree;
    int depth = static_cast<int>(rng() % 4);
    if (depth > 0) {
      std::vector<int> bits(1 << depth);
      for (int& b : bits) b = static_cast<int>(rng() % 2);
      tree = build_nand_tree(NandTreeSpec(depth, bits), 0.48);
    }
    CouplingGraph g = assemble_system(slide, build_runway(l_rw, 0.48), tree, 0.48);

    CHECK(is_connected(g));
    size_t region_total = 0;
    for (const auto& [name, sites] : g.regions) region_total += sites.size();
    CHECK(region_total == static_cast<size_t>(g.sites));
    auto deg = site_degrees(g);
    for (int s = 1; s <= g.sites; ++s) {
      CHECK(deg[s] >= 1);
      CHECK(deg[s] <= 3);
    }
    CHECK(static_cast<size_t>(g.sites) == g.edges.size() + 1);  // assembled trees stay trees
  }
}

TEST_CASE("graph validation catches malformed input") {
  CouplingGraph g;
  g.sites = 2;
  g.edges.push_back({1, 2, 1.0});
  g.edges.push_back({1, 2, 0.5});
  g.regions["runway"] = {1, 2};
  CHECK_THROWS_AS(validate(g), std::logic_error);

  CouplingGraph h;
  h.sites = 2;
  h.edges.push_back({2, 1, 1.0});
  h.regions["runway"] = {1, 2};
  CHECK_THROWS_AS(validate(h), std::logic_error);

  CouplingGraph k;
  k.sites = 2;
  k.edges.push_back({1, 2, 1.0});
  k.regions["runway"] = {1};  // site 2 uncovered
  CHECK_THROWS_AS(validate(k), std::logic_error);
}

TEST_CASE("graph json: deterministic output with fixed field order") {
  CouplingGraph g = assemble_system(build_slide(3, 0.5), build_runway(3, 0.5),
                                    build_nand_tree(NandTreeSpec(1, {1, 0}), 0.5), 0.5);
  std::string a = graph_to_json(g);
  std::string b = graph_to_json(g);
  CHECK(a == b);

  size_t p_sites = a.find("\"sites\"");
  size_t p_edges = a.find("\"edges\"");
  size_t p_regions = a.find("\"regions\"");
  size_t p_attach = a.find("\"attach_site\"");
  REQUIRE(p_sites != std::string::npos);
  REQUIRE(p_edges != std::string::npos);
  REQUIRE(p_regions != std::string::npos);
  REQUIRE(p_attach != std::string::npos);
  CHECK(p_sites < p_edges);
  CHECK(p_edges < p_regions);
  CHECK(p_regions < p_attach);

  // edge weights render with shortest round-trip digits
  CHECK(a.find("0.5") != std::string::npos);
  CHECK(a.find("0.50000000") == std::string::npos);
}
