#include <stdexcept>
#include "doctest.h"
#include "odd/skeleton.hpp"

using namespace odd;

TEST_SUITE("skeleton") {
  TEST_CASE("validate rejects malformed width lists") {
    CHECK_THROWS_WITH_AS((Skeleton{{2, 2}, 2}.validate()),
                         doctest::Contains("invalid skeleton"), std::runtime_error);
    CHECK_THROWS_AS((Skeleton{{1, 3}, 2}.validate()), std::runtime_error);  // 3 > 2*1
    CHECK_THROWS_AS((Skeleton{{1, 2, 5}, 2}.validate()), std::runtime_error);
    CHECK_THROWS_AS((Skeleton{{}, 2}.validate()), std::runtime_error);
    CHECK_THROWS_AS((Skeleton{{1, 2}, 1}.validate()), std::runtime_error);
    CHECK_NOTHROW((Skeleton{{1, 2, 4}, 3}.validate()));
    CHECK_NOTHROW((Skeleton{{1}, 2}.validate()));
  }

  TEST_CASE("parse and to_string") {
    const Skeleton sk = Skeleton::parse("1-2-4-8", 2);
    CHECK(sk.widths == std::vector<int>{1, 2, 4, 8});
    CHECK(sk.n_classes == 2);
    CHECK(sk.to_string() == "1-2-4-8");
    CHECK(sk.depth() == 4);
    CHECK(sk.n_internal() == 15);
    CHECK_THROWS_AS(Skeleton::parse("1-x-4", 2), std::runtime_error);
    CHECK_THROWS_AS(Skeleton::parse("", 2), std::runtime_error);
    CHECK_THROWS_AS(Skeleton::parse("2-4", 2), std::runtime_error);
  }

  TEST_CASE("is_tree") {
    CHECK(Skeleton::parse("1-2-4-8", 2).is_tree());
    CHECK(Skeleton::parse("1-2", 2).is_tree());
    CHECK(Skeleton::parse("1", 2).is_tree());
    CHECK_FALSE(Skeleton::parse("1-2-4-4-4", 2).is_tree());
    CHECK_FALSE(Skeleton::parse("1-2-3-3-3-3", 2).is_tree());
  }

  TEST_CASE("presets") {
    const auto& presets = skeleton_presets();
    REQUIRE(presets.size() == 4);
    CHECK(presets[0] == "1-2-4-8");
    CHECK(presets[1] == "1-2-4-4-4");
    CHECK(presets[2] == "1-2-3-3-3-3");
    CHECK(presets[3] == "1-2-2-2-2-2-2-2");
    for (const auto& p : presets) CHECK_NOTHROW(Skeleton::parse(p, 2).validate());
  }

  TEST_CASE("graph layout for skeleton 1-2-3 with two classes") {
    const GraphTopology topo = build_graph(Skeleton::parse("1-2-3", 2));
    CHECK(topo.n_internal() == 6);
    CHECK(topo.n_classes() == 2);
    CHECK(topo.n_nodes() == 8);
    CHECK(topo.depth() == 3);
    CHECK(topo.layers == std::vector<std::vector<int>>{{0}, {1, 2}, {3, 4, 5}});
    CHECK(topo.layer_of[0] == 0);
    CHECK(topo.layer_of[5] == 2);
    CHECK(topo.terminal_for_class(0) == 6);
    CHECK(topo.terminal_for_class(1) == 7);
    CHECK(topo.class_of_terminal(7) == 1);
    CHECK(topo.is_terminal(6));
    CHECK_FALSE(topo.is_terminal(5));

    // successors: next layer plus both terminals; last layer only terminals
    CHECK(topo.succ[0] == std::vector<int>{1, 2, 6, 7});
    CHECK(topo.succ[1] == std::vector<int>{3, 4, 5, 6, 7});
    CHECK(topo.succ[3] == std::vector<int>{6, 7});

    // predecessors mirror successors
    CHECK(topo.pred[6] == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(topo.pred[3] == std::vector<int>{1, 2});
    CHECK(topo.pred[0].empty());

    // arcs: 1*(2+2) + 2*(3+2) + 3*2 = 20
    CHECK(topo.n_arcs() == 20);
  }

  TEST_CASE("build_graph validates") {
    CHECK_THROWS_WITH_AS(build_graph(Skeleton{{1, 3}, 2}),
                         doctest::Contains("invalid skeleton"), std::runtime_error);
  }

  TEST_CASE("tree arcs follow heap order") {
    const auto arcs = tree_arcs(Skeleton::parse("1-2-4", 2));
    REQUIRE(arcs.size() == 7);
    CHECK(arcs[0] == std::pair<int, int>{1, 2});
    CHECK(arcs[1] == std::pair<int, int>{3, 4});
    CHECK(arcs[2] == std::pair<int, int>{5, 6});
    for (int u = 3; u <= 6; ++u) CHECK(arcs[static_cast<std::size_t>(u)] ==
                                       std::pair<int, int>{-1, -1});

    CHECK_THROWS_WITH_AS(tree_arcs(Skeleton::parse("1-2-3", 2)),
                         doctest::Contains("not a tree skeleton"), std::runtime_error);
  }
}
