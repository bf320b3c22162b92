#include <stdexcept>
#include "doctest.h"
#include "odd/diagram.hpp"
#include "support/tmpdir.hpp"
#include "support/toy.hpp"

using namespace odd;

namespace {

// Hand-built XOR classifier on skeleton (1,2): root splits x0, both children
// split x1 with opposite terminal assignments.
DecisionDiagram xor_diagram() {
  DecisionDiagram dd;
  dd.topology = build_graph(Skeleton::parse("1-2", 2));
  dd.active = {true, true, true};
  dd.neg_arc = {1, 3, 4};  // terminals: 3 = class 0, 4 = class 1
  dd.pos_arc = {2, 4, 3};
  dd.planes = {{{1.0, 0.0}, 0.5}, {{0.0, 1.0}, 0.5}, {{0.0, 1.0}, 0.5}};
  dd.validate(2);
  return dd;
}

}  // namespace

TEST_SUITE("diagram") {
  TEST_CASE("xor routing") {
    const DecisionDiagram dd = xor_diagram();
    const Dataset ds = toy::xor_corners();
    CHECK(evaluate(dd, ds) == 1.0);
    CHECK(dd.n_active() == 3);

    const PredictionTrace trace = predict(dd, std::vector<double>{0.0, 1.0});
    CHECK(trace.terminal == 4);
    CHECK(trace.class_id == 1);
    REQUIRE(trace.visited.size() == 2);
    CHECK(trace.visited[0].node == 0);
    CHECK_FALSE(trace.visited[0].positive);
    CHECK(trace.visited[1].node == 1);
    CHECK(trace.visited[1].positive);
  }

  TEST_CASE("boundary points take the positive side") {
    DecisionDiagram dd;
    dd.topology = build_graph(Skeleton::parse("1", 2));
    dd.active = {true};
    dd.neg_arc = {1};
    dd.pos_arc = {2};
    dd.planes = {{{1.0}, 0.5}};
    dd.validate(1);
    CHECK(predict(dd, std::vector<double>{0.5}).class_id == 1);
    CHECK(predict(dd, std::vector<double>{0.4999}).class_id == 0);
  }

  TEST_CASE("objective value") {
    const DecisionDiagram dd = xor_diagram();
    const Dataset ds = toy::xor_corners();
    // 0 mistakes, 2 active non-root nodes out of 2 -> full regularizer
    CHECK(objective_value(dd, ds, 0.1) == doctest::Approx(0.1));
    CHECK(objective_value(dd, ds, 0.0) == 0.0);

    DecisionDiagram wrong = dd;
    std::swap(wrong.neg_arc[1], wrong.pos_arc[1]);  // breaks two points
    CHECK(objective_value(wrong, ds, 0.0) == doctest::Approx(0.5));
  }

  TEST_CASE("fragmentation counts routed samples per node") {
    const std::vector<long> counts = fragmentation(xor_diagram(), toy::xor_corners());
    REQUIRE(counts.size() == 5);
    CHECK(counts[0] == 4);
    CHECK(counts[1] == 2);
    CHECK(counts[2] == 2);
    CHECK(counts[3] == 2);
    CHECK(counts[4] == 2);
  }

  TEST_CASE("arc ordering flag") {
    DecisionDiagram dd = xor_diagram();
    CHECK_FALSE(dd.has_ordered_arcs());       // node 2 crosses: neg 4 > pos 3
    std::swap(dd.neg_arc[2], dd.pos_arc[2]);  // now 3 <= 4 holds everywhere
    CHECK(dd.has_ordered_arcs());
    std::swap(dd.neg_arc[0], dd.pos_arc[0]);  // root: neg 2 > pos 1
    CHECK_FALSE(dd.has_ordered_arcs());
    dd.validate(2);  // ordering is not a structural requirement
  }

  TEST_CASE("validator rejects inconsistent structures") {
    const DecisionDiagram good = xor_diagram();

    DecisionDiagram bad = good;
    bad.active[0] = false;
    CHECK_THROWS_WITH_AS(bad.validate(2), doctest::Contains("invalid model"),
                         std::runtime_error);

    bad = good;
    bad.active[1] = false;  // root still points at node 1
    CHECK_THROWS_AS(bad.validate(2), std::runtime_error);

    bad = good;
    bad.neg_arc[1] = 0;  // not a successor of node 1
    CHECK_THROWS_AS(bad.validate(2), std::runtime_error);

    bad = good;
    bad.planes[1].a = {1.0};  // wrong dimension
    CHECK_THROWS_AS(bad.validate(2), std::runtime_error);

    bad = good;
    bad.active[2] = false;
    bad.pos_arc[0] = 4;  // detach node 2 but leave its arcs set
    CHECK_THROWS_AS(bad.validate(2), std::runtime_error);

    bad = good;
    bad.active[2] = false;
    bad.pos_arc[0] = 4;
    bad.neg_arc[2] = -1;
    bad.pos_arc[2] = -1;
    bad.planes[2] = {};
    CHECK_NOTHROW(bad.validate(2));  // cleanly deactivated
  }

  TEST_CASE("predict validates input dimension") {
    const DecisionDiagram dd = xor_diagram();
    CHECK_THROWS_WITH_AS(predict(dd, std::vector<double>{0.1}),
                         doctest::Contains("invalid model"), std::runtime_error);
  }

  TEST_CASE("json round trip is exact") {
    const DecisionDiagram dd = xor_diagram();
    const std::string text = diagram_to_json_text(dd);
    const DecisionDiagram back = diagram_from_json_text(text);
    CHECK(diagram_to_json_text(back) == text);
    CHECK(evaluate(back, toy::xor_corners()) == 1.0);
    CHECK(back.epsilon == dd.epsilon);

    testsupport::TempDir dir;
    const std::string path = (dir.path() / "model.json").string();
    save_diagram(dd, path);
    CHECK(diagram_to_json_text(load_diagram(path)) == text);
  }

  TEST_CASE("dot export shows structure") {
    const std::string dot = to_dot(xor_diagram());
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("x0 >= 0.5") != std::string::npos);
    CHECK(dot.find("style=dashed") != std::string::npos);  // negative arcs
    CHECK(dot.find("samples:") == std::string::npos);

    const Dataset ds = toy::xor_corners();
    const std::string annotated = to_dot(xor_diagram(), &ds);
    CHECK(annotated.find("samples: 4") != std::string::npos);  // root count
    CHECK(annotated.find("class c0") != std::string::npos);
  }
}
