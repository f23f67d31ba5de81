#include <catch2/catch_amalgamated.hpp>

#include "degnet/io.hpp"

using namespace degnet;

TEST_CASE("canonical instance parses all fields") {
    Json j = Json::parse(R"({
      "vertices": ["r", "a", "b"],
      "edges": [
        {"id": "e1", "u": "r", "v": "a", "cost": "3/2"},
        {"id": "e2", "u": "a", "v": "b", "cost": 2},
        {"u": "r", "v": "b", "cost": 0.25}
      ],
      "requirements": [{"u": "r", "v": "b", "r": 2}],
      "degree_bounds": {"r": 2, "a": 1, "b": 2},
      "groups": [["a", "b"]],
      "root": "r",
      "p": 2,
      "A": 3
    })");
    auto inst = parse_instance(j);
    CHECK(inst.g.n == 3);
    CHECK(inst.g.m() == 3);
    CHECK(inst.g.edges[0].cost == Rat(3, 2));
    CHECK(inst.g.edges[1].cost == 2);
    CHECK(inst.g.edges[2].cost == Rat(1, 4));
    CHECK(inst.r.get(0, 2) == 2);
    CHECK(inst.r.get(2, 0) == 2);
    CHECK(inst.db == std::vector<int>{2, 1, 2});
    CHECK(inst.groups == std::vector<std::vector<int>>{{1, 2}});
    CHECK(inst.root == 0);
    CHECK(inst.p == 2);
    REQUIRE(inst.Ap.has_value());
    CHECK(*inst.Ap == 9);  // A^p computed exactly
}

TEST_CASE("Ap overrides A for exact irrational norms") {
    Json j = Json::parse(R"({
      "vertices": [0, 1],
      "edges": [{"u": 0, "v": 1}],
      "p": 2,
      "A": 3.4641016151,
      "Ap": 12
    })");
    auto inst = parse_instance(j);
    REQUIRE(inst.Ap.has_value());
    CHECK(*inst.Ap == 12);
}

TEST_CASE("parse errors carry the field path") {
    CHECK_THROWS_WITH(parse_instance(Json::parse(R"({"edges": []})")),
                      Catch::Matchers::ContainsSubstring("vertices"));
    CHECK_THROWS_WITH(parse_instance(Json::parse(R"({"vertices": ["a"], "edges": [{"u": "a", "v": "zz"}]})")),
                      Catch::Matchers::ContainsSubstring("edges[0].v"));
    CHECK_THROWS_WITH(
        parse_instance(Json::parse(R"({"vertices": ["a","b"], "edges": [], "degree_bounds": {"zz": 1}})")),
        Catch::Matchers::ContainsSubstring("degree_bounds.zz"));
}

TEST_CASE("tree-labeling instance parses and validates") {
    Json j = Json::parse(R"({
      "nodes": [
        {"id": "r", "parent": null, "labels": ["l1", "l2"]},
        {"id": "a", "parent": "r", "labels": ["l3"]},
        {"id": "b", "parent": "r", "labels": ["l4", "l5"]}
      ],
      "triples": [
        {"node": "r", "triple": ["l1", "l3", "l4"]},
        {"node": "r", "triple": ["l2", "l3", "l5"]}
      ],
      "groups": [["l4"]],
      "costs": [{"l1": "1/2", "l5": 1}]
    })");
    auto inst = parse_tl_instance(j);
    CHECK(inst.n() == 3);
    CHECK(inst.num_labels() == 5);
    CHECK(inst.gamma[0].size() == 2);
    CHECK(inst.groups.size() == 1);
    CHECK(inst.costs[0][0] == Rat(1, 2));
    CHECK(inst.costs[0][4] == 1);
    CHECK(inst.depth() == 1);
    CHECK(inst.delta() == 2);
}

TEST_CASE("tree-labeling parser rejects duplicate labels across nodes") {
    Json j = Json::parse(R"({
      "nodes": [
        {"id": "r", "parent": null, "labels": ["x"]},
        {"id": "a", "parent": "r", "labels": ["x"]}
      ]
    })");
    CHECK_THROWS_AS(parse_tl_instance(j), ParseError);
}

TEST_CASE("tree decomposition parses with explicit and inferred roots") {
    Json inst_j = Json::parse(R"({
      "vertices": ["r", "a", "b"],
      "edges": [{"u": "r", "v": "a"}, {"u": "a", "v": "b"}]
    })");
    auto inst = parse_instance(inst_j);
    Json j = Json::parse(R"({
      "bags": [
        {"id": "b0", "vertices": ["r", "a"]},
        {"id": "b1", "vertices": ["a", "b"], "parent": "b0"}
      ],
      "root_bag": "b0"
    })");
    auto td = parse_td(j, inst);
    CHECK(td.num_bags() == 2);
    CHECK(td.root == 0);
    CHECK(td.bags[1].parent == 0);
    td.validate(inst.g);

    Json j2 = j;
    j2.erase("root_bag");
    auto td2 = parse_td(j2, inst);
    CHECK(td2.root == 0);
}

TEST_CASE("round-trip through a file") {
    Json j;
    j["vertices"] = {"x", "y"};
    j["edges"] = Json::array({Json{{"u", "x"}, {"v", "y"}, {"cost", "7/3"}}});
    std::string path = "/tmp/degnet_io_test.json";
    write_json_file(path, j);
    auto loaded = load_json_file(path);
    auto inst = parse_instance(loaded);
    CHECK(inst.g.edges[0].cost == Rat(7, 3));
}
