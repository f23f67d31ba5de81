#include <catch2/catch_amalgamated.hpp>

#include "degnet/oracles.hpp"
#include "degnet/snd.hpp"

using namespace degnet;

namespace {

Graph triangle_unit() {
    Graph g;
    for (int i = 0; i < 3; ++i) g.add_vertex();
    g.add_edge(0, 1, 1);
    g.add_edge(0, 2, 1);
    g.add_edge(1, 2, 1);
    return g;
}

RequirementMatrix all_pairs_one(int n) {
    RequirementMatrix r;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) r.set(i, j, 1);
    return r;
}

}  // namespace

TEST_CASE("brute_snd on the unit triangle") {
    Graph g = triangle_unit();
    auto r = all_pairs_one(3);
    auto res = brute_snd(g, r, 1, Rat(4));
    REQUIRE(res.value.has_value());
    CHECK(*res.value == 2);
    CHECK(res.enumerated == 8);
    CHECK(res.witness_edges.size() == 2);
    CHECK(verify_requirements(g, res.witness_edges, r));
    CHECK(lp_power_sum(degree_vector(g, res.witness_edges), 1) <= 4);
}

TEST_CASE("brute_snd is infeasible under an impossible budget") {
    Graph g = triangle_unit();
    auto r = all_pairs_one(3);
    CHECK_FALSE(brute_snd(g, r, 1, Rat(3)).value.has_value());
}

TEST_CASE("brute_snd respects the size cap") {
    Graph g;
    g.add_vertex();
    g.add_vertex();
    for (int i = 0; i < 5; ++i) g.add_edge(0, 1, 1);
    CHECK_THROWS(brute_snd(g, all_pairs_one(2), 1, Rat(100), 4));
}

TEST_CASE("brute_gst picks the cheapest qualifying edge") {
    Graph g;
    g.add_vertex("r");
    g.add_vertex("a");
    g.add_vertex("b");
    g.add_edge(0, 1, 5);
    g.add_edge(0, 2, 2);
    std::vector<std::vector<int>> groups{{1, 2}};
    auto res = brute_gst(g, 0, groups, {2, 2, 2});
    REQUIRE(res.value.has_value());
    CHECK(*res.value == 2);
    CHECK(res.witness_edges == std::vector<int>{1});
}

TEST_CASE("brute_gst with a zero degree bound at the root is infeasible") {
    Graph g;
    g.add_vertex("r");
    g.add_vertex("a");
    g.add_edge(0, 1, 1);
    std::vector<std::vector<int>> groups{{1}};
    CHECK_FALSE(brute_gst(g, 0, groups, {0, 2}).value.has_value());
}

TEST_CASE("brute_labeling finds the unique valid labeling") {
    LabelTreeInstance inst;
    int r = inst.add_node(-1);
    int a = inst.add_node(r);
    int b = inst.add_node(r);
    int lr = inst.add_label(r);
    int la1 = inst.add_label(a), la2 = inst.add_label(a);
    int lb1 = inst.add_label(b);
    inst.gamma[r] = {{lr, la1, lb1}, {lr, la2, lb1}};
    inst.groups.push_back({la1});
    auto res = brute_labeling(inst);
    REQUIRE(res.value.has_value());
    CHECK(res.witness_labeling == std::vector<int>{lr, la1, lb1});
    CHECK(res.enumerated == 2);
}

TEST_CASE("brute_labeling reports infeasibility when costs always overflow") {
    LabelTreeInstance inst;
    int r = inst.add_node(-1);
    int a = inst.add_node(r);
    int lr = inst.add_label(r);
    int la = inst.add_label(a);
    inst.gamma[r] = {{lr, la, -1}};
    inst.costs.assign(1, std::vector<Rat>(2, Rat(3, 4)));  // every labeling costs 3/2 > 1
    CHECK_FALSE(brute_labeling(inst).value.has_value());
}

TEST_CASE("oracle witnesses satisfy the module-level verifiers") {
    RandomStream rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + static_cast<int>(rng.next_u64() % 3);
        Graph g;
        for (int i = 0; i < n; ++i) g.add_vertex();
        for (int i = 1; i < n; ++i) g.add_edge(i, static_cast<int>(rng.next_u64() % i), 1 + Rat(static_cast<long>(rng.next_u64() % 3)));
        int extra = static_cast<int>(rng.next_u64() % 3);
        for (int e = 0; e < extra; ++e) {
            int u = static_cast<int>(rng.next_u64() % n), v = static_cast<int>(rng.next_u64() % n);
            if (u != v) g.add_edge(u, v, 1);
        }
        auto r = all_pairs_one(n);
        std::vector<int> all(g.m());
        std::iota(all.begin(), all.end(), 0);
        int p = 1 + static_cast<int>(rng.next_u64() % 3);
        Rat Ap = lp_power_sum(degree_vector(g, all), p);
        auto res = brute_snd(g, r, p, Ap);
        REQUIRE(res.value.has_value());
        CHECK(verify_requirements(g, res.witness_edges, r));
        CHECK(lp_power_sum(degree_vector(g, res.witness_edges), p) <= Ap);
    }
}
