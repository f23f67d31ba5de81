#include <catch2/catch_amalgamated.hpp>

#include "degnet/graph.hpp"
#include "degnet/rng.hpp"

using namespace degnet;

namespace {

Graph path_graph(int n) {
    Graph g;
    for (int i = 0; i < n; ++i) g.add_vertex();
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, 1);
    return g;
}

Graph k4() {
    Graph g;
    for (int i = 0; i < 4; ++i) g.add_vertex();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) g.add_edge(i, j, 1);
    return g;
}

Graph cycle4() {
    Graph g;
    for (int i = 0; i < 4; ++i) g.add_vertex();
    for (int i = 0; i < 4; ++i) g.add_edge(i, (i + 1) % 4, 1);
    return g;
}

// Brute-force oracle: maximum number of edge-disjoint s-t paths, found by
// searching over paths greedily with backtracking.
int max_disjoint_paths_oracle(const Graph& g, std::vector<bool> used, int s, int t) {
    // find any s-t path over unused edges (DFS), try removing it
    std::vector<int> parent_edge(g.n, -1), parent(g.n, -1);
    std::vector<bool> seen(g.n, false);
    std::vector<int> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (size_t e = 0; e < g.edges.size(); ++e) {
            if (used[e]) continue;
            int w = -1;
            if (g.edges[e].u == u) w = g.edges[e].v;
            if (g.edges[e].v == u) w = g.edges[e].u;
            if (w < 0 || seen[w]) continue;
            seen[w] = true;
            parent[w] = u;
            parent_edge[w] = static_cast<int>(e);
            stack.push_back(w);
        }
    }
    if (!seen[t]) return 0;
    int best = 0;
    // enumerate all simple s-t paths and recurse; graphs here are tiny
    std::function<void(int, std::vector<bool>&, std::vector<bool>&)> walk =
        [&](int u, std::vector<bool>& on_path, std::vector<bool>& used_now) {
            if (u == t) {
                best = std::max(best, 1 + max_disjoint_paths_oracle(g, used_now, s, t));
                return;
            }
            for (size_t e = 0; e < g.edges.size(); ++e) {
                if (used_now[e]) continue;
                int w = -1;
                if (g.edges[e].u == u) w = g.edges[e].v;
                if (g.edges[e].v == u) w = g.edges[e].u;
                if (w < 0 || on_path[w]) continue;
                used_now[e] = true;
                on_path[w] = true;
                walk(w, on_path, used_now);
                on_path[w] = false;
                used_now[e] = false;
            }
        };
    std::vector<bool> on_path(g.n, false);
    on_path[s] = true;
    walk(s, on_path, used);
    return best;
}

}  // namespace

TEST_CASE("max_flow on a single edge") {
    Graph g;
    g.add_vertex();
    g.add_vertex();
    g.add_edge(0, 1, 1);
    auto res = max_flow(g, {Rat(1)}, 0, 1);
    CHECK(res.value == 1);
    CHECK(res.min_cut == std::set<int>{0});
}

TEST_CASE("max_flow between disconnected vertices is zero") {
    Graph g;
    g.add_vertex();
    g.add_vertex();
    g.add_vertex();
    g.add_edge(0, 1, 1);
    auto res = max_flow(g, {Rat(1)}, 0, 2);
    CHECK(res.value == 0);
}

TEST_CASE("max_flow across a 4-cycle equals 2") {
    Graph g = cycle4();
    std::vector<Rat> caps(4, Rat(1));
    auto res = max_flow(g, caps, 0, 2);
    CHECK(res.value == 2);
    // oracle: enumerate all s-t cuts
    Rat best(-1);
    for (int mask = 1; mask < 15; ++mask) {
        if (!(mask & 1) || (mask & 4)) continue;  // need 0 in S, 2 not in S
        Rat cut(0);
        for (const auto& e : g.edges) {
            bool inu = mask & (1 << e.u), inv = mask & (1 << e.v);
            if (inu != inv) cut += 1;
        }
        if (best < 0 || cut < best) best = cut;
    }
    CHECK(res.value == best);
}

TEST_CASE("max_flow rejects bad arguments") {
    Graph g = path_graph(3);
    std::vector<Rat> caps(2, Rat(1));
    CHECK_THROWS(max_flow(g, caps, 0, 5));
    CHECK_THROWS(max_flow(g, caps, 1, 1));
}

TEST_CASE("rational capacities stay exact") {
    Graph g;
    for (int i = 0; i < 3; ++i) g.add_vertex();
    g.add_edge(0, 1, 1);
    g.add_edge(1, 2, 1);
    g.add_edge(0, 2, 1);
    auto res = max_flow(g, {Rat(1, 3), Rat(1, 2), Rat(1, 7)}, 0, 2);
    CHECK(res.value == Rat(1, 3) + Rat(1, 7));  // bottleneck path 0-1-2 carries 1/3
}

TEST_CASE("unit-capacity max_flow equals edge-disjoint path count (oracle)") {
    RandomStream rng(20260809);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 3 + static_cast<int>(rng.next_u64() % 3);
        Graph g;
        for (int i = 0; i < n; ++i) g.add_vertex();
        int m = 3 + static_cast<int>(rng.next_u64() % 6);
        for (int e = 0; e < m && g.m() < 8; ++e) {
            int u = static_cast<int>(rng.next_u64() % n);
            int v = static_cast<int>(rng.next_u64() % n);
            if (u != v) g.add_edge(u, v, 1);
        }
        if (g.m() == 0) continue;
        std::vector<Rat> caps(g.m(), Rat(1));
        int flow = static_cast<int>(to_double(max_flow(g, caps, 0, n - 1).value) + 0.5);
        std::vector<bool> used(g.m(), false);
        int oracle = max_disjoint_paths_oracle(g, used, 0, n - 1);
        INFO("trial " << trial);
        CHECK(flow == oracle);
    }
}

TEST_CASE("verify_requirements on K4 spanning tree") {
    Graph g = k4();
    RequirementMatrix r;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) r.set(i, j, 1);
    // edges 0:(0,1) 1:(0,2) 2:(0,3): a star spanning tree
    CHECK(verify_requirements(g, {0, 1, 2}, r));
}

TEST_CASE("verify_requirements fails with an isolated vertex") {
    Graph g = k4();
    RequirementMatrix r;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) r.set(i, j, 1);
    // remove vertex 3's edges: keep only the triangle on {0,1,2}
    std::vector<int> h;
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (g.edges[e].u != 3 && g.edges[e].v != 3) h.push_back(static_cast<int>(e));
    CHECK_FALSE(verify_requirements(g, h, r));
}

TEST_CASE("verify_requirements with requirement 2 on a 4-cycle") {
    Graph g = cycle4();
    RequirementMatrix r;
    r.set(0, 2, 2);
    std::vector<int> all{0, 1, 2, 3};
    CHECK(verify_requirements(g, all, r));
    std::vector<bool> used(4, false);
    CHECK(max_disjoint_paths_oracle(g, used, 0, 2) == 2);
    // dropping one edge leaves a single path
    CHECK_FALSE(verify_requirements(g, {0, 1, 2}, r));
}

TEST_CASE("lp_norm basics") {
    CHECK(lp_power_sum({Rat(2), Rat(2), Rat(2)}, 1) == 6);
    CHECK(lp_norm({Rat(2), Rat(2), Rat(2)}, 1) == Catch::Approx(6.0));
    CHECK(lp_norm({Rat(3), Rat(4)}, 2) == Catch::Approx(5.0));
    CHECK(lp_norm({Rat(1), Rat(1), Rat(1), Rat(1)}, 3) == Catch::Approx(std::pow(4.0, 1.0 / 3.0)));
    CHECK_THROWS(lp_power_sum({Rat(1)}, 0));
}

TEST_CASE("degree sums equal twice the edge count") {
    RandomStream rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g;
        int n = 4 + static_cast<int>(rng.next_u64() % 4);
        for (int i = 0; i < n; ++i) g.add_vertex();
        std::vector<int> chosen;
        for (int e = 0; e < 10; ++e) {
            int u = static_cast<int>(rng.next_u64() % n), v = static_cast<int>(rng.next_u64() % n);
            if (u != v) chosen.push_back(g.add_edge(u, v, 1));
        }
        auto d = degree_vector(g, chosen);
        CHECK(lp_power_sum(d, 1) == Rat(2 * static_cast<int>(chosen.size())));
    }
}

TEST_CASE("graph rejects self-loops and unknown endpoints") {
    Graph g = path_graph(2);
    CHECK_THROWS(g.add_edge(0, 0, 1));
    CHECK_THROWS(g.add_edge(0, 9, 1));
}
