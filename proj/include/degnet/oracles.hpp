// Brute-force reference solvers. Ground truth at desk scale: full subgraph or
// labeling enumeration with exact feasibility checks, hard size caps, and
// lexicographic witness tie-breaking for reproducibility.
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "degnet/graph.hpp"
#include "degnet/treelabel.hpp"

namespace degnet {

struct OracleResult {
    std::optional<Rat> value;          // nullopt = infeasible
    std::vector<int> witness_edges;    // for subgraph problems
    std::vector<int> witness_labeling; // for tree labeling
    size_t enumerated = 0;
};

// Minimum-cost subgraph meeting the connection requirements with
// sum_v deg^p <= A^p (exact p-th-power comparison).
inline OracleResult brute_snd(const Graph& g, const RequirementMatrix& r, int p, const Rat& Ap,
                              size_t max_edges = 18) {
    if (g.m() > max_edges) throw std::invalid_argument("brute_snd: edge count exceeds the size cap");
    OracleResult out;
    const std::uint32_t full = 1u << g.m();
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        ++out.enumerated;
        std::vector<int> edges;
        for (size_t e = 0; e < g.m(); ++e)
            if (mask & (1u << e)) edges.push_back(static_cast<int>(e));
        auto deg = degree_vector(g, edges);
        if (lp_power_sum(deg, p) > Ap) continue;
        if (!verify_requirements(g, edges, r)) continue;
        Rat cost = g.total_cost(edges);
        if (!out.value || cost < *out.value) {
            out.value = cost;
            out.witness_edges = edges;
        }
    }
    return out;
}

// Feasibility of a tree-labeling instance; reports the lexicographically
// least valid labeling when one exists (value 0 by convention).
inline OracleResult brute_labeling(const LabelTreeInstance& inst, size_t cap = 1000000) {
    size_t space = 1;
    for (const auto& ls : inst.labels_of) {
        space *= ls.size();
        if (space > cap) throw std::invalid_argument("brute_labeling: labeling space exceeds the size cap");
    }
    OracleResult out;
    std::vector<int> idx(inst.n(), 0);
    std::vector<int> labeling(inst.n());
    for (;;) {
        ++out.enumerated;
        for (int u = 0; u < inst.n(); ++u) labeling[u] = inst.labels_of[u][idx[u]];
        bool ok = inst.consistent(labeling);
        for (int t = 0; ok && t < inst.num_groups(); ++t)
            if (!inst.covers(t, labeling)) ok = false;
        for (int i = 0; ok && i < inst.num_cost_constraints(); ++i)
            if (inst.cost_of_labeling(i, labeling) > 1) ok = false;
        if (ok && (!out.value || labeling < out.witness_labeling)) {
            out.value = Rat(0);
            out.witness_labeling = labeling;
        }
        int u = inst.n() - 1;
        while (u >= 0 && ++idx[u] == static_cast<int>(inst.labels_of[u].size())) idx[u--] = 0;
        if (u < 0) break;
    }
    return out;
}

// Minimum-cost subgraph connecting the root to every group under hard degree
// bounds; the C* ground truth for end-to-end reduction tests.
inline OracleResult brute_gst(const Graph& g, int root, const std::vector<std::vector<int>>& groups,
                              const std::vector<int>& db, size_t max_edges = 18) {
    if (g.m() > max_edges) throw std::invalid_argument("brute_gst: edge count exceeds the size cap");
    OracleResult out;
    const std::uint32_t full = 1u << g.m();
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        ++out.enumerated;
        std::vector<int> edges;
        for (size_t e = 0; e < g.m(); ++e)
            if (mask & (1u << e)) edges.push_back(static_cast<int>(e));
        auto deg = degree_vector(g, edges);
        bool ok = true;
        for (int v = 0; ok && v < g.n; ++v)
            if (deg[v] > db[v]) ok = false;
        if (!ok) continue;
        // connectivity from the root
        std::vector<int> comp(g.n);
        std::iota(comp.begin(), comp.end(), 0);
        std::function<int(int)> find = [&](int a) { return comp[a] == a ? a : comp[a] = find(comp[a]); };
        for (int e : edges) comp[find(g.edges[e].u)] = find(g.edges[e].v);
        for (const auto& group : groups) {
            bool hit = false;
            for (int s : group)
                if (find(s) == find(root)) hit = true;
            if (!hit) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        Rat cost = g.total_cost(edges);
        if (!out.value || cost < *out.value) {
            out.value = cost;
            out.witness_edges = edges;
        }
    }
    return out;
}

}  // namespace degnet
