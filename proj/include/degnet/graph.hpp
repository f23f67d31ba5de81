// Undirected multigraph with rational edge costs, exact max-flow / min-cut,
// connection-requirement verification and lp-norm degree accounting.
#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "degnet/rational.hpp"

namespace degnet {

struct Edge {
    int u = -1;
    int v = -1;
    Rat cost = 0;
    std::string name;  // stable external id
};

// Parallel edges are kept distinct; degrees count edge multiplicity.
// Self-loops are rejected.
struct Graph {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<std::string> vertex_names;

    int add_vertex(const std::string& name = {}) {
        vertex_names.push_back(name.empty() ? std::to_string(n) : name);
        return n++;
    }

    int add_edge(int u, int v, const Rat& cost, const std::string& name = {}) {
        if (u < 0 || u >= n || v < 0 || v >= n) throw std::out_of_range("add_edge: unknown vertex id");
        if (u == v) throw std::invalid_argument("add_edge: self-loops not allowed");
        if (cost < 0) throw std::invalid_argument("add_edge: negative cost");
        Edge e;
        e.u = u;
        e.v = v;
        e.cost = cost;
        e.name = name.empty() ? ("e" + std::to_string(edges.size())) : name;
        edges.push_back(e);
        return static_cast<int>(edges.size()) - 1;
    }

    size_t m() const { return edges.size(); }

    std::vector<int> incident(int v) const {
        std::vector<int> out;
        for (size_t e = 0; e < edges.size(); ++e)
            if (edges[e].u == v || edges[e].v == v) out.push_back(static_cast<int>(e));
        return out;
    }

    Rat total_cost(const std::vector<int>& edge_ids) const {
        Rat s(0);
        for (int e : edge_ids) s += edges[e].cost;
        return s;
    }
};

// r is keyed on unordered pairs; r_{u,u} is undefined.
struct RequirementMatrix {
    std::map<std::pair<int, int>, int> r;

    static std::pair<int, int> key(int u, int v) { return u < v ? std::make_pair(u, v) : std::make_pair(v, u); }

    void set(int u, int v, int req) {
        if (u == v) throw std::invalid_argument("requirement on a single vertex");
        if (req < 0) throw std::invalid_argument("negative requirement");
        if (req == 0)
            r.erase(key(u, v));
        else
            r[key(u, v)] = req;
    }

    int get(int u, int v) const {
        auto it = r.find(key(u, v));
        return it == r.end() ? 0 : it->second;
    }

    int max_requirement() const {
        int m = 0;
        for (const auto& [k, v] : r) m = std::max(m, v);
        return m;
    }
};

using DegreeVector = std::vector<Rat>;

inline DegreeVector degree_vector(const Graph& g, const std::vector<int>& edge_ids) {
    DegreeVector d(g.n, Rat(0));
    for (int e : edge_ids) {
        d[g.edges[e].u] += 1;
        d[g.edges[e].v] += 1;
    }
    return d;
}

inline DegreeVector fractional_degrees(const Graph& g, const std::vector<Rat>& x) {
    DegreeVector d(g.n, Rat(0));
    for (size_t e = 0; e < g.edges.size(); ++e) {
        d[g.edges[e].u] += x[e];
        d[g.edges[e].v] += x[e];
    }
    return d;
}

struct MaxFlowResult {
    Rat value;
    std::set<int> min_cut;  // the side containing s
};

// Exact Edmonds-Karp on the undirected graph: each undirected edge becomes a
// pair of directed arcs sharing capacity.
inline MaxFlowResult max_flow(const Graph& g, const std::vector<Rat>& capacities, int s, int t) {
    if (s < 0 || s >= g.n || t < 0 || t >= g.n) throw std::out_of_range("max_flow: unknown vertex id");
    if (s == t) throw std::invalid_argument("max_flow: s == t");
    if (capacities.size() != g.edges.size()) throw std::invalid_argument("max_flow: capacity size mismatch");
    for (const auto& c : capacities)
        if (c < 0) throw std::invalid_argument("max_flow: negative capacity");

    struct Arc {
        int to;
        Rat cap;
        int rev;
    };
    std::vector<std::vector<Arc>> adj(g.n);
    auto add_arc = [&](int u, int v, const Rat& c) {
        adj[u].push_back({v, c, static_cast<int>(adj[v].size())});
        adj[v].push_back({u, c, static_cast<int>(adj[u].size()) - 1});
    };
    for (size_t e = 0; e < g.edges.size(); ++e) add_arc(g.edges[e].u, g.edges[e].v, capacities[e]);

    Rat flow(0);
    for (;;) {
        std::vector<int> prev_v(g.n, -1), prev_a(g.n, -1);
        std::deque<int> q{s};
        prev_v[s] = s;
        while (!q.empty() && prev_v[t] == -1) {
            int u = q.front();
            q.pop_front();
            for (size_t i = 0; i < adj[u].size(); ++i) {
                const Arc& a = adj[u][i];
                if (a.cap > 0 && prev_v[a.to] == -1) {
                    prev_v[a.to] = u;
                    prev_a[a.to] = static_cast<int>(i);
                    q.push_back(a.to);
                }
            }
        }
        if (prev_v[t] == -1) break;
        Rat aug = -1;
        for (int v = t; v != s; v = prev_v[v]) {
            const Arc& a = adj[prev_v[v]][prev_a[v]];
            if (aug < 0 || a.cap < aug) aug = a.cap;
        }
        for (int v = t; v != s; v = prev_v[v]) {
            Arc& a = adj[prev_v[v]][prev_a[v]];
            a.cap -= aug;
            adj[v][a.rev].cap += aug;
        }
        flow += aug;
    }

    std::set<int> cut;
    std::deque<int> q{s};
    cut.insert(s);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (const Arc& a : adj[u])
            if (a.cap > 0 && !cut.count(a.to)) {
                cut.insert(a.to);
                q.push_back(a.to);
            }
    }
    return {flow, cut};
}

// Unit-capacity max-flow between u and v restricted to the chosen edge set.
inline Rat edge_connectivity(const Graph& g, const std::vector<int>& h_edges, int u, int v) {
    std::vector<Rat> caps(g.edges.size(), Rat(0));
    for (int e : h_edges) caps[e] = 1;
    return max_flow(g, caps, u, v).value;
}

// True iff (V, h_edges) has at least r_{u,v} edge-disjoint u-v paths for every
// requirement pair.
inline bool verify_requirements(const Graph& g, const std::vector<int>& h_edges, const RequirementMatrix& r) {
    // cheap union-find pass settles all r == 1 pairs
    std::vector<int> comp(g.n);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int a) { return comp[a] == a ? a : comp[a] = find(comp[a]); };
    for (int e : h_edges) comp[find(g.edges[e].u)] = find(g.edges[e].v);
    for (const auto& [pair, req] : r.r) {
        auto [u, v] = pair;
        if (find(u) != find(v)) return false;
        if (req >= 2 && edge_connectivity(g, h_edges, u, v) < req) return false;
    }
    return true;
}

// Exact p-th power sum; the norm itself is a floating report value.
inline Rat lp_power_sum(const DegreeVector& d, int p) {
    if (p < 1) throw std::invalid_argument("lp_power_sum: p must be >= 1");
    Rat s(0);
    for (const auto& dv : d) s += rat_pow(dv, static_cast<unsigned>(p));
    return s;
}

inline double lp_norm(const DegreeVector& d, int p) {
    return std::pow(to_double(lp_power_sum(d, p)), 1.0 / static_cast<double>(p));
}

}  // namespace degnet
