// Degree-Bounded Group Steiner Tree on a bounded-treewidth graph, reduced to
// tree labeling over the decomposition tree. A bag's label is a triple
// (F_b, Pi_down, Pi_up): the solution edges taken from E_b and the bag's
// connectivity as seen from below and from above. Consistency triples tie the
// three partitions together along the tree; covering and cost constraints
// encode group connectivity, the edge budget C*, and the degree bounds.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "degnet/graph.hpp"
#include "degnet/partition.hpp"
#include "degnet/treelabel.hpp"

namespace degnet {

struct TreeDecomposition {
    struct Bag {
        std::string name;
        std::vector<int> vertices;
        int parent = -1;
        std::vector<int> children;
    };
    std::vector<Bag> bags;
    int root = 0;

    int num_bags() const { return static_cast<int>(bags.size()); }

    int depth() const {
        std::function<int(int)> rec = [&](int b) {
            int d = 0;
            for (int c : bags[b].children) d = std::max(d, 1 + rec(c));
            return d;
        };
        return rec(root);
    }

    int width() const {
        size_t w = 0;
        for (const auto& b : bags) w = std::max(w, b.vertices.size());
        return static_cast<int>(w) - 1;
    }

    int bag_depth(int b) const {
        int d = 0;
        for (int cur = b; bags[cur].parent >= 0; cur = bags[cur].parent) ++d;
        return d;
    }

    void add_bag_vertex(int b, int v) {
        auto& vs = bags[b].vertices;
        if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    }

    // Edge coverage and connected per-vertex traces; throws with a reason.
    void validate(const Graph& g) const {
        for (int b = 0; b < num_bags(); ++b)
            for (int c : bags[b].children)
                if (bags[c].parent != b) throw std::invalid_argument("decomposition: broken parent link");
        for (const auto& e : g.edges) {
            bool covered = false;
            for (const auto& bag : bags) {
                bool hasu = std::find(bag.vertices.begin(), bag.vertices.end(), e.u) != bag.vertices.end();
                bool hasv = std::find(bag.vertices.begin(), bag.vertices.end(), e.v) != bag.vertices.end();
                if (hasu && hasv) covered = true;
            }
            if (!covered) throw std::invalid_argument("decomposition: edge " + e.name + " not covered by any bag");
        }
        for (int v = 0; v < g.n; ++v) {
            std::vector<int> holding;
            for (int b = 0; b < num_bags(); ++b)
                if (std::find(bags[b].vertices.begin(), bags[b].vertices.end(), v) != bags[b].vertices.end())
                    holding.push_back(b);
            if (holding.empty()) continue;
            std::set<int> hold(holding.begin(), holding.end());
            std::set<int> seen{holding[0]};
            std::vector<int> stack{holding[0]};
            while (!stack.empty()) {
                int b = stack.back();
                stack.pop_back();
                std::vector<int> nbrs = bags[b].children;
                if (bags[b].parent >= 0) nbrs.push_back(bags[b].parent);
                for (int nb : nbrs)
                    if (hold.count(nb) && !seen.count(nb)) {
                        seen.insert(nb);
                        stack.push_back(nb);
                    }
            }
            if (seen.size() != hold.size())
                throw std::invalid_argument("decomposition: bags containing vertex " + g.vertex_names[v] +
                                            " are not connected");
        }
    }
};

// Nodes with more than two children are split by chaining duplicate bags
// (the duplicate may still be overfull, so sweep until stable). One-child
// nodes are left alone; the labeling machinery supports them.
inline TreeDecomposition binarize(TreeDecomposition td) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int b = 0; b < td.num_bags(); ++b) {
            if (td.bags[b].children.size() <= 2) continue;
            TreeDecomposition::Bag dup;
            dup.name = td.bags[b].name + "'";
            dup.vertices = td.bags[b].vertices;
            dup.parent = b;
            std::vector<int> moved(td.bags[b].children.begin() + 1, td.bags[b].children.end());
            td.bags[b].children.resize(1);
            td.bags.push_back(std::move(dup));
            int nb = td.num_bags() - 1;
            td.bags[b].children.push_back(nb);
            for (int c : moved) {
                td.bags[c].parent = nb;
                td.bags[nb].children.push_back(c);
            }
            changed = true;
        }
    }
    return td;
}

// E_b: each edge belongs to the highest bag containing both endpoints; the
// connected-trace property makes that bag unique.
inline std::vector<std::vector<int>> assign_edges_to_bags(const Graph& g, const TreeDecomposition& td) {
    std::vector<std::vector<int>> Eb(td.num_bags());
    for (size_t e = 0; e < g.m(); ++e) {
        int best = -1, best_depth = -1;
        bool tie = false;
        for (int b = 0; b < td.num_bags(); ++b) {
            const auto& vs = td.bags[b].vertices;
            if (std::find(vs.begin(), vs.end(), g.edges[e].u) == vs.end()) continue;
            if (std::find(vs.begin(), vs.end(), g.edges[e].v) == vs.end()) continue;
            int d = td.bag_depth(b);
            if (best < 0 || d < best_depth) {
                best = b;
                best_depth = d;
                tie = false;
            } else if (d == best_depth) {
                tie = true;
            }
        }
        if (best < 0) throw std::invalid_argument("assign_edges_to_bags: edge " + g.edges[e].name + " uncovered");
        if (tie) throw std::invalid_argument("assign_edges_to_bags: highest bag not unique (invalid decomposition)");
        Eb[best].push_back(static_cast<int>(e));
    }
    return Eb;
}

// (F_b, Pi_down, Pi_up) plus cached quantities used by Gamma construction
// and the cost constraints.
struct BagLabel {
    std::vector<int> forest;
    Partition cc;       // CC(F_b)
    Partition pi_down;  // ground X_b
    Partition pi_up;    // ground X_b
    Rat cost = 0;       // c(F_b)
    std::map<int, int> deg;  // vertex -> |delta(v) cap F_b|
};

namespace detail {

inline Partition extend_to(const Partition& p, const std::vector<int>& X) {
    return partition_join(p, Partition::discrete(X)).restrict_to(X);
}

inline bool forest_ok(const Graph& g, const std::vector<int>& edges) {
    std::map<int, int> uf;
    std::function<int(int)> find = [&](int v) { return uf[v] == v ? v : uf[v] = find(uf[v]); };
    for (int e : edges) {
        int u = g.edges[e].u, v = g.edges[e].v;
        if (!uf.count(u)) uf[u] = u;
        if (!uf.count(v)) uf[v] = v;
        int fu = find(u), fv = find(v);
        if (fu == fv) return false;
        uf[fu] = fv;
    }
    return true;
}

}  // namespace detail

// All labels of one bag: forests F over X_b from E_b, partition pairs coarser
// than CC(F), the root/leaf special rules, and the cost/degree filters that
// keep every scaled label cost within [0, 1].
inline std::vector<BagLabel> enumerate_labels(const Graph& g, const std::vector<int>& Xb,
                                              const std::vector<int>& Eb, bool is_root, bool is_leaf,
                                              const Rat& cstar, const std::vector<int>& db) {
    std::vector<BagLabel> out;
    auto partitions = enumerate_partitions(Xb);
    const std::uint32_t full = 1u << Eb.size();
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        std::vector<int> forest;
        for (size_t i = 0; i < Eb.size(); ++i)
            if (mask & (1u << i)) forest.push_back(Eb[i]);
        if (!detail::forest_ok(g, forest)) continue;
        Rat cost = g.total_cost(forest);
        if (cost > cstar) continue;
        std::map<int, int> deg;
        for (int e : forest) {
            ++deg[g.edges[e].u];
            ++deg[g.edges[e].v];
        }
        bool deg_ok = true;
        for (const auto& [v, d] : deg)
            if (d > db[v]) deg_ok = false;
        if (!deg_ok) continue;

        Partition cc = connected_components(g, forest);
        Partition cc_ext = detail::extend_to(cc, Xb);
        std::vector<const Partition*> downs, ups;
        for (const auto& p : partitions) {
            if (!partition_refines(cc, p)) continue;
            downs.push_back(&p);
        }
        ups = downs;
        for (const Partition* down : downs) {
            if (is_leaf && *down != cc_ext) continue;
            for (const Partition* up : ups) {
                if (is_root && *up != cc_ext) continue;
                BagLabel lab;
                lab.forest = forest;
                lab.cc = cc;
                lab.pi_down = *down;
                lab.pi_up = *up;
                lab.cost = cost;
                lab.deg = deg;
                out.push_back(std::move(lab));
            }
        }
    }
    return out;
}

namespace detail {

inline std::string forest_key(const std::vector<int>& forest) {
    std::string s;
    for (int e : forest) {
        s += std::to_string(e);
        s += ',';
    }
    return s;
}

inline std::string label_key(const BagLabel& l) {
    return forest_key(l.forest) + "|" + l.pi_down.key() + "|" + l.pi_up.key();
}

}  // namespace detail

// Consistency triples for an internal bag b with children b1 (and b2):
//   Pi_down_b  = (Pi_down_b1 v Pi_down_b2 v CC(F_b))[X_b]
//   Pi_up_b1   = (Pi_up_b v Pi_down_b2 v CC(F_b1))[X_b1]
//   Pi_up_b2   = (Pi_up_b v Pi_down_b1 v CC(F_b2))[X_b2]
// (child-side restrictions; validated against the Claim-13 recomputation).
inline std::vector<std::array<int, 3>> build_gamma(const std::vector<int>& Xb, const std::vector<int>& Xb1,
                                                   const std::vector<int>& Xb2,
                                                   const std::vector<BagLabel>& Lb,
                                                   const std::vector<BagLabel>& Lb1,
                                                   const std::vector<BagLabel>& Lb2) {
    const bool two_children = !Xb2.empty() || !Lb2.empty();

    // group b's labels by forest, then by pi_down; iterate candidate ups
    std::map<std::string, std::vector<int>> by_forest;
    for (size_t i = 0; i < Lb.size(); ++i) by_forest[detail::forest_key(Lb[i].forest)].push_back(static_cast<int>(i));

    std::vector<std::array<int, 3>> gamma;
    for (size_t i1 = 0; i1 < Lb1.size(); ++i1) {
        for (size_t i2 = 0; i2 < (two_children ? Lb2.size() : 1); ++i2) {
            Partition child_join = two_children ? partition_join(Lb1[i1].pi_down, Lb2[i2].pi_down)
                                                : Lb1[i1].pi_down;
            for (const auto& [fkey, idxs] : by_forest) {
                Partition down_b = partition_join(child_join, Lb[idxs[0]].cc).restrict_to(Xb);
                for (int ib : idxs) {
                    if (Lb[ib].pi_down != down_b) continue;
                    // up equations for the children
                    Partition base1 = two_children ? partition_join(Lb[ib].pi_up, Lb2[i2].pi_down)
                                                   : Lb[ib].pi_up;
                    Partition up1 = partition_join(base1, Lb1[i1].cc).restrict_to(Xb1);
                    if (Lb1[i1].pi_up != up1) continue;
                    if (two_children) {
                        Partition base2 = partition_join(Lb[ib].pi_up, Lb1[i1].pi_down);
                        Partition up2 = partition_join(base2, Lb2[i2].cc).restrict_to(Xb2);
                        if (Lb2[i2].pi_up != up2) continue;
                    }
                    gamma.push_back({ib, static_cast<int>(i1), two_children ? static_cast<int>(i2) : -1});
                }
            }
        }
    }
    return gamma;
}

// The assembled tree-labeling instance plus everything needed to interpret
// its labelings back in graph terms.
struct GstReduction {
    LabelTreeInstance inst;
    std::vector<std::vector<BagLabel>> bag_labels;  // aligned with inst.labels_of
    std::vector<std::pair<int, int>> label_loc;     // global label -> (bag, local index)
    std::vector<std::vector<int>> Eb;
    Rat cstar = 0;
    int root_vertex = 0;
    size_t max_labels_per_bag = 0;
};

// Covering rule: a label can satisfy group S_t iff some s in the group sits in
// the same block as the root vertex in Pi_down v Pi_up.
inline bool label_covers(const BagLabel& lab, const std::vector<int>& group, int root_vertex) {
    Partition joined = partition_join(lab.pi_down, lab.pi_up);
    for (int s : group)
        if (joined.same_block(s, root_vertex)) return true;
    return false;
}

inline GstReduction build_instance(const Graph& g, int root_vertex,
                                   const std::vector<std::vector<int>>& groups, const std::vector<int>& db,
                                   const TreeDecomposition& td, const std::vector<std::vector<int>>& Eb,
                                   const Rat& cstar) {
    GstReduction red;
    red.Eb = Eb;
    red.cstar = cstar;
    red.root_vertex = root_vertex;

    // tree skeleton mirrors the decomposition tree
    std::vector<int> order;  // bag -> inst node id (identical indexing via BFS from root)
    order.assign(td.num_bags(), -1);
    std::vector<int> stack{td.root};
    order[td.root] = red.inst.add_node(-1);
    std::vector<int> bfs{td.root};
    for (size_t i = 0; i < bfs.size(); ++i) {
        int b = bfs[i];
        for (int c : td.bags[b].children) {
            order[c] = red.inst.add_node(order[b]);
            bfs.push_back(c);
        }
    }
    red.bag_labels.assign(td.num_bags(), {});
    for (int b = 0; b < td.num_bags(); ++b) {
        bool is_root = b == td.root;
        bool is_leaf = td.bags[b].children.empty();
        red.bag_labels[b] = enumerate_labels(g, td.bags[b].vertices, Eb[b], is_root, is_leaf, cstar, db);
        red.max_labels_per_bag = std::max(red.max_labels_per_bag, red.bag_labels[b].size());
        for (size_t li = 0; li < red.bag_labels[b].size(); ++li) {
            red.inst.add_label(order[b], "b" + std::to_string(b) + ":" + std::to_string(li));
            red.label_loc.push_back({b, static_cast<int>(li)});
        }
    }

    // consistency triples, translated to global label ids
    for (int b = 0; b < td.num_bags(); ++b) {
        const auto& children = td.bags[b].children;
        if (children.empty()) continue;
        int b1 = children[0];
        int b2 = children.size() > 1 ? children[1] : -1;
        auto local = build_gamma(td.bags[b].vertices, td.bags[b1].vertices,
                                 b2 >= 0 ? td.bags[b2].vertices : std::vector<int>{}, red.bag_labels[b],
                                 red.bag_labels[b1],
                                 b2 >= 0 ? red.bag_labels[b2] : std::vector<BagLabel>{});
        int node = order[b];
        for (const auto& tri : local) {
            int gl0 = red.inst.labels_of[node][tri[0]];
            int gl1 = red.inst.labels_of[order[b1]][tri[1]];
            int gl2 = tri[2] >= 0 ? red.inst.labels_of[order[b2]][tri[2]] : -1;
            red.inst.gamma[node].push_back({gl0, gl1, gl2});
        }
    }

    // covering sets
    for (const auto& group : groups) {
        std::vector<int> labels;
        for (int gl = 0; gl < red.inst.num_labels(); ++gl) {
            auto [b, li] = red.label_loc[gl];
            if (label_covers(red.bag_labels[b][li], group, root_vertex)) labels.push_back(gl);
        }
        red.inst.groups.push_back(std::move(labels));
    }

    // cost constraints: one for the edge budget, one per vertex for degrees
    const int m = 1 + g.n;
    red.inst.costs.assign(m, std::vector<Rat>(red.inst.num_labels(), Rat(0)));
    for (int gl = 0; gl < red.inst.num_labels(); ++gl) {
        auto [b, li] = red.label_loc[gl];
        const auto& lab = red.bag_labels[b][li];
        if (cstar > 0) red.inst.costs[0][gl] = lab.cost / cstar;
        for (const auto& [v, d] : lab.deg) red.inst.costs[1 + v][gl] = Rat(d) / db[v];
    }
    return red;
}

// Claim 13: recompute Pi_down(H) and Pi_up(H) from H = (V, union F_b) by
// direct graph connectivity over descendant / non-descendant bag edges and
// compare with the labels.
inline bool verify_claim13(const Graph& g, const TreeDecomposition& td,
                           const std::vector<std::vector<int>>& Eb,
                           const std::vector<const BagLabel*>& chosen) {
    const int nb = td.num_bags();
    std::vector<std::vector<int>> desc_edges(nb), nondesc_edges(nb);
    std::function<std::vector<int>(int)> collect_desc = [&](int b) {
        std::vector<int> edges = chosen[b]->forest;
        for (int c : td.bags[b].children) {
            auto sub = collect_desc(c);
            edges.insert(edges.end(), sub.begin(), sub.end());
        }
        desc_edges[b] = edges;
        return edges;
    };
    collect_desc(td.root);
    std::vector<int> all = desc_edges[td.root];
    for (int b = 0; b < nb; ++b) {
        std::set<int> below(desc_edges[b].begin(), desc_edges[b].end());
        for (int e : all)
            if (!below.count(e)) nondesc_edges[b].push_back(e);
        // edges of b itself belong to both sides
        for (int e : chosen[b]->forest) nondesc_edges[b].push_back(e);
    }
    for (int b = 0; b < nb; ++b) {
        const auto& Xb = td.bags[b].vertices;
        Partition down = detail::extend_to(connected_components(g, desc_edges[b]), Xb);
        Partition up = detail::extend_to(connected_components(g, nondesc_edges[b]), Xb);
        if (down != chosen[b]->pi_down) return false;
        if (up != chosen[b]->pi_up) return false;
    }
    return true;
}

struct GstRunStats {
    std::vector<int> edges;            // H for this repetition
    bool claim13_ok = false;
    bool covering_implies_connected = false;
    bool costs_consistent = false;
    std::vector<char> covered;         // per group, by the labeling's covering rule
};

struct GstResult {
    Rat cstar = 0;
    size_t reps = 0;
    int depth = 0;
    size_t supertree_nodes = 0;
    size_t max_labels_per_bag = 0;
    std::vector<int> union_edges;
    std::vector<char> group_connected;  // in the union H
    Rat union_cost = 0;
    double cost_ratio = 0.0;            // c(H) / C*
    double degree_violation = 0.0;      // max_v d_H(v) / db_v
    std::vector<GstRunStats> runs;
    bool all_exact_checks_ok = true;
};

struct GstOptions {
    std::optional<Rat> cstar;    // bypass the search
    Rat grid_delta = Rat(1, 10);
    std::optional<size_t> reps;  // default ceil(4 D ln n)
    std::uint64_t seed = 1;
};

namespace detail {

inline bool connected_in(const Graph& g, const std::vector<int>& edges, int a, const std::vector<int>& targets) {
    std::vector<int> comp(g.n);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (int e : edges) comp[find(g.edges[e].u)] = find(g.edges[e].v);
    for (int t : targets)
        if (find(t) == find(a)) return true;
    return false;
}

// Candidate C* values: exact subset sums for small edge sets, otherwise a
// geometric grid, always including 0.
inline std::vector<Rat> cstar_candidates(const Graph& g, const Rat& delta) {
    std::vector<Rat> out{Rat(0)};
    if (g.m() <= 12) {
        std::set<Rat> sums{Rat(0)};
        for (const auto& e : g.edges) {
            std::set<Rat> next = sums;
            for (const auto& s : sums) next.insert(s + e.cost);
            sums = std::move(next);
        }
        out.assign(sums.begin(), sums.end());
        return out;
    }
    Rat total(0), min_pos(0);
    for (const auto& e : g.edges) {
        total += e.cost;
        if (e.cost > 0 && (min_pos == 0 || e.cost < min_pos)) min_pos = e.cost;
    }
    if (min_pos == 0) return out;
    for (Rat c = min_pos; c < total * (1 + delta); c *= (1 + delta)) out.push_back(c);
    return out;
}

}  // namespace detail

// Make {r}, S_1, ..., S_k mutually disjoint by duplicating shared vertices
// with zero-cost edges; each duplicate gets its own leaf bag.
inline void ensure_disjoint(Graph& g, int root_vertex, std::vector<std::vector<int>>& groups,
                            std::vector<int>& db, TreeDecomposition& td) {
    std::set<int> used{root_vertex};
    for (auto& group : groups) {
        std::set<int> members;
        for (int& s : group) {
            if (used.count(s) || members.count(s)) {
                int dup = g.add_vertex(g.vertex_names[s] + "'");
                db.push_back(1);
                g.add_edge(s, dup, Rat(0), g.vertex_names[s] + "-dup" + std::to_string(dup));
                // leaf bag holding the zero-cost edge, under some bag containing s
                int host = -1;
                for (int b = 0; b < td.num_bags() && host < 0; ++b)
                    if (std::find(td.bags[b].vertices.begin(), td.bags[b].vertices.end(), s) !=
                        td.bags[b].vertices.end())
                        host = b;
                if (host < 0) throw std::invalid_argument("ensure_disjoint: vertex missing from all bags");
                TreeDecomposition::Bag bag;
                bag.name = "dup" + std::to_string(dup);
                bag.vertices = {s, dup};
                bag.parent = host;
                td.bags.push_back(bag);
                td.bags[host].children.push_back(td.num_bags() - 1);
                s = dup;
            }
            members.insert(s);
        }
        used.insert(members.begin(), members.end());
    }
}

// End-to-end pipeline: prepare the decomposition, pick C* (given or searched),
// run the labeling algorithm M times and union the resulting subgraphs.
inline std::optional<GstResult> solve_gst(Graph g, int root_vertex, std::vector<std::vector<int>> groups,
                                          std::vector<int> db, TreeDecomposition td,
                                          const GstOptions& opts = {}) {
    ensure_disjoint(g, root_vertex, groups, db, td);
    for (int b = 0; b < td.num_bags(); ++b) td.add_bag_vertex(b, root_vertex);
    td = binarize(td);
    td.validate(g);
    auto Eb = assign_edges_to_bags(g, td);
    const int D = std::max(td.depth(), 1);

    std::vector<Rat> candidates =
        opts.cstar ? std::vector<Rat>{*opts.cstar} : detail::cstar_candidates(g, opts.grid_delta);

    std::optional<GstReduction> red;
    std::optional<SuperTree> st;
    std::optional<FractionalSubtree> frac;
    for (const Rat& c : candidates) {
        GstReduction r = build_instance(g, root_vertex, groups, db, td, Eb, c);
        SuperTree s = build_supertree(r.inst);
        auto f = solve_fractional(s, r.inst);
        if (f) {
            red = std::move(r);
            st = std::move(s);
            frac = std::move(f);
            break;
        }
    }
    if (!red) return std::nullopt;  // infeasible for every guess

    GstResult result;
    result.cstar = red->cstar;
    result.depth = D;
    result.supertree_nodes = st->size();
    result.max_labels_per_bag = red->max_labels_per_bag;
    size_t M = opts.reps ? *opts.reps
                         : static_cast<size_t>(std::ceil(4.0 * D * std::log(std::max(g.n, 2))));
    M = std::max<size_t>(M, 1);
    result.reps = M;

    std::set<int> union_edges;
    result.runs.resize(M);
    parallel_for(M, [&](size_t j) {
        RandomStream rng(derive_stream_seed(opts.seed, j));
        auto in_tree = recursive_rounding(*st, *frac, rng);
        auto labeling = to_labeling(*st, red->inst, in_tree);

        GstRunStats stats;
        std::vector<const BagLabel*> chosen(td.num_bags());
        for (int node = 0; node < red->inst.n(); ++node) {
            auto [b, li] = red->label_loc[labeling[node]];
            chosen[b] = &red->bag_labels[b][li];
        }
        for (int b = 0; b < td.num_bags(); ++b)
            stats.edges.insert(stats.edges.end(), chosen[b]->forest.begin(), chosen[b]->forest.end());
        std::sort(stats.edges.begin(), stats.edges.end());

        stats.claim13_ok = verify_claim13(g, td, Eb, chosen);

        stats.covered.resize(groups.size());
        stats.covering_implies_connected = true;
        for (size_t t = 0; t < groups.size(); ++t) {
            bool cov = false;
            for (int b = 0; b < td.num_bags(); ++b)
                if (label_covers(*chosen[b], groups[t], root_vertex)) cov = true;
            stats.covered[t] = cov;
            if (cov && !detail::connected_in(g, stats.edges, root_vertex, groups[t]))
                stats.covering_implies_connected = false;
        }

        // scaled label costs must reproduce c(H)/C* and d_H(v)/db_v exactly
        stats.costs_consistent = true;
        Rat scaled_cost(0);
        for (int b = 0; b < td.num_bags(); ++b)
            if (red->cstar > 0) scaled_cost += chosen[b]->cost / red->cstar;
        Rat hcost = g.total_cost(stats.edges);
        if (red->cstar > 0 && scaled_cost != hcost / red->cstar) stats.costs_consistent = false;
        if (red->cstar == 0 && hcost != 0) stats.costs_consistent = false;
        auto degs = degree_vector(g, stats.edges);
        for (int v = 0; v < g.n; ++v) {
            Rat scaled(0);
            for (int b = 0; b < td.num_bags(); ++b) {
                auto it = chosen[b]->deg.find(v);
                if (it != chosen[b]->deg.end()) scaled += Rat(it->second) / db[v];
            }
            if (scaled != degs[v] / db[v]) stats.costs_consistent = false;
        }
        result.runs[j] = std::move(stats);
    });

    for (const auto& run : result.runs) {
        union_edges.insert(run.edges.begin(), run.edges.end());
        if (!run.claim13_ok || !run.covering_implies_connected || !run.costs_consistent)
            result.all_exact_checks_ok = false;
    }
    result.union_edges.assign(union_edges.begin(), union_edges.end());
    result.union_cost = g.total_cost(result.union_edges);
    result.cost_ratio = result.cstar > 0 ? to_double(result.union_cost / result.cstar)
                                         : (result.union_cost == 0 ? 0.0 : 1e18);
    auto degs = degree_vector(g, result.union_edges);
    for (int v = 0; v < g.n; ++v)
        result.degree_violation = std::max(result.degree_violation, to_double(degs[v]) / db[v]);
    result.group_connected.resize(groups.size());
    for (size_t t = 0; t < groups.size(); ++t)
        result.group_connected[t] =
            detail::connected_in(g, result.union_edges, root_vertex, groups[t]) ? 1 : 0;
    return result;
}

}  // namespace degnet
