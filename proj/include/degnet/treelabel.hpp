// Tree labeling: assign one label per node of a rooted binary tree subject to
// per-node consistency triples, label-set covering constraints and unit-budget
// cost constraints. The solver expands the instance into a super-tree of
// selector/copier/leaf nodes, solves an exact LP over it, and rounds by a
// single root-to-leaves random walk.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "degnet/lp.hpp"
#include "degnet/parallel.hpp"
#include "degnet/rng.hpp"
#include "degnet/stats.hpp"

namespace degnet {

// Label ids are global (0..L-1) and partitioned among tree nodes, so label
// sets are disjoint by construction. Internal tree nodes may have one or two
// children; consistency tuples carry -1 in the third slot for one-child nodes.
struct LabelTreeInstance {
    int root = 0;
    std::vector<int> parent;                 // -1 at the root
    std::vector<std::vector<int>> children;  // size 0, 1 or 2
    std::vector<std::vector<int>> labels_of;
    std::vector<int> node_of_label;
    std::vector<std::string> label_names;
    std::vector<std::vector<std::array<int, 3>>> gamma;  // per internal node
    std::vector<std::vector<int>> groups;
    std::vector<std::vector<Rat>> costs;  // m tables over all labels, entries in [0,1]

    int n() const { return static_cast<int>(children.size()); }
    int num_labels() const { return static_cast<int>(node_of_label.size()); }
    int num_groups() const { return static_cast<int>(groups.size()); }
    int num_cost_constraints() const { return static_cast<int>(costs.size()); }

    int add_node(int par) {
        parent.push_back(par);
        children.emplace_back();
        labels_of.emplace_back();
        gamma.emplace_back();
        if (par >= 0) children[par].push_back(n() - 1);
        return n() - 1;
    }

    int add_label(int node, const std::string& name = {}) {
        int id = num_labels();
        node_of_label.push_back(node);
        label_names.push_back(name.empty() ? ("l" + std::to_string(id)) : name);
        labels_of[node].push_back(id);
        return id;
    }

    int depth() const {  // D: max edges on a root-to-leaf path
        std::function<int(int)> rec = [&](int u) {
            int d = 0;
            for (int c : children[u]) d = std::max(d, 1 + rec(c));
            return d;
        };
        return rec(root);
    }

    int delta() const {
        size_t d = 0;
        for (const auto& ls : labels_of) d = std::max(d, ls.size());
        return static_cast<int>(d);
    }

    Rat cost_of_labeling(int i, const std::vector<int>& labeling) const {
        Rat s(0);
        for (int u = 0; u < n(); ++u) s += costs[i][labeling[u]];
        return s;
    }

    bool covers(int t, const std::vector<int>& labeling) const {
        std::set<int> used(labeling.begin(), labeling.end());
        for (int l : groups[t])
            if (used.count(l)) return true;
        return false;
    }

    bool consistent(const std::vector<int>& labeling) const {
        for (int u = 0; u < n(); ++u) {
            if (labeling[u] < 0 || node_of_label[labeling[u]] != u) return false;
            if (children[u].empty()) continue;
            std::array<int, 3> want{labeling[u], labeling[children[u][0]],
                                    children[u].size() > 1 ? labeling[children[u][1]] : -1};
            bool found = false;
            for (const auto& tup : gamma[u])
                if (tup == want) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
        return true;
    }

    // Empty label sets or empty gamma at an internal node are allowed: the
    // branch is pruned from the super-tree and the LP reports infeasibility.
    void validate() const {
        for (int u = 0; u < n(); ++u)
            if (children[u].size() > 2) throw std::invalid_argument("tree node with more than two children");
        for (const auto& table : costs)
            for (const auto& c : table)
                if (c < 0 || c > 1) throw std::invalid_argument("label cost outside [0,1]");
    }
};

// Super-tree from Algorithms 1-2: the root is a selector with one child per
// root label; a selector associated with (u, l) has one copier child per
// consistency tuple extending l, each copier holding the child nodes of u with
// the tuple's labels. Branches with no consistent extension are pruned.
struct SuperTree {
    enum class Kind { Selector, Copier, Leaf };
    struct Node {
        Kind kind;
        int tnode;
        int label;  // -1 for the root and copiers
        int parent;
        std::vector<int> children;
    };
    std::vector<Node> nodes;  // parents precede children
    std::vector<std::vector<int>> group_nodes;

    int root() const { return 0; }
    size_t size() const { return nodes.size(); }

    Rat node_cost(const LabelTreeInstance& inst, int i, int p) const {
        int l = nodes[p].label;
        return l < 0 ? Rat(0) : inst.costs[i][l];
    }
};

inline SuperTree build_supertree(const LabelTreeInstance& inst, size_t max_nodes = 200000) {
    inst.validate();
    SuperTree st;
    auto new_node = [&](SuperTree::Kind kind, int tnode, int label, int parent) {
        if (st.nodes.size() >= max_nodes) throw std::runtime_error("build_supertree: node cap exceeded");
        st.nodes.push_back({kind, tnode, label, parent, {}});
        int id = static_cast<int>(st.nodes.size()) - 1;
        if (parent >= 0) st.nodes[parent].children.push_back(id);
        return id;
    };

    std::function<void(int, int, int)> construct = [&](int p, int u, int l) {
        if (inst.children[u].empty()) return;  // p stays a leaf
        st.nodes[p].kind = SuperTree::Kind::Selector;
        int v = inst.children[u][0];
        int v2 = inst.children[u].size() > 1 ? inst.children[u][1] : -1;
        for (const auto& tup : inst.gamma[u]) {
            if (tup[0] != l) continue;
            int copier = new_node(SuperTree::Kind::Copier, u, -1, p);
            int q = new_node(SuperTree::Kind::Leaf, v, tup[1], copier);
            construct(q, v, tup[1]);
            if (v2 >= 0) {
                int q2 = new_node(SuperTree::Kind::Leaf, v2, tup[2], copier);
                construct(q2, v2, tup[2]);
            }
        }
    };

    new_node(SuperTree::Kind::Selector, inst.root, -1, -1);
    for (int l : inst.labels_of[inst.root]) {
        int p = new_node(SuperTree::Kind::Leaf, inst.root, l, 0);
        construct(p, inst.root, l);
    }

    // prune branches that cannot complete a consistent labeling: a selector
    // with no live copier, or a copier with a dead child
    std::vector<char> dead(st.nodes.size(), 0);
    for (int p = static_cast<int>(st.nodes.size()) - 1; p >= 0; --p) {
        auto& node = st.nodes[p];
        if (node.kind == SuperTree::Kind::Leaf) continue;
        size_t live = 0;
        bool any_dead_child = false;
        for (int c : node.children) {
            if (dead[c])
                any_dead_child = true;
            else
                ++live;
        }
        if (node.kind == SuperTree::Kind::Selector && live == 0 && p != 0) dead[p] = 1;
        if (node.kind == SuperTree::Kind::Copier && any_dead_child) dead[p] = 1;
    }
    // compact
    std::vector<int> remap(st.nodes.size(), -1);
    SuperTree out;
    for (size_t p = 0; p < st.nodes.size(); ++p) {
        if (dead[p]) continue;
        if (st.nodes[p].parent >= 0 && remap[st.nodes[p].parent] < 0) continue;  // orphaned subtree
        remap[p] = static_cast<int>(out.nodes.size());
        auto node = st.nodes[p];
        node.parent = node.parent >= 0 ? remap[node.parent] : -1;
        node.children.clear();
        out.nodes.push_back(std::move(node));
        if (out.nodes.back().parent >= 0) out.nodes[out.nodes.back().parent].children.push_back(remap[p]);
    }

    out.group_nodes.resize(inst.num_groups());
    for (size_t p = 0; p < out.nodes.size(); ++p) {
        int l = out.nodes[p].label;
        if (l < 0) continue;
        for (int t = 0; t < inst.num_groups(); ++t)
            for (int gl : inst.groups[t])
                if (gl == l) out.group_nodes[t].push_back(static_cast<int>(p));
    }
    return out;
}

struct FractionalSubtree {
    std::vector<Rat> x;                    // per super-tree node
    std::vector<std::map<int, Rat>> y;     // per group: node -> weight
    size_t lp_rows = 0;
    size_t lp_pivots = 0;
};

namespace detail {

// Alias map exploiting x_q = x_p along copier edges: only children of
// selectors get LP variables; the root is the constant 1.
struct AliasMap {
    std::vector<int> var_of;  // -1: aliased or root
    std::vector<int> rep_of;  // node -> node owning its value (root or selector child)

    static AliasMap build(const SuperTree& st) {
        AliasMap am;
        am.var_of.assign(st.size(), -1);
        am.rep_of.assign(st.size(), -1);
        for (size_t p = 0; p < st.size(); ++p) {
            const auto& node = st.nodes[p];
            if (node.parent < 0) {
                am.rep_of[p] = static_cast<int>(p);
            } else if (st.nodes[node.parent].kind == SuperTree::Kind::Selector) {
                am.rep_of[p] = static_cast<int>(p);
            } else {
                am.rep_of[p] = am.rep_of[node.parent];
            }
        }
        return am;
    }
};

}  // namespace detail

// Exact feasible point of the super-tree LP, or nullopt when the instance is
// fractionally infeasible. Packing and cost rows are separated lazily; the
// returned point satisfies all of them exactly.
inline std::optional<FractionalSubtree> solve_fractional(const SuperTree& st, const LabelTreeInstance& inst) {
    const int N = static_cast<int>(st.size());
    auto am = detail::AliasMap::build(st);
    LinearProgram lp;
    std::vector<int> var_of(N, -1);
    for (int p = 0; p < N; ++p)
        if (am.rep_of[p] == p && p != st.root()) var_of[p] = lp.add_variable("x:" + std::to_string(p));
    auto val_var = [&](int p) { return var_of[am.rep_of[p]]; };  // -1 means the constant 1 (root alias)

    // objective: bias toward cheap labelings
    std::map<int, Rat> obj;
    for (int p = 0; p < N; ++p) {
        int v = val_var(p);
        if (v < 0) continue;
        Rat c(0);
        for (int i = 0; i < inst.num_cost_constraints(); ++i) c += st.node_cost(inst, i, p);
        if (c != 0) obj[v] += c;
    }
    for (const auto& [v, c] : obj) lp.set_objective(v, c);

    // selector conservation rows (root row fixes the distribution mass to 1)
    for (int p = 0; p < N; ++p) {
        if (st.nodes[p].kind != SuperTree::Kind::Selector) continue;
        std::vector<std::pair<int, Rat>> terms;
        for (int c : st.nodes[p].children) terms.push_back({var_of[c], Rat(1)});
        int pv = val_var(p);
        Rat rhs(0);
        if (pv < 0)
            rhs = 1;
        else
            terms.push_back({pv, Rat(-1)});
        lp.add_row(make_row("sel:" + std::to_string(p), std::move(terms), Cmp::EQ, rhs));
    }

    // y variables and covering rows
    const int k = inst.num_groups();
    std::vector<std::map<int, int>> yvar(k);
    for (int t = 0; t < k; ++t) {
        std::vector<std::pair<int, Rat>> terms;
        for (int q : st.group_nodes[t]) {
            int v = lp.add_variable("y:" + std::to_string(t) + ":" + std::to_string(q));
            yvar[t][q] = v;
            terms.push_back({v, Rat(1)});
        }
        lp.add_row(make_row("covg:" + std::to_string(t), std::move(terms), Cmp::EQ, Rat(1)));
    }

    // lazy packing rows  sum_{q in subtree(p), q in S'_t} y_q <= x_p
    // and cost rows      sum_{q in subtree(p)} c^i_q x_q <= x_p
    const int m = inst.num_cost_constraints();
    RowFamily fam;
    fam.separate = [&st, &inst, am, var_of, yvar, k, m, N](const std::vector<Rat>& pt) {
        auto value_of = [&](int p) {
            int rep = am.rep_of[p];
            return rep == st.root() ? Rat(1) : pt[var_of[rep]];
        };
        std::vector<LinRow> out;
        for (int t = 0; t < k; ++t) {
            std::vector<Rat> sub(N, Rat(0));
            for (int p = N - 1; p >= 0; --p) {
                auto it = yvar[t].find(p);
                if (it != yvar[t].end()) sub[p] += pt[it->second];
                for (int c : st.nodes[p].children) sub[p] += sub[c];
            }
            for (int p = 0; p < N; ++p) {
                if (sub[p] <= value_of(p)) continue;
                std::vector<std::pair<int, Rat>> terms;
                // collect subtree group nodes
                std::vector<int> stack{p};
                while (!stack.empty()) {
                    int q = stack.back();
                    stack.pop_back();
                    auto qit = yvar[t].find(q);
                    if (qit != yvar[t].end()) terms.push_back({qit->second, Rat(1)});
                    for (int c : st.nodes[q].children) stack.push_back(c);
                }
                Rat rhs(0);
                if (am.rep_of[p] == st.root())
                    rhs = 1;
                else
                    terms.push_back({var_of[am.rep_of[p]], Rat(-1)});
                out.push_back(make_row("pack:" + std::to_string(t) + ":" + std::to_string(p),
                                       std::move(terms), Cmp::LE, rhs));
            }
        }
        for (int i = 0; i < m; ++i) {
            std::vector<Rat> sub(N, Rat(0));
            for (int p = N - 1; p >= 0; --p) {
                sub[p] += st.node_cost(inst, i, p) * value_of(p);
                for (int c : st.nodes[p].children) sub[p] += sub[c];
            }
            for (int p = 0; p < N; ++p) {
                if (sub[p] <= value_of(p)) continue;
                // sum of c_q x_q over the subtree, expressed on alias variables
                std::map<int, Rat> coeff;
                Rat const_part(0);
                std::vector<int> stack{p};
                while (!stack.empty()) {
                    int q = stack.back();
                    stack.pop_back();
                    Rat cq = st.node_cost(inst, i, q);
                    if (cq != 0) {
                        int rep = am.rep_of[q];
                        if (rep == st.root())
                            const_part += cq;
                        else
                            coeff[var_of[rep]] += cq;
                    }
                    for (int c : st.nodes[q].children) stack.push_back(c);
                }
                std::vector<std::pair<int, Rat>> terms(coeff.begin(), coeff.end());
                Rat rhs = -const_part;
                if (am.rep_of[p] == st.root())
                    rhs += 1;
                else
                    terms.push_back({var_of[am.rep_of[p]], Rat(-1)});
                out.push_back(make_row("cost:" + std::to_string(i) + ":" + std::to_string(p),
                                       std::move(terms), Cmp::LE, rhs));
            }
        }
        return out;
    };
    lp.add_family(fam);

    auto res = lp.solve();
    if (res.status == LpStatus::INFEASIBLE) return std::nullopt;
    if (res.status != LpStatus::OPTIMAL) throw std::logic_error("solve_fractional: unexpected LP status");

    FractionalSubtree frac;
    frac.x.resize(N);
    for (int p = 0; p < N; ++p) {
        int rep = am.rep_of[p];
        frac.x[p] = rep == st.root() ? Rat(1) : res.x[var_of[rep]];
    }
    frac.y.resize(k);
    for (int t = 0; t < k; ++t)
        for (const auto& [q, v] : yvar[t]) frac.y[t][q] = res.x[v];
    frac.lp_rows = res.generated_rows;
    frac.lp_pivots = res.pivots;
    return frac;
}

// Exact check of the LP constraints on an expanded solution; used by tests and
// by the verifier after every solve.
inline bool fractional_feasible(const SuperTree& st, const LabelTreeInstance& inst,
                                const FractionalSubtree& f) {
    const int N = static_cast<int>(st.size());
    if (f.x[st.root()] != 1) return false;
    for (int p = 0; p < N; ++p) {
        if (f.x[p] < 0 || f.x[p] > 1) return false;
        const auto& node = st.nodes[p];
        if (node.kind == SuperTree::Kind::Selector) {
            Rat s(0);
            for (int c : node.children) s += f.x[c];
            if (s != f.x[p]) return false;
        } else {
            for (int c : node.children)
                if (f.x[c] != f.x[p]) return false;
        }
    }
    for (int t = 0; t < inst.num_groups(); ++t) {
        Rat total(0);
        for (const auto& [q, v] : f.y[t]) {
            if (v < 0) return false;
            total += v;
        }
        if (total != 1) return false;
        std::vector<Rat> sub(N, Rat(0));
        for (int p = N - 1; p >= 0; --p) {
            auto it = f.y[t].find(p);
            if (it != f.y[t].end()) sub[p] += it->second;
            for (int c : st.nodes[p].children) sub[p] += sub[c];
        }
        for (int p = 0; p < N; ++p)
            if (sub[p] > f.x[p]) return false;
    }
    for (int i = 0; i < inst.num_cost_constraints(); ++i) {
        std::vector<Rat> sub(N, Rat(0));
        for (int p = N - 1; p >= 0; --p) {
            sub[p] += st.node_cost(inst, i, p) * f.x[p];
            for (int c : st.nodes[p].children) sub[p] += sub[c];
        }
        for (int p = 0; p < N; ++p)
            if (sub[p] > f.x[p]) return false;
    }
    return true;
}

// Algorithm 3: walk down from the root; a selector keeps one child with
// probability x_q / x_p, a copier keeps all children.
inline std::vector<char> recursive_rounding(const SuperTree& st, const FractionalSubtree& frac,
                                            RandomStream& rng) {
    std::vector<char> in_tree(st.size(), 0);
    std::vector<int> stack{st.root()};
    in_tree[st.root()] = 1;
    while (!stack.empty()) {
        int p = stack.back();
        stack.pop_back();
        const auto& node = st.nodes[p];
        if (node.children.empty()) continue;
        if (node.kind == SuperTree::Kind::Selector) {
            std::vector<Rat> w;
            w.reserve(node.children.size());
            for (int c : node.children) w.push_back(frac.x[c]);
            int q = node.children[rng.categorical(w)];
            in_tree[q] = 1;
            stack.push_back(q);
        } else {
            for (int c : node.children) {
                in_tree[c] = 1;
                stack.push_back(c);
            }
        }
    }
    return in_tree;
}

inline bool subtree_consistent(const SuperTree& st, const std::vector<char>& in_tree) {
    if (!in_tree[st.root()]) return false;
    for (size_t p = 0; p < st.size(); ++p) {
        if (!in_tree[p]) continue;
        const auto& node = st.nodes[p];
        if (node.parent >= 0 && !in_tree[node.parent]) return false;
        if (node.kind == SuperTree::Kind::Selector) {
            int cnt = 0;
            for (int c : node.children) cnt += in_tree[c];
            if (cnt != 1) return false;
        } else if (node.kind == SuperTree::Kind::Copier) {
            for (int c : node.children)
                if (!in_tree[c]) return false;
        }
    }
    return true;
}

// Sub-tree -> labeling direction of the bijection.
inline std::vector<int> to_labeling(const SuperTree& st, const LabelTreeInstance& inst,
                                    const std::vector<char>& in_tree) {
    if (!subtree_consistent(st, in_tree)) throw std::invalid_argument("to_labeling: sub-tree not consistent");
    std::vector<int> labeling(inst.n(), -1);
    for (size_t p = 0; p < st.size(); ++p) {
        if (!in_tree[p] || st.nodes[p].label < 0) continue;
        if (labeling[st.nodes[p].tnode] >= 0)
            throw std::logic_error("to_labeling: tree node labeled twice");
        labeling[st.nodes[p].tnode] = st.nodes[p].label;
    }
    for (int u = 0; u < inst.n(); ++u)
        if (labeling[u] < 0) throw std::logic_error("to_labeling: tree node left unlabeled");
    return labeling;
}

// Labeling -> sub-tree direction of the bijection.
inline std::vector<char> labeling_to_subtree(const SuperTree& st, const LabelTreeInstance& inst,
                                             const std::vector<int>& labeling) {
    if (!inst.consistent(labeling)) throw std::invalid_argument("labeling_to_subtree: inconsistent labeling");
    std::vector<char> in_tree(st.size(), 0);
    in_tree[st.root()] = 1;
    std::function<void(int)> grow = [&](int p) {
        const auto& node = st.nodes[p];
        if (node.kind != SuperTree::Kind::Selector) {
            for (int c : node.children) {
                in_tree[c] = 1;
                grow(c);
            }
            return;
        }
        for (int c : node.children) {
            const auto& child = st.nodes[c];
            bool match = true;
            if (child.label >= 0 && labeling[child.tnode] != child.label) match = false;
            if (child.kind == SuperTree::Kind::Copier) {
                for (int gc : child.children)
                    if (labeling[st.nodes[gc].tnode] != st.nodes[gc].label) match = false;
            }
            if (match) {
                in_tree[c] = 1;
                grow(c);
                return;
            }
        }
        throw std::logic_error("labeling_to_subtree: no matching branch (label was pruned)");
    };
    grow(st.root());
    return in_tree;
}

inline Rat subtree_cost(const SuperTree& st, const LabelTreeInstance& inst, int i,
                        const std::vector<char>& in_tree) {
    Rat s(0);
    for (size_t p = 0; p < st.size(); ++p)
        if (in_tree[p]) s += st.node_cost(inst, i, p);
    return s;
}

inline bool subtree_covers(const SuperTree& st, int t, const std::vector<char>& in_tree) {
    for (int q : st.group_nodes[t])
        if (in_tree[q]) return true;
    return false;
}

// alpha_0 = e^s with s = ln(1 + 1/(2D)), alpha_h = e^{alpha_{h-1} - 1}.
inline std::vector<double> alpha_table(int D) {
    std::vector<double> a(static_cast<size_t>(D) + 1);
    a[0] = 1.0 + 1.0 / (2.0 * D);  // e^s evaluated in closed form
    for (int h = 1; h <= D; ++h) a[h] = std::exp(a[h - 1] - 1.0);
    return a;
}

// Lemma bound alpha_h <= 1 + 1/(2D - h) for all h in [0, D].
inline bool alpha_table_ok(int D, double tol = 1e-12) {
    auto a = alpha_table(D);
    for (int h = 0; h <= D; ++h)
        if (a[h] > 1.0 + 1.0 / (2.0 * D - h) + tol) return false;
    return true;
}

struct GuaranteeReport {
    int D = 0;
    size_t trials = 0;
    size_t supertree_nodes = 0;
    std::vector<double> coverage_freq;         // per group
    std::vector<double> coverage_lower99;      // per group
    std::vector<double> exp_moment;            // per cost constraint
    std::vector<double> exp_moment_ci;         // CI half-width
    double max_marginal_sigmas = 0.0;          // worst |freq - x_p| in binomial sigmas
    size_t marginal_violations = 0;            // beyond 4 sigma (or inexact for 0/1)
    bool consistency_ok = true;                // every trial structurally consistent
    bool costs_match = true;                   // subtree cost == labeling cost, exactly
    bool coverage_pass = true;                 // lower bound >= 1/D - slack
    bool concentration_pass = true;            // exp moment <= 1 + 1/D + CI
    bool alpha_ok = true;
    bool marginals_pass = true;

    bool pass() const {
        return consistency_ok && costs_match && coverage_pass && concentration_pass && alpha_ok &&
               marginals_pass;
    }
};

// Monte-Carlo verification of the coverage and concentration guarantees plus
// the exact per-trial invariants.
inline GuaranteeReport verify_guarantees(const LabelTreeInstance& inst, size_t trials, std::uint64_t seed,
                                         double coverage_slack = 0.02) {
    SuperTree st = build_supertree(inst);
    auto frac = solve_fractional(st, inst);
    if (!frac) throw std::runtime_error("verify_guarantees: instance is fractionally infeasible");
    if (!fractional_feasible(st, inst, *frac))
        throw std::logic_error("verify_guarantees: LP solution fails exact feasibility");

    const int D = std::max(inst.depth(), 1);  // bounds below divide by D
    const int k = inst.num_groups();
    const int m = inst.num_cost_constraints();
    GuaranteeReport rep;
    rep.D = D;
    rep.trials = trials;
    rep.supertree_nodes = st.size();

    std::vector<std::vector<char>> outcomes(trials);
    parallel_for(trials, [&](size_t i) {
        RandomStream rng(derive_stream_seed(seed, i));
        outcomes[i] = recursive_rounding(st, *frac, rng);
    });

    std::vector<size_t> covered(k, 0);
    std::vector<size_t> included(st.size(), 0);
    std::vector<std::vector<double>> cost_exp(m);
    const double s = std::log1p(1.0 / (2.0 * D));
    for (size_t i = 0; i < trials; ++i) {
        const auto& in_tree = outcomes[i];
        if (!subtree_consistent(st, in_tree)) rep.consistency_ok = false;
        auto labeling = to_labeling(st, inst, in_tree);
        for (int t = 0; t < k; ++t) {
            bool cov_tree = subtree_covers(st, t, in_tree);
            bool cov_lab = inst.covers(t, labeling);
            if (cov_tree != cov_lab) rep.consistency_ok = false;
            if (cov_tree) ++covered[t];
        }
        for (int i2 = 0; i2 < m; ++i2) {
            Rat ct = subtree_cost(st, inst, i2, in_tree);
            if (ct != inst.cost_of_labeling(i2, labeling)) rep.costs_match = false;
            cost_exp[i2].push_back(std::exp(s * to_double(ct)));
        }
        for (size_t p = 0; p < st.size(); ++p) included[p] += in_tree[p];
    }

    for (int t = 0; t < k; ++t) {
        double freq = static_cast<double>(covered[t]) / static_cast<double>(trials);
        rep.coverage_freq.push_back(freq);
        double lb = binomial_lower_bound(covered[t], trials, kZ99);
        rep.coverage_lower99.push_back(lb);
        if (lb < 1.0 / D - coverage_slack) rep.coverage_pass = false;
    }
    for (int i = 0; i < m; ++i) {
        double mean = mean_of(cost_exp[i]);
        double ci = ci_halfwidth(cost_exp[i], kZ99);
        rep.exp_moment.push_back(mean);
        rep.exp_moment_ci.push_back(ci);
        if (mean > 1.0 + 1.0 / D + ci) rep.concentration_pass = false;
    }
    for (size_t p = 0; p < st.size(); ++p) {
        double xp = to_double(frac->x[p]);
        double freq = static_cast<double>(included[p]) / static_cast<double>(trials);
        double dev = std::abs(freq - xp);
        if (frac->x[p] == 0 || frac->x[p] == 1) {
            if (dev != 0.0) {
                ++rep.marginal_violations;
                rep.max_marginal_sigmas = 1e18;
            }
            continue;
        }
        double sigma = std::sqrt(xp * (1.0 - xp) / static_cast<double>(trials));
        rep.max_marginal_sigmas = std::max(rep.max_marginal_sigmas, dev / sigma);
        if (dev > 4.0 * sigma) ++rep.marginal_violations;
    }
    rep.marginals_pass = rep.marginal_violations == 0;
    rep.alpha_ok = alpha_table_ok(D);
    return rep;
}

}  // namespace degnet
