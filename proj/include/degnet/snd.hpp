// Relaxations for lp-norm-bounded survivable network design: the cut polytope
// with requirement function R(S), the spanning-tree (subtour) polytope used by
// the degree-bounded MST rounding mode, the piecewise convex degree cost f,
// and the cutting-plane solver for the convex program
//     min c.x   s.t.  x in P,  sum_v f(x(delta(v))) <= A^p.
#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "degnet/graph.hpp"
#include "degnet/lp.hpp"

namespace degnet {

enum class SndMode { SND, SPANNING_TREE };

inline int mode_alpha(SndMode m) { return m == SndMode::SND ? 2 : 1; }
inline int mode_beta(SndMode m) { return m == SndMode::SND ? 3 : 1; }

// B_v in [1, inf]; nullopt encodes infinity (vertex relaxed / unconstrained).
struct DegreeBounds {
    std::vector<std::optional<Rat>> B;

    bool finite(int v) const { return B[v].has_value(); }
    const Rat& at(int v) const { return *B[v]; }
};

namespace detail {

inline std::string mask_name(std::uint32_t mask) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%x", mask);
    return buf;
}

}  // namespace detail

// R(S) = max r_{u,v} over u in S, v not in S.
inline int cut_requirement(const RequirementMatrix& r, std::uint32_t mask) {
    int best = 0;
    for (const auto& [pair, req] : r.r) {
        bool inu = mask & (1u << pair.first), inv = mask & (1u << pair.second);
        if (inu != inv) best = std::max(best, req);
    }
    return best;
}

inline LinRow cut_row(const Graph& g, const RequirementMatrix& r, std::uint32_t mask) {
    std::vector<std::pair<int, Rat>> terms;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        bool inu = mask & (1u << g.edges[e].u), inv = mask & (1u << g.edges[e].v);
        if (inu != inv) terms.push_back({static_cast<int>(e), Rat(1)});
    }
    return make_row("cut:" + detail::mask_name(mask), std::move(terms), Cmp::GE, Rat(cut_requirement(r, mask)));
}

// The good polytope for SND: all cut rows x(delta(S)) >= R(S). Separation by a
// max-flow per requirement pair; for |V| <= 12 the family is also enumerable,
// which exact extreme-point computations require.
struct GoodPolytope {
    const Graph* g = nullptr;
    const RequirementMatrix* r = nullptr;
    SndMode mode = SndMode::SND;

    static constexpr int kEnumerableVertexCap = 12;

    RowFamily cut_family() const {
        const Graph& gr = *g;
        const RequirementMatrix& req = *r;
        RowFamily fam;
        if (gr.n <= kEnumerableVertexCap) {
            // cache the whole family once; S and V\S give the same row
            auto rows = std::make_shared<std::vector<LinRow>>();
            for (std::uint32_t mask = 1; mask < (1u << gr.n); ++mask) {
                if (!(mask & 1u)) continue;                // canonical side contains vertex 0
                if (mask == ((1u << gr.n) - 1)) continue;  // full set has an empty cut
                if (cut_requirement(req, mask) == 0) continue;
                rows->push_back(cut_row(gr, req, mask));
            }
            fam.separate = [rows](const std::vector<Rat>& x) {
                std::vector<LinRow> out;
                for (const auto& row : *rows)
                    if (!row.satisfied(x)) out.push_back(row);
                return out;
            };
            fam.enumerate = [rows](const std::function<void(const LinRow&)>& emit) {
                for (const auto& row : *rows) emit(row);
            };
        } else {
            const Graph* gp = g;
            const RequirementMatrix* rp = r;
            fam.separate = [gp, rp](const std::vector<Rat>& x) {
                std::vector<LinRow> out;
                std::set<std::string> seen;
                for (const auto& [pair, need] : rp->r) {
                    auto mf = max_flow(*gp, x, pair.first, pair.second);
                    if (mf.value < need) {
                        std::uint32_t mask = 0;
                        for (int v : mf.min_cut) mask |= (1u << v);
                        auto row = cut_row(*gp, *rp, mask);
                        if (seen.insert(row.name).second) out.push_back(std::move(row));
                    }
                }
                return out;
            };
        }
        return fam;
    }
};

// Spanning-tree (subtour) polytope rows over an explicit multigraph given as
// endpoint pairs: x(E(S)) <= |S|-1 for |S| >= 2, plus x(E) = n-1.
inline RowFamily subtour_family(int nverts, const std::vector<std::pair<int, int>>& edges) {
    if (nverts > 20) throw std::invalid_argument("subtour_family: vertex count too large to enumerate");
    auto rows = std::make_shared<std::vector<LinRow>>();
    for (std::uint32_t mask = 0; mask < (1u << nverts); ++mask) {
        int size = __builtin_popcount(mask);
        if (size < 2 || size == nverts) continue;
        std::vector<std::pair<int, Rat>> terms;
        for (size_t e = 0; e < edges.size(); ++e)
            if ((mask & (1u << edges[e].first)) && (mask & (1u << edges[e].second)))
                terms.push_back({static_cast<int>(e), Rat(1)});
        if (terms.empty()) continue;
        rows->push_back(make_row("sub:" + detail::mask_name(mask), std::move(terms), Cmp::LE, Rat(size - 1)));
    }
    RowFamily fam;
    fam.separate = [rows](const std::vector<Rat>& x) {
        std::vector<LinRow> out;
        for (const auto& row : *rows)
            if (!row.satisfied(x)) out.push_back(row);
        return out;
    };
    fam.enumerate = [rows](const std::function<void(const LinRow&)>& emit) {
        for (const auto& row : *rows) emit(row);
    };
    return fam;
}

inline LinRow spanning_cardinality_row(int nverts, int nedges) {
    std::vector<std::pair<int, Rat>> terms;
    for (int e = 0; e < nedges; ++e) terms.push_back({e, Rat(1)});
    return make_row("card", std::move(terms), Cmp::EQ, Rat(nverts - 1));
}

// f(x) = x on [0,1], x^p above; convex, continuous at the kink.
inline Rat f_value(const Rat& x, int p) {
    if (x < 0) throw std::invalid_argument("f_value: negative argument");
    return x <= 1 ? x : rat_pow(x, static_cast<unsigned>(p));
}

// Subgradient of f: 1 below the kink, p*x^{p-1} above; at x == 1 any value in
// [1, p] is valid and we fix p.
inline Rat f_subgradient(const Rat& x, int p) {
    if (x < 0) throw std::invalid_argument("f_subgradient: negative argument");
    if (x < 1) return Rat(1);
    return Rat(p) * rat_pow(x, static_cast<unsigned>(p - 1));
}

struct ConvexProgramSolution {
    std::vector<Rat> x0;
    Rat objective = 0;     // lower bound on opt
    Rat sum_f = 0;         // sum_v f(x0(delta(v)))
    size_t cut_rounds = 0; // outer Kelley iterations
    size_t lp_rows = 0;
};

// Kelley cutting planes on the epigraph form: per-vertex variables s_v with
// sum_v s_v <= A^p and accumulated tangent rows s_v >= f(d) + f'(d)(x(delta(v)) - d),
// at most one new tangent per vertex per round, interleaved with P-separation
// (P rows live inside the LP as a lazy family).
inline std::optional<ConvexProgramSolution> solve_convex_program(const Graph& g, const RequirementMatrix& r,
                                                                 SndMode mode, int p, const Rat& Ap,
                                                                 const Rat& eps = Rat(1, 1000000),
                                                                 size_t max_rounds = 1000) {
    if (p < 1) throw std::invalid_argument("solve_convex_program: p must be >= 1");
    const int ne = static_cast<int>(g.m());
    LinearProgram lp;
    for (int e = 0; e < ne; ++e) lp.add_variable("x:" + g.edges[e].name);
    std::vector<int> svar(g.n);
    for (int v = 0; v < g.n; ++v) svar[v] = lp.add_variable("s:" + g.vertex_names[v], Rat(0), Ap);
    for (int e = 0; e < ne; ++e) lp.set_objective(e, g.edges[e].cost);

    std::vector<std::pair<int, Rat>> budget;
    for (int v = 0; v < g.n; ++v) budget.push_back({svar[v], Rat(1)});
    lp.add_row(make_row("budget", std::move(budget), Cmp::LE, Ap));

    auto delta_terms = [&](int v) {
        std::vector<std::pair<int, Rat>> terms;
        for (int e = 0; e < ne; ++e)
            if (g.edges[e].u == v || g.edges[e].v == v) terms.push_back({e, Rat(1)});
        return terms;
    };
    // tangent at 0 (the linear branch) is globally valid: s_v >= x(delta(v))
    for (int v = 0; v < g.n; ++v) {
        auto terms = delta_terms(v);
        terms.push_back({svar[v], Rat(-1)});
        lp.add_row(make_row("tan0:" + std::to_string(v), std::move(terms), Cmp::LE, Rat(0)));
    }

    if (mode == SndMode::SND) {
        GoodPolytope poly{&g, &r, mode};
        lp.add_family(poly.cut_family());
    } else {
        std::vector<std::pair<int, int>> ends;
        for (const auto& e : g.edges) ends.push_back({e.u, e.v});
        lp.add_family(subtour_family(g.n, ends));
        lp.add_row(spanning_cardinality_row(g.n, ne));
    }

    for (size_t round = 0; round < max_rounds; ++round) {
        auto res = lp.solve();
        if (res.status == LpStatus::INFEASIBLE) return std::nullopt;  // A infeasible
        if (res.status != LpStatus::OPTIMAL) throw std::logic_error("convex program: unexpected LP status");
        std::vector<Rat> xe(res.x.begin(), res.x.begin() + ne);
        auto deg = fractional_degrees(g, xe);
        Rat total(0);
        for (int v = 0; v < g.n; ++v) total += f_value(deg[v], p);
        if (total <= (1 + eps) * Ap) {
            ConvexProgramSolution sol;
            sol.x0 = std::move(xe);
            sol.objective = res.objective;
            sol.sum_f = total;
            sol.cut_rounds = round + 1;
            sol.lp_rows = res.generated_rows;
            return sol;
        }
        for (int v = 0; v < g.n; ++v) {
            Rat fv = f_value(deg[v], p);
            if (fv <= res.x[svar[v]]) continue;  // tangent would not cut
            Rat grad = f_subgradient(deg[v], p);
            auto terms = delta_terms(v);
            for (auto& [var, c] : terms) c *= grad;
            terms.push_back({svar[v], Rat(-1)});
            lp.add_row(make_row("tan:" + std::to_string(v) + ":" + std::to_string(round), std::move(terms),
                                Cmp::LE, grad * deg[v] - fv));
        }
    }
    throw std::runtime_error("solve_convex_program: tangent loop did not converge");
}

// Fig. 1b step 2: B_v = max(x0(delta(v)), 1).
inline DegreeBounds initial_bounds(const Graph& g, const std::vector<Rat>& x0) {
    DegreeBounds b;
    auto deg = fractional_degrees(g, x0);
    b.B.resize(g.n);
    for (int v = 0; v < g.n; ++v) b.B[v] = deg[v] > 1 ? deg[v] : Rat(1);
    return b;
}

}  // namespace degnet
