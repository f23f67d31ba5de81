// Randomized iterative rounding: re-express the fractional point as a random
// extreme point of P cap Q_B with the right expectation, round edges with
// large value, relax tight low-support vertices, until integral.
//
// SND mode runs over the cut polytope exactly as written in the paper.
// Spanning-tree mode runs over the subtour polytope of the current minor:
// edges that reach value 1 are committed and contracted, which stands in for
// upward closure (the tree polytope is not upward-closed).
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "degnet/graph.hpp"
#include "degnet/lp.hpp"
#include "degnet/snd.hpp"

namespace degnet {

struct IterationSnapshot {
    std::vector<Rat> x;                  // per original edge
    std::vector<Rat> xbar;               // frozen-at-rounding values
    std::vector<std::optional<Rat>> B;   // per vertex, nullopt = infinity
};

enum class EventKind { INTEGRAL, ROUND, RELAX, COMMIT };

struct RoundingTrace {
    std::vector<IterationSnapshot> steps;  // index t = 0..T
    std::vector<std::pair<EventKind, int>> events;
    std::vector<int> chosen;  // final integral edge set (original edge ids)
    Rat cost = 0;
};

// Raised when a non-integral extreme point admits neither event 2a nor 2b:
// evidence against (alpha,beta)-integrality for the instance class.
struct IntegralityViolation : std::runtime_error {
    explicit IntegralityViolation(const std::string& what) : std::runtime_error(what) {}
};

struct Event {
    EventKind kind;
    int edge = -1;
    int vertex = -1;
};

using ExtremeSampler = std::function<const std::vector<Rat>&(const ConvexCombination&, RandomStream&)>;

inline const std::vector<Rat>& default_sampler(const ConvexCombination& comb, RandomStream& rng) {
    return sample_extreme(comb, rng);
}

struct RoundingProblem {
    const Graph* g = nullptr;
    const RequirementMatrix* r = nullptr;
    SndMode mode = SndMode::SND;
};

namespace detail {

// Live view of the (possibly contracted) instance during one rounding run.
struct RoundingState {
    const Graph* g;
    SndMode mode;
    std::vector<Rat> x;      // per original edge; committed edges pinned at 1
    std::vector<Rat> xbar;
    std::vector<std::optional<Rat>> B;
    std::vector<char> rounded;    // xbar frozen at the pre-rounding value
    std::vector<char> committed;  // MST mode: edge fixed and contracted
    std::vector<char> dropped;    // MST mode: became a self-loop, x == 0
    std::vector<int> cls;         // vertex -> contraction class representative

    int find(int v) {
        while (cls[v] != v) {
            cls[v] = cls[cls[v]];
            v = cls[v];
        }
        return v;
    }

    bool edge_alive(int e) const { return !committed[e] && !dropped[e]; }

    // x(delta(v)) over the original graph: committed edges count 1.
    Rat degree_sum(int v) const {
        Rat s(0);
        for (size_t e = 0; e < g->edges.size(); ++e)
            if (g->edges[e].u == v || g->edges[e].v == v) s += x[e];
        return s;
    }

    int support(int v) const {
        int c = 0;
        for (size_t e = 0; e < g->edges.size(); ++e)
            if ((g->edges[e].u == v || g->edges[e].v == v) && x[e] > 0) ++c;
        return c;
    }

    bool integral() const {
        for (size_t e = 0; e < g->edges.size(); ++e)
            if (x[e] != 0 && x[e] != 1) return false;
        return true;
    }

    IterationSnapshot snapshot() const { return {x, xbar, B}; }
};

}  // namespace detail

// Definition 2 case analysis on an extreme point. Order of preference:
// integral return, then ROUND (largest x_e in [1/alpha, 1)), then the MST
// commit of a value-1 edge, then RELAX (tight vertex with smallest support).
inline Event detect_event(const detail::RoundingState& st, int alpha, int beta) {
    if (st.integral()) return {EventKind::INTEGRAL};
    const Graph& g = *st.g;

    int round_edge = -1;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (!st.edge_alive(static_cast<int>(e))) continue;
        const Rat& xe = st.x[e];
        if (xe < 1 && alpha * xe >= 1) {
            if (round_edge < 0 || xe > st.x[round_edge]) round_edge = static_cast<int>(e);
        }
    }
    if (round_edge >= 0) return {EventKind::ROUND, round_edge};

    if (st.mode == SndMode::SPANNING_TREE) {
        for (size_t e = 0; e < g.edges.size(); ++e)
            if (st.edge_alive(static_cast<int>(e)) && st.x[e] == 1)
                return {EventKind::COMMIT, static_cast<int>(e)};
    }

    int relax_vertex = -1;
    int best_support = -1;
    for (int v = 0; v < g.n; ++v) {
        if (!st.B[v].has_value()) continue;
        if (st.degree_sum(v) != *st.B[v]) continue;
        int sup = st.support(v);
        if (Rat(sup) > *st.B[v] + beta) continue;
        if (relax_vertex < 0 || sup < best_support) {
            relax_vertex = v;
            best_support = sup;
        }
    }
    if (relax_vertex >= 0) return {EventKind::RELAX, -1, relax_vertex};

    std::ostringstream os;
    os << "integrality violation: non-integral extreme point with no event; x = [";
    for (size_t e = 0; e < g.edges.size(); ++e) os << (e ? ", " : "") << rat_str(st.x[e]);
    os << "], B = [";
    for (int v = 0; v < g.n; ++v) os << (v ? ", " : "") << (st.B[v] ? rat_str(*st.B[v]) : std::string("inf"));
    os << "]";
    throw IntegralityViolation(os.str());
}

namespace detail {

// Polytope P cap Q_B for the current state, over alive-edge variables.
// Returns the LP and the alive-edge index map.
inline std::pair<LinearProgram, std::vector<int>> state_polytope(const RoundingProblem& prob,
                                                                 RoundingState& st) {
    const Graph& g = *prob.g;
    LinearProgram lp;
    std::vector<int> alive;  // lp var -> original edge
    std::vector<int> var_of(g.edges.size(), -1);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (!st.edge_alive(static_cast<int>(e))) continue;
        var_of[e] = lp.add_variable("x:" + g.edges[e].name);
        alive.push_back(static_cast<int>(e));
    }

    if (prob.mode == SndMode::SND) {
        // cut rows x(delta(S)) >= R(S); committed/dropped edges do not exist here
        GoodPolytope poly{prob.g, prob.r, prob.mode};
        RowFamily full = poly.cut_family();
        // remap rows onto alive variables (in SND mode everything stays alive)
        lp.add_family(full);
    } else {
        // subtour polytope of the contracted multigraph
        std::map<int, int> class_index;
        for (int v = 0; v < g.n; ++v) {
            int c = st.find(v);
            if (!class_index.count(c)) {
                int idx = static_cast<int>(class_index.size());
                class_index[c] = idx;
            }
        }
        std::vector<std::pair<int, int>> ends(alive.size());
        for (size_t i = 0; i < alive.size(); ++i) {
            const Edge& e = g.edges[alive[i]];
            ends[i] = {class_index[st.find(e.u)], class_index[st.find(e.v)]};
        }
        lp.add_family(subtour_family(static_cast<int>(class_index.size()), ends));
        lp.add_row(spanning_cardinality_row(static_cast<int>(class_index.size()),
                                            static_cast<int>(alive.size())));
    }

    // Q_B rows for finite bounds, shifted by committed degree
    for (int v = 0; v < g.n; ++v) {
        if (!st.B[v].has_value()) continue;
        std::vector<std::pair<int, Rat>> terms;
        Rat committed_deg(0);
        for (size_t e = 0; e < g.edges.size(); ++e) {
            if (g.edges[e].u != v && g.edges[e].v != v) continue;
            if (st.committed[e])
                committed_deg += 1;
            else if (!st.dropped[e])
                terms.push_back({var_of[e], Rat(1)});
        }
        if (terms.empty()) continue;
        lp.add_row(make_row("deg:" + std::to_string(v), std::move(terms), Cmp::LE, *st.B[v] - committed_deg));
    }
    return {std::move(lp), std::move(alive)};
}

}  // namespace detail

struct RoundLoopOptions {
    size_t max_iterations_slack = 0;  // extra headroom over 2|E| + |V|
    ExtremeSampler sampler = default_sampler;
};

// Fig. 1b, steps 3-9. x0 must lie in P cap Q_B.
inline RoundingTrace round_loop(const RoundingProblem& prob, const std::vector<Rat>& x0, DegreeBounds B,
                                int alpha, int beta, std::uint64_t seed,
                                const RoundLoopOptions& opts = {}) {
    const Graph& g = *prob.g;
    if (x0.size() != g.m()) throw std::invalid_argument("round_loop: x0 size mismatch");

    detail::RoundingState st;
    st.g = prob.g;
    st.mode = prob.mode;
    st.x = x0;
    st.xbar = x0;
    st.B = std::move(B.B);
    st.rounded.assign(g.m(), 0);
    st.committed.assign(g.m(), 0);
    st.dropped.assign(g.m(), 0);
    st.cls.resize(g.n);
    for (int v = 0; v < g.n; ++v) st.cls[v] = v;

    RoundingTrace trace;
    trace.steps.push_back(st.snapshot());

    RandomStream rng(seed);
    const size_t max_iters = 2 * g.m() + g.n + opts.max_iterations_slack + 2;
    for (size_t iter = 0; iter < max_iters; ++iter) {
        // step 4: decompose and sample an extreme point x' with E[x'] = x
        auto [lp, alive] = detail::state_polytope(prob, st);
        std::vector<Rat> cur(alive.size());
        for (size_t i = 0; i < alive.size(); ++i) cur[i] = st.x[alive[i]];
        auto comb = caratheodory_decompose(lp, cur, alive.size() + 2, derive_stream_seed(seed, iter));
        const std::vector<Rat>& sampled = opts.sampler(comb, rng);

        // step 5: x <- x'; xbar tracks x on not-yet-rounded edges
        for (size_t i = 0; i < alive.size(); ++i) {
            st.x[alive[i]] = sampled[i];
            if (!st.rounded[alive[i]]) st.xbar[alive[i]] = sampled[i];
        }

        Event ev = detect_event(st, alpha, beta);
        switch (ev.kind) {
            case EventKind::INTEGRAL:
                trace.events.push_back({ev.kind, -1});
                break;
            case EventKind::ROUND: {
                // xbar_e freezes at the value right before the rounding step
                int e = ev.edge;
                st.rounded[e] = 1;
                st.x[e] = 1;
                int u = g.edges[e].u, v = g.edges[e].v;
                st.B[u] = st.degree_sum(u);
                st.B[v] = st.degree_sum(v);
                trace.events.push_back({ev.kind, e});
                break;
            }
            case EventKind::COMMIT: {
                // spanning-tree mode: the edge already has value 1; contract it
                int e = ev.edge;
                st.rounded[e] = 1;
                st.committed[e] = 1;
                int u = g.edges[e].u, v = g.edges[e].v;
                st.B[u] = st.degree_sum(u);
                st.B[v] = st.degree_sum(v);
                int cu = st.find(u), cv = st.find(v);
                st.cls[cu] = cv;
                for (size_t e2 = 0; e2 < g.m(); ++e2) {
                    if (!st.edge_alive(static_cast<int>(e2))) continue;
                    if (st.find(g.edges[e2].u) == st.find(g.edges[e2].v)) {
                        if (st.x[e2] != 0)
                            throw std::logic_error("round_loop: contracted a positive self-loop");
                        st.dropped[e2] = 1;
                    }
                }
                trace.events.push_back({ev.kind, e});
                break;
            }
            case EventKind::RELAX:
                st.B[ev.vertex] = std::nullopt;
                trace.events.push_back({ev.kind, ev.vertex});
                break;
        }
        trace.steps.push_back(st.snapshot());
        if (ev.kind == EventKind::INTEGRAL) {
            for (size_t e = 0; e < g.m(); ++e)
                if (st.x[e] == 1) trace.chosen.push_back(static_cast<int>(e));
            trace.cost = g.total_cost(trace.chosen);
            return trace;
        }
    }
    throw std::runtime_error("round_loop: iteration cap exceeded (termination argument violated)");
}

// ---------------------------------------------------------------------------
// Trace verification

struct CertificateFailure {
    int vertex;
    Rat final_degree;
    Rat bound;
};

// Lemma 8's probability-1 degree certificates:
//   x0(delta(v)) >= 1  ->  x^T(delta(v)) <= alpha * x0(delta(v)) + beta
//   x0(delta(v)) <  1  ->  x^T(delta(v)) <= alpha + beta
inline std::vector<CertificateFailure> degree_certificates(const Graph& g, const RoundingTrace& trace,
                                                           int alpha, int beta) {
    std::vector<CertificateFailure> fails;
    const auto& first = trace.steps.front().x;
    const auto& last = trace.steps.back().x;
    auto deg = [&](const std::vector<Rat>& x, int v) {
        Rat s(0);
        for (size_t e = 0; e < g.m(); ++e)
            if (g.edges[e].u == v || g.edges[e].v == v) s += x[e];
        return s;
    };
    for (int v = 0; v < g.n; ++v) {
        Rat d0 = deg(first, v), dT = deg(last, v);
        Rat bound = d0 >= 1 ? Rat(alpha) * d0 + beta : Rat(alpha + beta);
        if (dT > bound) fails.push_back({v, dT, bound});
    }
    return fails;
}

// Observation 5a: xbar_e <= x_e <= alpha * xbar_e at every iteration.
inline bool check_obs5(const RoundingTrace& trace, int alpha) {
    for (const auto& step : trace.steps)
        for (size_t e = 0; e < step.x.size(); ++e) {
            if (step.xbar[e] > step.x[e]) return false;
            if (step.x[e] > Rat(alpha) * step.xbar[e]) return false;
        }
    return true;
}

struct MartingaleReport {
    double max_deviation_sigmas = 0.0;  // worst |mean - xbar0| / sigma over edges and iterations
    size_t violations = 0;              // entries beyond the sigma multiple
    size_t cells = 0;
    bool pass = true;
};

// Lemma 6: for each edge, the xbar sequence is a martingale, so the empirical
// mean of xbar^t_e over an ensemble stays within a binomial-style band of
// xbar^0_e. Traces shorter than the longest are padded with their final value
// (the stopped martingale is constant).
inline MartingaleReport check_martingale(const std::vector<RoundingTrace>& traces, double sigmas = 4.0) {
    MartingaleReport rep;
    if (traces.empty()) return rep;
    size_t max_t = 0, ne = traces[0].steps[0].x.size();
    for (const auto& tr : traces) max_t = std::max(max_t, tr.steps.size());
    const size_t n = traces.size();
    for (size_t t = 1; t < max_t; ++t) {
        for (size_t e = 0; e < ne; ++e) {
            double target = to_double(traces[0].steps[0].xbar[e]);
            std::vector<double> vals(n);
            for (size_t i = 0; i < n; ++i) {
                const auto& steps = traces[i].steps;
                const auto& snap = t < steps.size() ? steps[t] : steps.back();
                vals[i] = to_double(snap.xbar[e]);
            }
            double m = 0, var = 0;
            for (double v : vals) m += v;
            m /= static_cast<double>(n);
            for (double v : vals) var += (v - m) * (v - m);
            if (n > 1) var /= static_cast<double>(n - 1);
            // zero spread demands exact agreement with the martingale start
            double sigma = std::sqrt(var / static_cast<double>(n));
            double dev = std::abs(m - target);
            ++rep.cells;
            if (sigma == 0.0) {
                if (dev > 0.0) {
                    ++rep.violations;
                    rep.max_deviation_sigmas = 1e18;
                }
                continue;
            }
            rep.max_deviation_sigmas = std::max(rep.max_deviation_sigmas, dev / sigma);
            if (dev > sigmas * sigma) ++rep.violations;
        }
    }
    rep.pass = rep.violations == 0;
    return rep;
}

}  // namespace degnet
