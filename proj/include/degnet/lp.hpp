// Exact rational LP: dense two-phase simplex (Dantzig pricing with a Bland
// fallback that guarantees termination), lazy constraint generation through
// separation callbacks, and Caratheodory decomposition of a feasible point
// into a convex combination of extreme points.
//
// Everything is mpq arithmetic; "extreme point", "tight row" and "x(delta(v))
// equals B_v" are decided exactly.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "degnet/rational.hpp"
#include "degnet/rng.hpp"

namespace degnet {

enum class Cmp { LE, GE, EQ };

struct LinRow {
    std::string name;  // stable identifier, used for dedup
    std::vector<std::pair<int, Rat>> terms;
    Cmp cmp = Cmp::LE;
    Rat rhs = 0;

    Rat eval(const std::vector<Rat>& x) const {
        Rat s(0);
        for (const auto& [j, a] : terms) s += a * x[j];
        return s;
    }
    bool satisfied(const std::vector<Rat>& x) const {
        Rat v = eval(x);
        switch (cmp) {
            case Cmp::LE: return v <= rhs;
            case Cmp::GE: return v >= rhs;
            case Cmp::EQ: return v == rhs;
        }
        return false;
    }
    bool tight(const std::vector<Rat>& x) const { return eval(x) == rhs; }
};

inline LinRow make_row(std::string name, std::vector<std::pair<int, Rat>> terms, Cmp cmp, Rat rhs) {
    LinRow r;
    r.name = std::move(name);
    r.terms = std::move(terms);
    r.cmp = cmp;
    r.rhs = std::move(rhs);
    return r;
}

// A (possibly exponential) family of rows. separate() returns rows violated at
// the queried point; enumerate, when present, visits the entire family and
// enables exact tightness and ratio tests over it.
struct RowFamily {
    std::function<std::vector<LinRow>(const std::vector<Rat>&)> separate;
    std::function<void(const std::function<void(const LinRow&)>&)> enumerate;
};

enum class LpStatus { OPTIMAL, INFEASIBLE, UNBOUNDED };

struct LpResult {
    LpStatus status = LpStatus::INFEASIBLE;
    std::vector<Rat> x;
    Rat objective = 0;
    size_t pivots = 0;
    size_t generated_rows = 0;
};

struct Variable {
    std::string name;
    Rat lo = 0;
    Rat hi = 1;
    bool hi_finite = true;
};

namespace detail {

struct SimplexOutcome {
    LpStatus status;
    std::vector<Rat> x;
    Rat objective = 0;
    size_t pivots = 0;
};

// Dense exact two-phase simplex over shifted nonnegative variables.
class SimplexTableau {
public:
    SimplexTableau(const std::vector<Variable>& vars, const std::vector<Rat>& objective,
                   const std::vector<LinRow>& rows)
        : vars_(vars), nvars_(static_cast<int>(vars.size())) {
        // rows in z-space (z_j = x_j - lo_j >= 0), rhs adjusted
        struct NormRow {
            std::vector<Rat> a;
            Cmp cmp;
            Rat b;
        };
        std::vector<NormRow> nrows;
        auto push = [&](const std::vector<std::pair<int, Rat>>& terms, Cmp cmp, const Rat& rhs) {
            NormRow nr;
            nr.a.assign(nvars_, Rat(0));
            Rat shift(0);
            for (const auto& [j, c] : terms) {
                nr.a[j] += c;
                shift += c * vars_[j].lo;
            }
            nr.cmp = cmp;
            nr.b = rhs - shift;
            nrows.push_back(std::move(nr));
        };
        for (const auto& r : rows) push(r.terms, r.cmp, r.rhs);
        for (int j = 0; j < nvars_; ++j)
            if (vars_[j].hi_finite) push({{j, Rat(1)}}, Cmp::LE, vars_[j].hi);

        m_ = static_cast<int>(nrows.size());
        nslack_ = 0;
        for (const auto& r : nrows)
            if (r.cmp != Cmp::EQ) ++nslack_;

        // column layout: [z vars | slacks | artificials]; artificials appended lazily
        int slack_at = nvars_;
        ncols_ = nvars_ + nslack_;
        tab_.assign(m_, std::vector<Rat>(ncols_, Rat(0)));
        rhs_.assign(m_, Rat(0));
        basis_.assign(m_, -1);

        std::vector<int> needs_artificial;
        int si = 0;
        for (int i = 0; i < m_; ++i) {
            auto& row = nrows[i];
            Rat sgn = 1;
            if (row.b < 0) sgn = -1;
            for (int j = 0; j < nvars_; ++j) tab_[i][j] = sgn * row.a[j];
            rhs_[i] = sgn * row.b;
            if (row.cmp != Cmp::EQ) {
                Rat sc = (row.cmp == Cmp::LE ? Rat(1) : Rat(-1)) * sgn;
                tab_[i][slack_at + si] = sc;
                if (sc == 1)
                    basis_[i] = slack_at + si;
                else
                    needs_artificial.push_back(i);
                ++si;
            } else {
                needs_artificial.push_back(i);
            }
        }
        nartif_ = static_cast<int>(needs_artificial.size());
        for (auto& row : tab_) row.resize(ncols_ + nartif_, Rat(0));
        for (int k = 0; k < nartif_; ++k) {
            int i = needs_artificial[k];
            tab_[i][ncols_ + k] = 1;
            basis_[i] = ncols_ + k;
        }
        first_artif_ = ncols_;
        ncols_ += nartif_;

        cost_.assign(ncols_, Rat(0));
        for (int j = 0; j < nvars_; ++j) cost_[j] = (j < static_cast<int>(objective.size())) ? objective[j] : Rat(0);
        obj_shift_ = 0;
        for (int j = 0; j < nvars_; ++j) obj_shift_ += cost_[j] * vars_[j].lo;
    }

    SimplexOutcome run(size_t pivot_cap) {
        // phase 1: minimize sum of artificials
        if (nartif_ > 0) {
            std::vector<Rat> pcost(ncols_, Rat(0));
            for (int j = first_artif_; j < ncols_; ++j) pcost[j] = 1;
            auto [st, val] = optimize(pcost, pivot_cap, /*phase1=*/true);
            if (st == LpStatus::UNBOUNDED) throw std::logic_error("simplex: phase 1 unbounded");
            if (val != 0) return {LpStatus::INFEASIBLE, {}, Rat(0), pivots_};
            evict_artificials();
        }
        auto [st, val] = optimize(cost_, pivot_cap, /*phase1=*/false);
        if (st == LpStatus::UNBOUNDED) return {LpStatus::UNBOUNDED, {}, Rat(0), pivots_};
        std::vector<Rat> x(nvars_);
        std::vector<Rat> zval(ncols_, Rat(0));
        for (int i = 0; i < m_; ++i) zval[basis_[i]] = rhs_[i];
        for (int j = 0; j < nvars_; ++j) x[j] = vars_[j].lo + zval[j];
        return {LpStatus::OPTIMAL, std::move(x), val + obj_shift_, pivots_};
    }

private:
    // Reduced costs for the given cost vector under the current basis.
    std::pair<std::vector<Rat>, Rat> reduced(const std::vector<Rat>& c) const {
        std::vector<Rat> red = c;
        Rat val(0);
        for (int i = 0; i < m_; ++i) {
            const Rat& cb = c[basis_[i]];
            if (cb == 0) continue;
            val += cb * rhs_[i];
            for (int j = 0; j < ncols_; ++j)
                if (tab_[i][j] != 0) red[j] -= cb * tab_[i][j];
        }
        return {std::move(red), std::move(val)};
    }

    void pivot(int pr, int pc) {
        Rat inv = 1 / tab_[pr][pc];
        for (int j = 0; j < ncols_; ++j)
            if (tab_[pr][j] != 0) tab_[pr][j] *= inv;
        rhs_[pr] *= inv;
        tab_[pr][pc] = 1;
        for (int i = 0; i < m_; ++i) {
            if (i == pr) continue;
            Rat f = tab_[i][pc];
            if (f == 0) continue;
            for (int j = 0; j < ncols_; ++j)
                if (tab_[pr][j] != 0) tab_[i][j] -= f * tab_[pr][j];
            rhs_[i] -= f * rhs_[pr];
            tab_[i][pc] = 0;
        }
        basis_[pr] = pc;
        ++pivots_;
    }

    bool column_allowed(int j, bool phase1) const {
        if (!phase1 && j >= first_artif_) return false;  // artificials never re-enter
        return true;
    }

    std::pair<LpStatus, Rat> optimize(const std::vector<Rat>& c, size_t pivot_cap, bool phase1) {
        size_t stale = 0;  // pivots since last objective improvement
        bool bland = false;
        auto [red, val] = reduced(c);
        Rat obj = std::move(val);
        for (;;) {
            if (pivots_ > pivot_cap) throw std::runtime_error("simplex: pivot cap exceeded");
            int enter = -1;
            if (!bland) {
                Rat best(0);
                for (int j = 0; j < ncols_; ++j)
                    if (column_allowed(j, phase1) && red[j] < best) {
                        best = red[j];
                        enter = j;
                    }
            } else {
                for (int j = 0; j < ncols_; ++j)
                    if (column_allowed(j, phase1) && red[j] < 0) {
                        enter = j;
                        break;
                    }
            }
            if (enter < 0) return {LpStatus::OPTIMAL, objective_value(c)};
            int leave = -1;
            Rat best_ratio(0);
            for (int i = 0; i < m_; ++i) {
                if (tab_[i][enter] <= 0) continue;
                Rat ratio = rhs_[i] / tab_[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return {LpStatus::UNBOUNDED, Rat(0)};
            pivot(leave, enter);
            // update reduced costs incrementally
            Rat re = red[enter];
            if (re != 0) {
                for (int j = 0; j < ncols_; ++j)
                    if (tab_[leave][j] != 0) red[j] -= re * tab_[leave][j];
                red[enter] = 0;
            }
            Rat nobj = objective_value(c);
            if (nobj < obj) {
                obj = nobj;
                stale = 0;
            } else {
                ++stale;
                if (!bland && stale > static_cast<size_t>(2 * (m_ + ncols_) + 16)) bland = true;
            }
        }
    }

    Rat objective_value(const std::vector<Rat>& c) const {
        Rat v(0);
        for (int i = 0; i < m_; ++i)
            if (c[basis_[i]] != 0) v += c[basis_[i]] * rhs_[i];
        return v;
    }

    // After phase 1 reaches 0, pivot basic artificials out or drop their rows.
    void evict_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < first_artif_) continue;
            int pc = -1;
            for (int j = 0; j < first_artif_; ++j)
                if (tab_[i][j] != 0) {
                    pc = j;
                    break;
                }
            if (pc >= 0) {
                pivot(i, pc);
            } else {
                // redundant row; neutralize it
                for (int j = 0; j < ncols_; ++j) tab_[i][j] = 0;
                rhs_[i] = 0;
                tab_[i][basis_[i]] = 1;  // keep the artificial basic at value 0, row is inert
            }
        }
    }

    const std::vector<Variable>& vars_;
    int nvars_, m_ = 0, nslack_ = 0, nartif_ = 0, ncols_ = 0, first_artif_ = 0;
    std::vector<std::vector<Rat>> tab_;
    std::vector<Rat> rhs_;
    std::vector<int> basis_;
    std::vector<Rat> cost_;
    Rat obj_shift_;
    size_t pivots_ = 0;
};

}  // namespace detail

class LinearProgram {
public:
    int add_variable(const std::string& name, Rat lo = Rat(0), Rat hi = Rat(1)) {
        vars_.push_back({name, std::move(lo), std::move(hi), true});
        objective_.push_back(Rat(0));
        return static_cast<int>(vars_.size()) - 1;
    }
    int add_variable_unbounded(const std::string& name, Rat lo = Rat(0)) {
        vars_.push_back({name, std::move(lo), Rat(0), false});
        objective_.push_back(Rat(0));
        return static_cast<int>(vars_.size()) - 1;
    }
    void set_bounds(int var, Rat lo, Rat hi) {
        vars_[var].lo = std::move(lo);
        vars_[var].hi = std::move(hi);
        vars_[var].hi_finite = true;
    }
    void set_objective(int var, Rat coeff) { objective_[var] = std::move(coeff); }

    void add_row(LinRow row) {
        if (!row_names_.insert(row.name).second) return;  // permanent within the session
        rows_.push_back(std::move(row));
    }
    void add_family(RowFamily family) { families_.push_back(std::move(family)); }

    int num_vars() const { return static_cast<int>(vars_.size()); }
    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<LinRow>& rows() const { return rows_; }
    const std::vector<RowFamily>& families() const { return families_; }

    // solve -> separate -> add-row loop until every callback is satisfied.
    LpResult solve(size_t max_rounds = 10000, size_t pivot_cap = 2000000) {
        LpResult result;
        for (size_t round = 0; round < max_rounds; ++round) {
            detail::SimplexTableau tab(vars_, objective_, rows_);
            auto out = tab.run(pivot_cap);
            result.pivots += out.pivots;
            if (out.status != LpStatus::OPTIMAL) {
                result.status = out.status;
                return result;
            }
            size_t added = 0;
            for (const auto& fam : families_) {
                for (auto& row : fam.separate(out.x)) {
                    size_t before = rows_.size();
                    add_row(std::move(row));
                    if (rows_.size() > before) ++added;
                }
            }
            if (added == 0) {
                result.status = LpStatus::OPTIMAL;
                result.x = std::move(out.x);
                result.objective = std::move(out.objective);
                result.generated_rows = rows_.size();
                return result;
            }
        }
        throw std::runtime_error("LinearProgram::solve: separation did not converge");
    }

    // Exact feasibility w.r.t. bounds, explicit rows and all families.
    bool feasible(const std::vector<Rat>& x) const {
        for (int j = 0; j < num_vars(); ++j) {
            if (x[j] < vars_[j].lo) return false;
            if (vars_[j].hi_finite && x[j] > vars_[j].hi) return false;
        }
        for (const auto& r : rows_)
            if (!r.satisfied(x)) return false;
        for (const auto& fam : families_)
            if (!fam.separate(x).empty()) return false;
        return true;
    }

    // Explicit rows plus every enumerable family row. Throws if a family lacks
    // an enumerator (exact face computations need the whole family).
    std::vector<LinRow> all_rows() const {
        std::vector<LinRow> out = rows_;
        for (const auto& fam : families_) {
            if (!fam.enumerate) throw std::logic_error("LinearProgram: family not enumerable");
            fam.enumerate([&](const LinRow& r) { out.push_back(r); });
        }
        return out;
    }

    std::string dump() const {
        std::ostringstream os;
        os << "min";
        for (int j = 0; j < num_vars(); ++j)
            if (objective_[j] != 0) os << " + " << rat_str(objective_[j]) << "*" << vars_[j].name;
        os << "\nsubject to\n";
        for (const auto& r : rows_) {
            os << "  " << r.name << ":";
            for (const auto& [j, a] : r.terms) os << " + " << rat_str(a) << "*" << vars_[j].name;
            os << (r.cmp == Cmp::LE ? " <= " : r.cmp == Cmp::GE ? " >= " : " = ") << rat_str(r.rhs) << "\n";
        }
        for (const auto& v : vars_) {
            os << "  " << rat_str(v.lo) << " <= " << v.name;
            if (v.hi_finite) os << " <= " << rat_str(v.hi);
            os << "\n";
        }
        return os.str();
    }

private:
    std::vector<Variable> vars_;
    std::vector<Rat> objective_;
    std::vector<LinRow> rows_;
    std::vector<RowFamily> families_;
    std::set<std::string> row_names_;
};

// Convex combination of extreme points with exact weights summing to 1.
struct ConvexCombination {
    std::vector<std::pair<std::vector<Rat>, Rat>> terms;

    std::vector<Rat> reconstruct() const {
        if (terms.empty()) return {};
        std::vector<Rat> s(terms[0].first.size(), Rat(0));
        for (const auto& [z, w] : terms)
            for (size_t j = 0; j < z.size(); ++j) s[j] += w * z[j];
        return s;
    }
    Rat total_weight() const {
        Rat s(0);
        for (const auto& [z, w] : terms) s += w;
        return s;
    }
};

namespace detail {

// Rank of the span of the given coefficient vectors (exact Gaussian elimination).
inline int rat_rank(std::vector<std::vector<Rat>> mat) {
    int rank = 0;
    int n = mat.empty() ? 0 : static_cast<int>(mat[0].size());
    for (int col = 0; col < n && rank < static_cast<int>(mat.size()); ++col) {
        int piv = -1;
        for (int i = rank; i < static_cast<int>(mat.size()); ++i)
            if (mat[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(mat[rank], mat[piv]);
        for (int i = 0; i < static_cast<int>(mat.size()); ++i) {
            if (i == rank || mat[i][col] == 0) continue;
            Rat f = mat[i][col] / mat[rank][col];
            for (int j = col; j < n; ++j) mat[i][j] -= f * mat[rank][j];
        }
        ++rank;
    }
    return rank;
}

// Greedily selects a maximal independent subset of the rows (by index).
inline std::vector<size_t> independent_subset(const std::vector<std::vector<Rat>>& rows) {
    std::vector<size_t> chosen;
    std::vector<std::vector<Rat>> basis;
    for (size_t i = 0; i < rows.size(); ++i) {
        basis.push_back(rows[i]);
        if (rat_rank(basis) == static_cast<int>(basis.size()))
            chosen.push_back(i);
        else
            basis.pop_back();
    }
    return chosen;
}

}  // namespace detail

// Decomposes feasible x into a convex combination of extreme points of the
// polytope described by lp (bounds, rows, enumerable families):
// find an extreme point z of the minimal face containing x, then follow the
// ray from z through x to the farthest feasible point and recurse on it. The
// face dimension drops every step, so at most dim+1 terms are produced.
inline ConvexCombination caratheodory_decompose(const LinearProgram& lp, const std::vector<Rat>& x0,
                                                size_t max_terms, std::uint64_t seed) {
    const int n = lp.num_vars();
    if (static_cast<int>(x0.size()) != n) throw std::invalid_argument("caratheodory: dimension mismatch");
    if (!lp.feasible(x0)) throw std::invalid_argument("caratheodory: point not feasible");

    std::vector<LinRow> family_rows = lp.all_rows();
    RandomStream rng(derive_stream_seed(seed, 0xCADECADEULL));

    ConvexCombination comb;
    std::vector<Rat> x = x0;
    Rat mass(1);
    for (size_t iter = 0;; ++iter) {
        if (iter >= max_terms)
            throw std::logic_error("caratheodory: max_terms exceeded (tight-row count failed to grow)");

        // coefficient vectors of everything tight at x
        std::vector<std::vector<Rat>> tight_vecs;
        std::vector<size_t> tight_rows;
        for (size_t i = 0; i < family_rows.size(); ++i) {
            const auto& r = family_rows[i];
            if (r.cmp == Cmp::EQ || r.tight(x)) {
                std::vector<Rat> vec(n, Rat(0));
                for (const auto& [j, a] : r.terms) vec[j] += a;
                tight_vecs.push_back(std::move(vec));
                tight_rows.push_back(i);
            }
        }
        size_t nrow_tight = tight_vecs.size();
        std::vector<int> pinned;
        for (int j = 0; j < n; ++j) {
            const auto& v = lp.variables()[j];
            if (x[j] == v.lo || (v.hi_finite && x[j] == v.hi)) {
                std::vector<Rat> vec(n, Rat(0));
                vec[j] = 1;
                tight_vecs.push_back(std::move(vec));
                pinned.push_back(j);
            }
        }
        if (detail::rat_rank(tight_vecs) == n) {  // x is itself an extreme point
            comb.terms.emplace_back(x, mass);
            break;
        }

        // extreme point of the minimal face: generic objective, tight rows as equalities
        LinearProgram face;
        for (int j = 0; j < n; ++j) {
            const auto& v = lp.variables()[j];
            if (v.hi_finite)
                face.add_variable(v.name, v.lo, v.hi);
            else
                face.add_variable_unbounded(v.name, v.lo);
        }
        for (int j : pinned) face.set_bounds(j, x[j], x[j]);
        for (const auto& r : lp.rows()) face.add_row(r);
        auto sub = std::vector<std::vector<Rat>>(tight_vecs.begin(), tight_vecs.begin() + nrow_tight);
        for (size_t k : detail::independent_subset(sub)) {
            LinRow eq = family_rows[tight_rows[k]];
            eq.name = "face:" + eq.name;
            eq.cmp = Cmp::EQ;
            eq.rhs = family_rows[tight_rows[k]].rhs;
            face.add_row(std::move(eq));
        }
        for (const auto& fam : lp.families()) face.add_family(fam);
        for (int j = 0; j < n; ++j)
            face.set_objective(j, Rat(static_cast<long>(1 + rng.next_u64() % 1000003)) *
                                      (rng.next_u64() % 2 == 0 ? 1 : -1));
        auto res = face.solve();
        if (res.status != LpStatus::OPTIMAL) throw std::logic_error("caratheodory: face LP not optimal");
        std::vector<Rat> z = std::move(res.x);
        if (z == x) {
            comb.terms.emplace_back(x, mass);
            break;
        }

        // farthest feasible point on the ray z + t*(x-z), t >= 1
        std::vector<Rat> d(n);
        for (int j = 0; j < n; ++j) d[j] = x[j] - z[j];
        std::optional<Rat> tmax;
        auto limit = [&](const Rat& slack, const Rat& rate) {
            // constraint violated when t exceeds slack/rate (rate > 0)
            Rat t = slack / rate;
            if (!tmax || t < *tmax) tmax = t;
        };
        for (const auto& r : family_rows) {
            Rat az = r.eval(z);
            Rat ad(0);
            for (const auto& [j, a] : r.terms) ad += a * d[j];
            if (r.cmp == Cmp::GE && ad < 0) limit(az - r.rhs, -ad);
            if (r.cmp == Cmp::LE && ad > 0) limit(r.rhs - az, ad);
            // EQ rows: both endpoints satisfy them, so ad == 0
        }
        for (int j = 0; j < n; ++j) {
            const auto& v = lp.variables()[j];
            if (d[j] < 0) limit(z[j] - v.lo, -d[j]);
            if (d[j] > 0 && v.hi_finite) limit(v.hi - z[j], d[j]);
        }
        if (!tmax) throw std::logic_error("caratheodory: unbounded ray in a polytope");
        if (*tmax <= 1) throw std::logic_error("caratheodory: no progress along ray (face logic error)");
        Rat t = *tmax;
        std::vector<Rat> y(n);
        for (int j = 0; j < n; ++j) y[j] = z[j] + t * d[j];
        Rat inv_t = 1 / t;
        comb.terms.emplace_back(std::move(z), mass * (1 - inv_t));
        mass *= inv_t;
        x = std::move(y);
    }
    return comb;
}

// z_i with probability lambda_i, exactly.
inline const std::vector<Rat>& sample_extreme(const ConvexCombination& comb, RandomStream& rng) {
    if (comb.terms.empty()) throw std::invalid_argument("sample_extreme: empty combination");
    std::vector<Rat> weights;
    weights.reserve(comb.terms.size());
    for (const auto& [z, w] : comb.terms) weights.push_back(w);
    return comb.terms[rng.categorical(weights)].first;
}

}  // namespace degnet
