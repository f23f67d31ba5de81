// Partitions of small vertex sets with the lattice operations the reduction
// needs: refinement, join, restriction, and connected components of an edge
// set. Elements absent from a partition's ground set are treated as
// singletons, which extends every operation across mismatched grounds.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "degnet/graph.hpp"

namespace degnet {

class Partition {
public:
    Partition() = default;

    static Partition discrete(std::vector<int> ground) {
        Partition p;
        std::sort(ground.begin(), ground.end());
        ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
        p.ground_ = std::move(ground);
        p.block_.resize(p.ground_.size());
        for (size_t i = 0; i < p.block_.size(); ++i) p.block_[i] = static_cast<int>(i);
        return p;
    }

    static Partition from_blocks(const std::vector<std::vector<int>>& blocks) {
        std::vector<int> ground;
        for (const auto& b : blocks) ground.insert(ground.end(), b.begin(), b.end());
        Partition p = discrete(ground);
        for (size_t bi = 0; bi < blocks.size(); ++bi)
            for (size_t j = 1; j < blocks[bi].size(); ++j)
                p.block_[p.index_of(blocks[bi][j])] = p.block_[p.index_of(blocks[bi][0])];
        p.canonicalize();
        return p;
    }

    const std::vector<int>& ground() const { return ground_; }
    bool contains(int v) const { return std::binary_search(ground_.begin(), ground_.end(), v); }

    // Same-block test with the singleton convention for absent elements.
    bool same_block(int u, int v) const {
        if (u == v) return true;
        if (!contains(u) || !contains(v)) return false;
        return block_[index_of(u)] == block_[index_of(v)];
    }

    size_t num_blocks() const {
        int mx = -1;
        for (int b : block_) mx = std::max(mx, b);
        return static_cast<size_t>(mx + 1);
    }

    std::vector<std::vector<int>> blocks() const {
        std::vector<std::vector<int>> out(num_blocks());
        for (size_t i = 0; i < ground_.size(); ++i) out[block_[i]].push_back(ground_[i]);
        return out;
    }

    Partition restrict_to(const std::vector<int>& X) const {
        Partition p = discrete(X);
        for (size_t i = 0; i < p.ground_.size(); ++i)
            for (size_t j = 0; j < i; ++j)
                if (same_block(p.ground_[j], p.ground_[i])) {
                    p.block_[i] = p.block_[j];
                    break;
                }
        p.canonicalize();
        return p;
    }

    bool operator==(const Partition& o) const { return ground_ == o.ground_ && block_ == o.block_; }
    bool operator!=(const Partition& o) const { return !(*this == o); }
    bool operator<(const Partition& o) const {
        return ground_ != o.ground_ ? ground_ < o.ground_ : block_ < o.block_;
    }

    // stable text key for hashing labels
    std::string key() const {
        std::string s;
        for (size_t i = 0; i < ground_.size(); ++i) {
            s += std::to_string(ground_[i]);
            s += ':';
            s += std::to_string(block_[i]);
            s += ';';
        }
        return s;
    }

private:
    friend bool partition_refines(const Partition&, const Partition&);
    friend Partition partition_join(const Partition&, const Partition&);

    size_t index_of(int v) const {
        return static_cast<size_t>(std::lower_bound(ground_.begin(), ground_.end(), v) - ground_.begin());
    }

    void canonicalize() {  // renumber blocks by first occurrence
        std::map<int, int> seen;
        for (auto& b : block_) {
            auto it = seen.find(b);
            if (it == seen.end()) {
                int id = static_cast<int>(seen.size());
                seen[b] = id;
                b = id;
            } else {
                b = it->second;
            }
        }
    }

    std::vector<int> ground_;
    std::vector<int> block_;
};

// a <= b : same-block in a implies same-block in b (singleton convention).
inline bool partition_refines(const Partition& a, const Partition& b) {
    for (const auto& block : a.blocks())
        for (size_t j = 1; j < block.size(); ++j)
            if (!b.same_block(block[0], block[j])) return false;
    return true;
}

// Join: transitive closure of the same-block relations of both operands.
inline Partition partition_join(const Partition& a, const Partition& b) {
    std::vector<int> ground = a.ground();
    ground.insert(ground.end(), b.ground().begin(), b.ground().end());
    Partition p = Partition::discrete(std::move(ground));
    std::vector<int> uf(p.ground_.size());
    for (size_t i = 0; i < uf.size(); ++i) uf[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
    auto unite = [&](int u, int v) { uf[find(static_cast<int>(p.index_of(u)))] = find(static_cast<int>(p.index_of(v))); };
    for (const Partition* part : {&a, &b})
        for (const auto& block : part->blocks())
            for (size_t j = 1; j < block.size(); ++j) unite(block[0], block[j]);
    for (size_t i = 0; i < uf.size(); ++i) p.block_[i] = find(static_cast<int>(i));
    p.canonicalize();
    return p;
}

// CC(F): partition of the vertices incident to F by connected components.
inline Partition connected_components(const Graph& g, const std::vector<int>& edge_ids) {
    std::vector<std::vector<int>> pairs;
    std::map<int, int> comp;  // incident vertex -> representative
    std::function<int(int)> find = [&](int v) { return comp[v] == v ? v : comp[v] = find(comp[v]); };
    for (int e : edge_ids) {
        int u = g.edges[e].u, v = g.edges[e].v;
        if (!comp.count(u)) comp[u] = u;
        if (!comp.count(v)) comp[v] = v;
        comp[find(u)] = find(v);
    }
    std::map<int, std::vector<int>> by_rep;
    for (const auto& [v, _] : comp) by_rep[find(v)].push_back(v);
    std::vector<std::vector<int>> blocks;
    for (auto& [rep, verts] : by_rep) blocks.push_back(std::move(verts));
    return Partition::from_blocks(blocks);
}

// All partitions of the ground set, by restricted growth strings.
inline std::vector<Partition> enumerate_partitions(std::vector<int> ground) {
    std::sort(ground.begin(), ground.end());
    ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
    std::vector<Partition> out;
    size_t n = ground.size();
    if (n == 0) {
        out.push_back(Partition::discrete({}));
        return out;
    }
    std::vector<int> rgs(n, 0);
    for (;;) {
        std::vector<std::vector<int>> blocks;
        for (size_t i = 0; i < n; ++i) {
            if (rgs[i] >= static_cast<int>(blocks.size())) blocks.emplace_back();
            blocks[rgs[i]].push_back(ground[i]);
        }
        out.push_back(Partition::from_blocks(blocks));
        // next restricted growth string
        int i = static_cast<int>(n) - 1;
        for (; i > 0; --i) {
            int mx = 0;
            for (int j = 0; j < i; ++j) mx = std::max(mx, rgs[j]);
            if (rgs[i] <= mx) {
                ++rgs[i];
                for (size_t j = i + 1; j < n; ++j) rgs[j] = 0;
                break;
            }
        }
        if (i == 0) break;
    }
    return out;
}

}  // namespace degnet
