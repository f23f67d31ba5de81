#include <catch2/catch_amalgamated.hpp>

#include "degnet/partition.hpp"
#include "degnet/rng.hpp"

using namespace degnet;

TEST_CASE("refinement basics") {
    auto fine = Partition::from_blocks({{1}, {2}});
    auto coarse = Partition::from_blocks({{1, 2}});
    CHECK(partition_refines(fine, coarse));
    CHECK_FALSE(partition_refines(coarse, fine));
    CHECK(partition_refines(coarse, coarse));
}

TEST_CASE("refinement is reflexive on all partitions of 4 elements") {
    for (const auto& p : enumerate_partitions({0, 1, 2, 3})) CHECK(partition_refines(p, p));
}

TEST_CASE("join forces transitive closure") {
    auto a = Partition::from_blocks({{0, 1}, {2}});
    auto b = Partition::from_blocks({{1, 2}});
    auto j = partition_join(a, b);
    CHECK(j.same_block(0, 2));
    CHECK(j.num_blocks() == 1);
}

TEST_CASE("join is idempotent and commutative") {
    auto parts = enumerate_partitions({0, 1, 2, 3});
    for (const auto& p : parts) CHECK(partition_join(p, p) == p);
    RandomStream rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const auto& a = parts[rng.next_u64() % parts.size()];
        const auto& b = parts[rng.next_u64() % parts.size()];
        CHECK(partition_join(a, b) == partition_join(b, a));
    }
}

TEST_CASE("join of three partitions is order-independent (exhaustive, 4 elements)") {
    auto parts = enumerate_partitions({0, 1, 2, 3});
    RandomStream rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        const auto& a = parts[rng.next_u64() % parts.size()];
        const auto& b = parts[rng.next_u64() % parts.size()];
        const auto& c = parts[rng.next_u64() % parts.size()];
        auto abc = partition_join(partition_join(a, b), c);
        auto bca = partition_join(partition_join(b, c), a);
        auto cab = partition_join(partition_join(c, a), b);
        CHECK(abc == bca);
        CHECK(bca == cab);
    }
}

TEST_CASE("join handles mismatched ground sets via singletons") {
    auto a = Partition::from_blocks({{0, 1}});
    auto b = Partition::from_blocks({{2, 3}});
    auto j = partition_join(a, b);
    CHECK(j.ground() == std::vector<int>{0, 1, 2, 3});
    CHECK(j.same_block(0, 1));
    CHECK(j.same_block(2, 3));
    CHECK_FALSE(j.same_block(1, 2));
}

TEST_CASE("restriction to the full ground set is the identity") {
    auto parts = enumerate_partitions({0, 1, 2});
    for (const auto& p : parts) CHECK(p.restrict_to({0, 1, 2}) == p);
}

TEST_CASE("restriction drops absent elements") {
    auto p = Partition::from_blocks({{0, 1, 2}});
    auto r = p.restrict_to({0, 2});
    CHECK(r.ground() == std::vector<int>{0, 2});
    CHECK(r.same_block(0, 2));
}

TEST_CASE("restriction commutes with join against brute force (exhaustive, small)") {
    auto parts = enumerate_partitions({0, 1, 2, 3});
    std::vector<int> X{0, 2, 3};
    RandomStream rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const auto& a = parts[rng.next_u64() % parts.size()];
        const auto& b = parts[rng.next_u64() % parts.size()];
        auto joined = partition_join(a, b).restrict_to(X);
        // brute force: pairwise same-block via the join relation
        for (int u : X)
            for (int v : X) {
                bool expect = partition_join(a, b).same_block(u, v);
                CHECK(joined.same_block(u, v) == expect);
            }
    }
}

TEST_CASE("connected components of an edge set cover only incident vertices") {
    Graph g;
    for (int i = 0; i < 5; ++i) g.add_vertex();
    int e01 = g.add_edge(0, 1, 1);
    int e12 = g.add_edge(1, 2, 1);
    int e34 = g.add_edge(3, 4, 1);
    auto cc = connected_components(g, {e01, e12, e34});
    CHECK(cc.ground() == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(cc.same_block(0, 2));
    CHECK(cc.same_block(3, 4));
    CHECK_FALSE(cc.same_block(2, 3));
    auto cc_empty = connected_components(g, {});
    CHECK(cc_empty.ground().empty());
    // an empty-ground partition refines everything
    CHECK(partition_refines(cc_empty, cc));
}

TEST_CASE("partition enumeration counts Bell numbers") {
    CHECK(enumerate_partitions({}).size() == 1);
    CHECK(enumerate_partitions({7}).size() == 1);
    CHECK(enumerate_partitions({1, 2}).size() == 2);
    CHECK(enumerate_partitions({1, 2, 3}).size() == 5);
    CHECK(enumerate_partitions({1, 2, 3, 4}).size() == 15);
    CHECK(enumerate_partitions({1, 2, 3, 4, 5}).size() == 52);
}
