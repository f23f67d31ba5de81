#include <catch2/catch_amalgamated.hpp>

#include "degnet/oracles.hpp"
#include "degnet/treelabel.hpp"

using namespace degnet;

namespace {

// The worked construction example: root with children a and b; a has children
// c and d. Labels: root {1,2,3}, a {4,5}, b {6,7}, c {9,10}, d {11,12}.
// Triples at the root with first coordinate 1: (1,4,6), (1,5,6), (1,5,7);
// at a with first coordinate 5: (5,9,11), (5,9,12), (5,10,11).
LabelTreeInstance figure_instance() {
    LabelTreeInstance inst;
    int r = inst.add_node(-1);
    int a = inst.add_node(r);
    int b = inst.add_node(r);
    int c = inst.add_node(a);
    int d = inst.add_node(a);
    (void)b;
    (void)c;
    (void)d;
    int l1 = inst.add_label(r, "1"), l2 = inst.add_label(r, "2"), l3 = inst.add_label(r, "3");
    int l4 = inst.add_label(a, "4"), l5 = inst.add_label(a, "5");
    int l6 = inst.add_label(b, "6"), l7 = inst.add_label(b, "7");
    int l9 = inst.add_label(c, "9"), l10 = inst.add_label(c, "10");
    int l11 = inst.add_label(d, "11"), l12 = inst.add_label(d, "12");
    (void)l2;
    (void)l3;
    inst.gamma[r] = {{l1, l4, l6}, {l1, l5, l6}, {l1, l5, l7}};
    inst.gamma[a] = {{l4, l9, l11}, {l5, l9, l11}, {l5, l9, l12}, {l5, l10, l11}};
    inst.costs.clear();
    return inst;
}

int find_root_child_with_label(const SuperTree& st, const LabelTreeInstance& inst, const std::string& name) {
    for (int c : st.nodes[st.root()].children)
        if (st.nodes[c].label >= 0 && inst.label_names[st.nodes[c].label] == name) return c;
    return -1;
}

}  // namespace

TEST_CASE("super-tree of the figure instance matches the worked example") {
    auto inst = figure_instance();
    auto st = build_supertree(inst);
    // labels 2 and 3 have no consistency tuples, so their branches are pruned
    CHECK(find_root_child_with_label(st, inst, "1") >= 0);
    CHECK(find_root_child_with_label(st, inst, "2") < 0);

    int sel1 = find_root_child_with_label(st, inst, "1");
    REQUIRE(sel1 >= 0);
    CHECK(st.nodes[sel1].kind == SuperTree::Kind::Selector);
    REQUIRE(st.nodes[sel1].children.size() == 3);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int cop : st.nodes[sel1].children) {
        CHECK(st.nodes[cop].kind == SuperTree::Kind::Copier);
        REQUIRE(st.nodes[cop].children.size() == 2);
        pairs.push_back({inst.label_names[st.nodes[st.nodes[cop].children[0]].label],
                         inst.label_names[st.nodes[st.nodes[cop].children[1]].label]});
    }
    CHECK(pairs == std::vector<std::pair<std::string, std::string>>{{"4", "6"}, {"5", "6"}, {"5", "7"}});

    // under the (a, 5) selectors: copier pairs (9,11), (9,12), (10,11)
    for (int cop : st.nodes[sel1].children) {
        for (int q : st.nodes[cop].children) {
            if (inst.label_names[st.nodes[q].label] != "5") continue;
            REQUIRE(st.nodes[q].children.size() == 3);
            std::vector<std::pair<std::string, std::string>> sub;
            for (int cop2 : st.nodes[q].children)
                sub.push_back({inst.label_names[st.nodes[st.nodes[cop2].children[0]].label],
                               inst.label_names[st.nodes[st.nodes[cop2].children[1]].label]});
            CHECK(sub == std::vector<std::pair<std::string, std::string>>{{"9", "11"}, {"9", "12"}, {"10", "11"}});
        }
    }
}

TEST_CASE("single-node tree gives a root plus one leaf") {
    LabelTreeInstance inst;
    int r = inst.add_node(-1);
    inst.add_label(r, "a");
    auto st = build_supertree(inst);
    REQUIRE(st.size() == 2);
    CHECK(st.nodes[0].kind == SuperTree::Kind::Selector);
    CHECK(st.nodes[1].kind == SuperTree::Kind::Leaf);
}

TEST_CASE("complete consistency set yields |L_v| * |L_v2| copiers") {
    LabelTreeInstance inst;
    int r = inst.add_node(-1);
    int v = inst.add_node(r);
    int v2 = inst.add_node(r);
    int lr = inst.add_label(r);
    std::vector<int> lv, lw;
    for (int i = 0; i < 3; ++i) lv.push_back(inst.add_label(v));
    for (int i = 0; i < 2; ++i) lw.push_back(inst.add_label(v2));
    for (int a : lv)
        for (int b : lw) inst.gamma[r].push_back({lr, a, b});
    auto st = build_supertree(inst);
    int sel = st.nodes[st.root()].children[0];
    CHECK(st.nodes[sel].children.size() == 6);
}

TEST_CASE("unique valid labeling forces an integral LP point") {
    LabelTreeInstance inst;
    int r = inst.add_node(-1);
    int a = inst.add_node(r);
    int b = inst.add_node(r);
    int lr1 = inst.add_label(r), lr2 = inst.add_label(r);
    int la1 = inst.add_label(a), la2 = inst.add_label(a);
    int lb1 = inst.add_label(b), lb2 = inst.add_label(b);
    inst.gamma[r] = {{lr1, la1, lb1}, {lr2, la2, lb2}};
    // cost constraint kills the second branch
    inst.costs.assign(1, std::vector<Rat>(inst.num_labels(), Rat(0)));
    inst.costs[0][lr2] = 1;
    inst.costs[0][la2] = 1;
    auto brute = brute_labeling(inst);
    REQUIRE(brute.value.has_value());
    CHECK(brute.witness_labeling == std::vector<int>{lr1, la1, lb1});

    auto st = build_supertree(inst);
    auto frac = solve_fractional(st, inst);
    REQUIRE(frac.has_value());
    CHECK(fractional_feasible(st, inst, *frac));
    auto indicator = labeling_to_subtree(st, inst, brute.witness_labeling);
    for (size_t p = 0; p < st.size(); ++p) CHECK(frac->x[p] == (indicator[p] ? 1 : 0));
}

TEST_CASE("impossible group makes the LP infeasible") {
    auto inst = figure_instance();
    // group containing only label 2, whose branch cannot be completed
    inst.groups.push_back({1});
    auto st = build_supertree(inst);
    auto frac = solve_fractional(st, inst);
    CHECK_FALSE(frac.has_value());
    auto brute = brute_labeling(inst);
    CHECK_FALSE(brute.value.has_value());
}

TEST_CASE("instance without covering or cost constraints is feasible") {
    auto inst = figure_instance();
    auto st = build_supertree(inst);
    auto frac = solve_fractional(st, inst);
    REQUIRE(frac.has_value());
    CHECK(fractional_feasible(st, inst, *frac));
}

TEST_CASE("rounding splits a half-half selector evenly") {
    LabelTreeInstance inst;
    int r = inst.add_node(-1);
    inst.add_label(r, "x");
    inst.add_label(r, "y");
    auto st = build_supertree(inst);
    REQUIRE(st.size() == 3);
    FractionalSubtree frac;
    frac.x = {Rat(1), Rat(1, 2), Rat(1, 2)};
    RandomStream rng(5150);
    int first = 0;
    const int N = 10000;
    for (int i = 0; i < N; ++i) {
        auto in_tree = recursive_rounding(st, frac, rng);
        CHECK(subtree_consistent(st, in_tree));
        if (in_tree[1]) ++first;
    }
    CHECK(static_cast<double>(first) / N == Catch::Approx(0.5).margin(0.02));
}

TEST_CASE("round-trip between labelings and sub-trees is the identity") {
    auto inst = figure_instance();
    auto st = build_supertree(inst);
    auto brute = brute_labeling(inst);
    REQUIRE(brute.value.has_value());
    // enumerate all consistent labelings by brute force and round-trip each
    std::vector<int> idx(inst.n(), 0);
    size_t checked = 0;
    std::vector<int> labeling(inst.n());
    for (;;) {
        for (int u = 0; u < inst.n(); ++u) labeling[u] = inst.labels_of[u][idx[u]];
        if (inst.consistent(labeling)) {
            auto in_tree = labeling_to_subtree(st, inst, labeling);
            CHECK(subtree_consistent(st, in_tree));
            CHECK(to_labeling(st, inst, in_tree) == labeling);
            ++checked;
        }
        int u = inst.n() - 1;
        while (u >= 0 && ++idx[u] == static_cast<int>(inst.labels_of[u].size())) idx[u--] = 0;
        if (u < 0) break;
    }
    CHECK(checked >= 4);  // (1,4,6,9,11), (1,5,6,...), (1,5,7,...) families
}

TEST_CASE("sampled sub-trees correspond to consistent labelings with equal costs") {
    auto inst = figure_instance();
    inst.costs.assign(2, std::vector<Rat>(inst.num_labels(), Rat(0)));
    inst.costs[0][3] = Rat(1, 4);  // label 4
    inst.costs[0][4] = Rat(1, 8);  // label 5
    inst.costs[1][7] = Rat(1, 2);  // label 9
    auto st = build_supertree(inst);
    auto frac = solve_fractional(st, inst);
    REQUIRE(frac.has_value());
    RandomStream rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        auto in_tree = recursive_rounding(st, *frac, rng);
        auto labeling = to_labeling(st, inst, in_tree);
        CHECK(inst.consistent(labeling));
        for (int i = 0; i < 2; ++i)
            CHECK(subtree_cost(st, inst, i, in_tree) == inst.cost_of_labeling(i, labeling));
    }
}

TEST_CASE("alpha table recurrence and bound") {
    auto a3 = alpha_table(3);
    CHECK(a3[0] == 1.0 + 1.0 / 6.0);  // e^s in closed form
    auto a1 = alpha_table(1);
    CHECK(a1[1] == Catch::Approx(std::exp(0.5)).epsilon(1e-14));
    CHECK(a1[1] <= 2.0);  // 1 + 1/(2*1-1)
    for (int D = 1; D <= 10; ++D) CHECK(alpha_table_ok(D));
}

TEST_CASE("verify_guarantees passes on a covered instance") {
    auto inst = figure_instance();
    inst.groups.push_back({7, 8});   // labels "9" and "10": every labeling of c covers it
    inst.groups.push_back({4, 3});   // labels "5" and "4": every surviving root branch covers it
    inst.costs.assign(1, std::vector<Rat>(inst.num_labels(), Rat(0)));
    inst.costs[0][3] = Rat(1, 2);
    inst.costs[0][9] = Rat(1, 2);
    auto rep = verify_guarantees(inst, 800, 20260809);
    INFO("coverage " << rep.coverage_freq[0] << ", " << rep.coverage_freq[1]
                     << " exp moment " << rep.exp_moment[0] << " marginals "
                     << rep.max_marginal_sigmas);
    CHECK(rep.consistency_ok);
    CHECK(rep.costs_match);
    CHECK(rep.coverage_pass);
    CHECK(rep.concentration_pass);
    CHECK(rep.marginals_pass);
    CHECK(rep.alpha_ok);
    CHECK(rep.pass());
}

TEST_CASE("LP feasibility matches brute-force feasibility on random instances") {
    RandomStream rng(777);
    int agree_feasible = 0, agree_infeasible = 0;
    for (int trial = 0; trial < 40; ++trial) {
        LabelTreeInstance inst;
        int r = inst.add_node(-1);
        int a = inst.add_node(r);
        int b = inst.add_node(r);
        for (int u : {r, a, b})
            for (int i = 0; i < 2; ++i) inst.add_label(u);
        // random consistency tuples
        for (int lr : inst.labels_of[r])
            for (int la : inst.labels_of[a])
                for (int lb : inst.labels_of[b])
                    if (rng.next_u64() % 2) inst.gamma[r].push_back({lr, la, lb});
        if (inst.gamma[r].empty()) inst.gamma[r].push_back({inst.labels_of[r][0], inst.labels_of[a][0],
                                                            inst.labels_of[b][0]});
        // random group and cost table
        std::vector<int> group;
        for (int l = 0; l < inst.num_labels(); ++l)
            if (rng.next_u64() % 3 == 0) group.push_back(l);
        if (!group.empty()) inst.groups.push_back(group);
        inst.costs.assign(1, std::vector<Rat>(inst.num_labels(), Rat(0)));
        for (int l = 0; l < inst.num_labels(); ++l)
            inst.costs[0][l] = Rat(static_cast<long>(rng.next_u64() % 3), 4);

        auto brute = brute_labeling(inst);
        auto st = build_supertree(inst);
        auto frac = solve_fractional(st, inst);
        if (brute.value.has_value()) {
            INFO("trial " << trial);
            REQUIRE(frac.has_value());  // LP relaxes the integral problem
            CHECK(fractional_feasible(st, inst, *frac));
            ++agree_feasible;
        } else if (!frac.has_value()) {
            ++agree_infeasible;
        }
    }
    CHECK(agree_feasible + agree_infeasible >= 30);
    CHECK(agree_feasible >= 10);
}
