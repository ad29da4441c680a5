#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "si2e/encoding_tree.hpp"
#include "si2e/graph.hpp"
#include "si2e/joint.hpp"
#include "si2e/rng.hpp"

using si2e::EncodingTree;
using si2e::OptimizeMode;
using si2e::WeightedGraph;

namespace {

// Exhaustive two-layer optimum for small graphs: try every set partition.
double brute_force_minimum(const WeightedGraph& g) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& groups : testutil::all_partitions(g.vertex_count())) {
        const EncodingTree t = EncodingTree::from_partition(g, groups);
        best = std::min(best, si2e::structural_entropy(g, t));
    }
    return best;
}

double shannon_of_degrees(const WeightedGraph& g) {
    double h = 0.0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        const double p = g.degree(v) / g.volume();
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

TEST_CASE("single edge carries one bit") {
    const WeightedGraph g(2, {{0, 1, 1.0}});
    const EncodingTree t = EncodingTree::one_layer(g);
    CHECK(t.node_count() == 3);
    CHECK(t.height() == 1);
    CHECK(t.node(1).vertices == std::vector<int>{0});
    CHECK(t.node(2).vertices == std::vector<int>{1});
    CHECK(si2e::structural_entropy(g, t) == 1.0);
    CHECK(t.to_text().substr(0, t.to_text().find('\n')) == "0 0,1 0 2");
}

TEST_CASE("triangle carries log2 3 bits") {
    const WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    const double h = si2e::structural_entropy(g, EncodingTree::one_layer(g));
    CHECK(h == doctest::Approx(1.5849625007211561).epsilon(1e-14));
}

TEST_CASE("one-layer entropy is the degree-distribution entropy") {
    si2e::Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const WeightedGraph g = testutil::random_graph(rng, rng.uniform_int(2, 12), 0.6);
        const double h = si2e::structural_entropy(g, EncodingTree::one_layer(g));
        CHECK(h == doctest::Approx(shannon_of_degrees(g)).epsilon(1e-12));
    }
}

TEST_CASE("zero-volume graphs are rejected") {
    const WeightedGraph g(2, {{0, 1, 0.0}});
    CHECK_THROWS_AS(EncodingTree::one_layer(g), std::invalid_argument);
    CHECK_THROWS_AS(EncodingTree::from_partition(g, {{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(si2e::optimize_two_layer(g, OptimizeMode::community), std::invalid_argument);
}

TEST_CASE("partition trees are canonical") {
    const WeightedGraph g(4, {{0, 1, 1.0}, {2, 3, 1.0}, {1, 2, 0.25}});
    const EncodingTree a = EncodingTree::from_partition(g, {{2, 3}, {1, 0}});
    const EncodingTree b = EncodingTree::from_partition(g, {{0, 1}, {2, 3}});
    CHECK(a == b);
    CHECK(a.root_partition() == std::vector<std::vector<int>>{{0, 1}, {2, 3}});
    a.validate_against(g);
}

TEST_CASE("partition input is validated") {
    const WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK_THROWS_AS(EncodingTree::from_partition(g, {{0, 1}}), std::invalid_argument);           // 2 missing
    CHECK_THROWS_AS(EncodingTree::from_partition(g, {{0, 1}, {1, 2}}), std::invalid_argument);   // 1 twice
    CHECK_THROWS_AS(EncodingTree::from_partition(g, {{0, 1}, {2, 3}}), std::invalid_argument);   // 3 out of range
    CHECK_THROWS_AS(EncodingTree::from_partition(g, {{0, 1, 2}, {}}), std::invalid_argument);    // empty group
}

TEST_CASE("wrapping singletons changes shape but not entropy") {
    const WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 0.5}, {0, 0, 0.25}});
    const EncodingTree bare = EncodingTree::from_partition(g, {{0}, {1, 2}}, false);
    const EncodingTree wrapped = EncodingTree::from_partition(g, {{0}, {1, 2}}, true);
    CHECK(bare.node_count() + 1 == wrapped.node_count());
    CHECK(bare.height() == 2);
    CHECK(wrapped.height() == 2);
    bare.validate_against(g);
    wrapped.validate_against(g);
    // the singleton's boundary term moves from its leaf to the wrapper node
    CHECK(si2e::structural_entropy(g, bare) ==
          doctest::Approx(si2e::structural_entropy(g, wrapped)).epsilon(1e-12));
}

TEST_CASE("validation catches stale caches and wrong graphs") {
    const WeightedGraph g(2, {{0, 1, 1.0}});
    const WeightedGraph heavier(2, {{0, 1, 2.0}});
    const WeightedGraph bigger(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const EncodingTree t = EncodingTree::one_layer(g);
    CHECK_THROWS_AS(t.validate_against(heavier), std::invalid_argument);
    CHECK_THROWS_AS(si2e::structural_entropy(bigger, t), std::invalid_argument);
}

TEST_CASE("two disjoint edges collapse from two bits to one") {
    const WeightedGraph g(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    const EncodingTree flat = EncodingTree::one_layer(g);
    CHECK(si2e::structural_entropy(g, flat) == 2.0);

    // merging one pair saves exactly half a bit
    CHECK(si2e::stretch_delta(g, flat, 1, 2) == doctest::Approx(0.5).epsilon(1e-14));
    const EncodingTree once = si2e::apply_stretch(g, flat, 1, 2);
    once.validate_against(g);
    CHECK(si2e::structural_entropy(g, once) == doctest::Approx(1.5).epsilon(1e-14));

    const EncodingTree best = si2e::optimize_two_layer(g, OptimizeMode::community);
    CHECK(best.root_partition() == std::vector<std::vector<int>>{{0, 1}, {2, 3}});
    CHECK(si2e::structural_entropy(g, best) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stretch delta equals the entropy difference") {
    si2e::Rng rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        const WeightedGraph g = testutil::random_graph(rng, rng.uniform_int(3, 10), 0.7);
        EncodingTree t = EncodingTree::one_layer(g);
        // walk a few random merges, checking the reported delta at each step
        for (int round = 0; round < 3; ++round) {
            const auto& kids = t.root_children();
            if (kids.size() < 2) break;
            const int a = kids[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(kids.size()) - 1))];
            int b = a;
            while (b == a)
                b = kids[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(kids.size()) - 1))];
            const double before = si2e::structural_entropy(g, t);
            const double delta = si2e::stretch_delta(g, t, a, b);
            t = si2e::apply_stretch(g, t, a, b);
            t.validate_against(g);
            const double after = si2e::structural_entropy(g, t);
            CHECK(delta == doctest::Approx(before - after).epsilon(1e-10));
        }
    }
}

TEST_CASE("stretch rejects bad node pairs") {
    const WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const EncodingTree t = EncodingTree::one_layer(g);
    CHECK_THROWS_AS(si2e::stretch_delta(g, t, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(si2e::stretch_delta(g, t, 0, 1), std::invalid_argument);  // root is not a child
    CHECK_THROWS_AS(si2e::stretch_delta(g, t, 1, 9), std::invalid_argument);
}

TEST_CASE("greedy optimization never loses to the flat tree") {
    si2e::Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const WeightedGraph g = testutil::random_graph(rng, rng.uniform_int(2, 11), 0.5);
        const double flat = si2e::structural_entropy(g, EncodingTree::one_layer(g));
        for (const OptimizeMode mode : {OptimizeMode::matching, OptimizeMode::community}) {
            const EncodingTree t = si2e::optimize_two_layer(g, mode);
            t.validate_against(g);
            CHECK(si2e::structural_entropy(g, t) <= flat + 1e-12);
        }
    }
}

TEST_CASE("greedy optimization respects the exhaustive lower bound") {
    si2e::Rng rng(43);
    for (int trial = 0; trial < 12; ++trial) {
        const WeightedGraph g = testutil::random_graph(rng, rng.uniform_int(3, 7), 0.8);
        const double greedy =
            si2e::structural_entropy(g, si2e::optimize_two_layer(g, OptimizeMode::community));
        CHECK(greedy >= brute_force_minimum(g) - 1e-12);
    }
}

TEST_CASE("two loose triangles are recovered as communities") {
    const WeightedGraph g(6, {{0, 1, 1.0},
                              {1, 2, 1.0},
                              {0, 2, 1.0},
                              {3, 4, 1.0},
                              {4, 5, 1.0},
                              {3, 5, 1.0},
                              {2, 3, 0.1}});
    const EncodingTree t = si2e::optimize_two_layer(g, OptimizeMode::community);
    CHECK(t.root_partition() == std::vector<std::vector<int>>{{0, 1, 2}, {3, 4, 5}});
    CHECK(si2e::structural_entropy(g, t) == doctest::Approx(brute_force_minimum(g)).epsilon(1e-12));
}

TEST_CASE("matching mode pairs only connected leaves") {
    si2e::Rng rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const WeightedGraph g = testutil::random_graph(rng, rng.uniform_int(2, 10), 0.4);
        const EncodingTree t = si2e::optimize_two_layer(g, OptimizeMode::matching);
        t.validate_against(g);
        for (const int child : t.root_children()) {
            if (t.is_leaf(child)) continue;
            const auto& nd = t.node(child);
            REQUIRE(nd.children.size() == 2);
            CHECK(t.is_leaf(nd.children[0]));
            CHECK(t.is_leaf(nd.children[1]));
            REQUIRE(nd.vertices.size() == 2);
            CHECK(g.weight_between(nd.vertices[0], nd.vertices[1]) > 0.0);
        }
    }
}

TEST_CASE("matching recovers the diagonal pairing of a near-diagonal table") {
    const si2e::JointDistribution j({{0.4, 0.05}, {0.05, 0.5}});
    const WeightedGraph g = si2e::bipartite_from_joint(j);
    const EncodingTree t = si2e::optimize_two_layer(g, OptimizeMode::matching);
    CHECK(t.root_partition() == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
}

TEST_CASE("index matching tree pairs x_i with y_i") {
    const si2e::JointDistribution j({{0.4, 0.1}, {0.1, 0.4}});
    const WeightedGraph g = si2e::bipartite_from_joint(j);
    const EncodingTree t = si2e::identity_matching_tree(g, 2);
    t.validate_against(g);
    CHECK(t.root_partition() == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
    CHECK_THROWS_AS(si2e::identity_matching_tree(g, 1), std::invalid_argument);
}

TEST_CASE("shift transform re-pairs the matching cyclically") {
    si2e::Rng rng(53);
    const si2e::JointDistribution j(testutil::random_joint_table(rng, 3, 3));
    const WeightedGraph g = si2e::bipartite_from_joint(j);
    const EncodingTree base = si2e::identity_matching_tree(g, 3);
    CHECK(si2e::l_transform(g, base, 0) == base);
    CHECK(si2e::l_transform(g, base, 3) == base);  // full wrap
    const EncodingTree shifted = si2e::l_transform(g, base, 1);
    shifted.validate_against(g);
    // node paired with y_i now holds x_{i+1 mod 3}
    CHECK(shifted.root_partition() == std::vector<std::vector<int>>{{0, 5}, {1, 3}, {2, 4}});
    CHECK_THROWS_AS(si2e::l_transform(g, base, -1), std::invalid_argument);
    const EncodingTree flat = EncodingTree::one_layer(g);
    CHECK_THROWS_AS(si2e::l_transform(g, flat, 1), std::invalid_argument);
}
