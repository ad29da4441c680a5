#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "si2e/exploration.hpp"
#include "si2e/rng.hpp"

using si2e::CentroidKind;
using si2e::CommunityAssignment;
using si2e::TransitionBatch;
using si2e::TransitionRecord;

namespace {

TransitionBatch make_batch(const std::vector<std::vector<double>>& embeddings,
                           const std::vector<double>& values) {
    std::vector<TransitionRecord> records(embeddings.size());
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        records[i].state = static_cast<int>(i);
        records[i].embedding = embeddings[i];
        records[i].value = values[i];
    }
    return TransitionBatch(std::move(records));
}

TransitionBatch random_batch(si2e::Rng& rng, int n, int dim) {
    std::vector<std::vector<double>> embeddings(static_cast<std::size_t>(n));
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int d = 0; d < dim; ++d) embeddings[static_cast<std::size_t>(i)].push_back(rng.uniform01() * 4.0);
        // quantized values so several records share one, exercising the communities
        values[static_cast<std::size_t>(i)] = rng.uniform_int(0, 4) / 4.0;
    }
    return make_batch(embeddings, values);
}

}  // namespace

TEST_CASE("knn entropy of a hand point set") {
    // nearest-neighbour distances {1, 1, 2}, doubled then averaged in log2
    const std::vector<std::vector<double>> pts = {{0.0}, {1.0}, {3.0}};
    CHECK(si2e::knn_entropy(pts, 1) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("knn entropy is translation invariant and scale covariant") {
    si2e::Rng rng(101);
    for (int dim = 1; dim <= 3; ++dim) {
        std::vector<std::vector<double>> pts(8);
        for (auto& p : pts)
            for (int d = 0; d < dim; ++d) p.push_back(rng.uniform01() * 3.0);
        const double h = si2e::knn_entropy(pts, 2);
        auto shifted = pts;
        for (auto& p : shifted)
            for (double& x : p) x += 17.5;
        CHECK(si2e::knn_entropy(shifted, 2) == doctest::Approx(h).epsilon(1e-12));
        auto scaled = pts;
        for (auto& p : scaled)
            for (double& x : p) x *= 8.0;
        CHECK(si2e::knn_entropy(scaled, 2) == doctest::Approx(h + dim * 3.0).epsilon(1e-9));
    }
}

TEST_CASE("knn entropy validates its input") {
    const std::vector<std::vector<double>> pts = {{0.0}, {1.0}};
    CHECK_THROWS_AS(si2e::knn_entropy(pts, 0), std::invalid_argument);
    CHECK_THROWS_AS(si2e::knn_entropy(pts, 2), std::invalid_argument);
    CHECK_THROWS_AS(si2e::knn_entropy({{0.0}, {}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(si2e::knn_entropy({{0.0}, {1.0, 2.0}}, 1), std::invalid_argument);
}

TEST_CASE("transition batches are validated") {
    CHECK_THROWS_AS(make_batch({{0.0}}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(make_batch({{0.0}, {1.0, 2.0}}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(make_batch({{0.0}, {1.0}}, {0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(make_batch({{0.0}, {1.0}}, {-0.1, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(make_batch({{}, {}}, {0.5, 0.5}), std::invalid_argument);
    const TransitionBatch ok = make_batch({{0.0}, {1.0}}, {0.0, 1.0});
    CHECK(ok.size() == 2);
    CHECK(ok.dim() == 1);
}

TEST_CASE("value clusters split where values split") {
    const TransitionBatch batch = make_batch({{0.0}, {0.1}, {10.0}, {10.1}}, {0.1, 0.1, 0.9, 0.9});
    const CommunityAssignment c = si2e::build_hierarchy(batch);
    REQUIRE(c.members == std::vector<std::vector<int>>{{0, 1}, {2, 3}});
    CHECK(c.community_of == std::vector<int>{0, 0, 1, 1});
    REQUIRE(c.centroids.size() == 2);
    CHECK(c.centroids[0][0] == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(c.centroids[1][0] == doctest::Approx(10.05).epsilon(1e-14));
}

TEST_CASE("degenerate value spreads fall back to trivial clusterings") {
    // all-equal values: a single community holding everything
    const TransitionBatch flat = make_batch({{0.0}, {1.0}, {2.0}}, {0.5, 0.5, 0.5});
    CHECK(si2e::build_hierarchy(flat).members == std::vector<std::vector<int>>{{0, 1, 2}});
    // two maximally separated values: the affinity graph has no weight at all
    const TransitionBatch pair = make_batch({{0.0}, {1.0}}, {0.0, 1.0});
    CHECK(si2e::build_hierarchy(pair).members == std::vector<std::vector<int>>{{0}, {1}});
}

TEST_CASE("medoid centroids are member embeddings") {
    const TransitionBatch batch = make_batch({{0.0}, {0.2}, {0.3}}, {0.5, 0.5, 0.5});
    const CommunityAssignment c = si2e::single_community(batch, CentroidKind::medoid);
    REQUIRE(c.centroids.size() == 1);
    CHECK(c.centroids[0][0] == 0.2);  // minimizes the total distance to the others
    const CommunityAssignment m = si2e::single_community(batch, CentroidKind::mean);
    CHECK(m.centroids[0][0] == doctest::Approx(0.5 / 3.0).epsilon(1e-14));
}

TEST_CASE("vcse estimate on the split fixture") {
    const TransitionBatch batch = make_batch({{0.0}, {0.1}, {10.0}, {10.1}}, {0.1, 0.1, 0.9, 0.9});
    const CommunityAssignment c = si2e::build_hierarchy(batch);
    // all-points term log2(0.2), centroid term log2(20)
    CHECK(si2e::vcse_estimate(batch, c, 1) ==
          doctest::Approx(std::log2(0.2) - std::log2(20.0)).epsilon(1e-12));
    // one community drops the subtracted term
    const CommunityAssignment one = si2e::single_community(batch);
    CHECK(si2e::vcse_estimate(batch, one, 1) == doctest::Approx(std::log2(0.2)).epsilon(1e-12));
    CHECK_THROWS_AS(si2e::vcse_estimate(batch, c, 0), std::invalid_argument);
    CHECK_THROWS_AS(si2e::vcse_estimate(batch, c, 4), std::invalid_argument);
}

TEST_CASE("assignments are validated against the batch") {
    const TransitionBatch batch = make_batch({{0.0}, {1.0}}, {0.5, 0.5});
    CommunityAssignment wrong;
    wrong.community_of = {0};
    wrong.members = {{0}};
    wrong.centroids = {{0.0}};
    CHECK_THROWS_AS(si2e::vcse_estimate(batch, wrong, 1), std::invalid_argument);
    wrong.community_of = {0, 0};
    wrong.members = {{0, 0}};
    CHECK_THROWS_AS(si2e::vcse_estimate(batch, wrong, 1), std::invalid_argument);
}

TEST_CASE("per-record novelty matches the fixture") {
    const TransitionBatch batch = make_batch({{0.0}, {0.1}, {10.0}, {10.1}}, {0.1, 0.1, 0.9, 0.9});
    const CommunityAssignment c = si2e::build_hierarchy(batch);
    const std::vector<double> rewards = si2e::intrinsic_rewards(batch, c, 1);
    REQUIRE(rewards.size() == 4);
    // every record's nearest neighbor is 0.1 away, the two centroids are 10 apart:
    // reward = log2(1 + 2*0.1) - log2(1 + 2*10) for all four records
    const double expect = std::log2(1.2) - std::log2(21.0);
    for (double r : rewards) CHECK(r == doctest::Approx(expect).epsilon(1e-12));
    // single community: the centroid subtraction disappears
    const std::vector<double> lone = si2e::intrinsic_rewards(batch, si2e::single_community(batch), 1);
    CHECK(lone[0] == doctest::Approx(std::log2(1.2)).epsilon(1e-12));
}

TEST_CASE("single-record scoring reproduces the full pass bit for bit") {
    si2e::Rng rng(103);
    for (int trial = 0; trial < 30; ++trial) {
        const TransitionBatch batch = random_batch(rng, rng.uniform_int(4, 24), rng.uniform_int(1, 3));
        const int k = rng.uniform_int(1, 3);
        const CommunityAssignment c = si2e::build_hierarchy(batch);
        const std::vector<double> all = si2e::intrinsic_rewards(batch, c, k);
        for (std::size_t i = 0; i < batch.size(); ++i)
            CHECK(si2e::intrinsic_reward_at(batch, c, k, i) == all[i]);
    }
    const TransitionBatch batch = random_batch(rng, 6, 2);
    CHECK_THROWS_AS(si2e::intrinsic_reward_at(batch, si2e::build_hierarchy(batch), 1, 6),
                    std::invalid_argument);
}

TEST_CASE("reward mixing is a clamped linear blend") {
    CHECK(si2e::combine_reward(0.0, 2.0, 0.005) == 0.01);
    CHECK(si2e::combine_reward(1.0, -3.0, 0.5) == 1.0 + 0.5 * -3.0);
    CHECK(si2e::combine_reward(1.0, 123.0, 0.0) == 1.0);
    CHECK_THROWS_AS(si2e::combine_reward(0.0, 0.0, -0.1), std::invalid_argument);
}

TEST_CASE("closed-form vcse fixture") {
    const std::vector<double> probs = {0.3, 0.2, 0.3, 0.2};
    const si2e::ExactVcse r = si2e::exact_vcse(probs, {{0, 1}, {2, 3}});
    CHECK(r.h_v0 == doctest::Approx(1.9709505944546686).epsilon(1e-12));
    CHECK(r.h_v1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.zeta == doctest::Approx(0.42428335750655499).epsilon(1e-12));
    CHECK(r.sandwich_holds);
    CHECK(r.tree_entropy >= r.h_v0 - r.h_v1 - 1e-9);
    CHECK(r.tree_entropy <= r.h_v0 + 1e-9);
}

TEST_CASE("closed-form vcse degenerate partitions") {
    // dyadic masses keep the running sums exact
    const std::vector<double> probs = {0.5, 0.25, 0.125, 0.125};
    // singletons: every mass equals its probability
    const si2e::ExactVcse single = si2e::exact_vcse(probs, {{0}, {1}, {2}, {3}});
    CHECK(single.zeta == 0.0);
    CHECK(single.h_v0 == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(single.h_v1 == doctest::Approx(single.h_v0).epsilon(1e-12));
    CHECK(single.sandwich_holds);
    // the whole set: community entropy vanishes and the tree gives everything back
    const si2e::ExactVcse whole = si2e::exact_vcse(probs, {{0, 1, 2, 3}});
    CHECK(whole.zeta == 1.0);
    CHECK(whole.h_v1 == 0.0);
    CHECK(whole.tree_entropy == doctest::Approx(whole.h_v0).epsilon(1e-12));
    CHECK(whole.sandwich_holds);
}

TEST_CASE("closed-form vcse sandwich holds for every partition") {
    si2e::Rng rng(107);
    for (int trial = 0; trial < 4; ++trial) {
        const std::vector<double> probs = testutil::random_simplex(rng, 5);
        for (const auto& partition : testutil::all_partitions(5))
            CHECK(si2e::exact_vcse(probs, partition).sandwich_holds);
    }
}

TEST_CASE("closed-form vcse validates communities") {
    const std::vector<double> probs = {0.5, 0.5};
    CHECK_THROWS_AS(si2e::exact_vcse(probs, {{0}}), std::invalid_argument);
    CHECK_THROWS_AS(si2e::exact_vcse(probs, {{0, 0}, {1}}), std::invalid_argument);
    CHECK_THROWS_AS(si2e::exact_vcse(probs, {{0, 1}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(si2e::exact_vcse(std::vector<double>{0.5, 0.6}, {{0, 1}}), std::invalid_argument);
}
