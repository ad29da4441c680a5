#include "si2e/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "si2e/encoding_tree.hpp"

namespace si2e {

namespace {

constexpr double kDistanceFloor = 1e-12;

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

// Twice the distance from each point to its k-th nearest other point.
std::vector<double> knn_diameters(const std::vector<std::vector<double>>& points, int k) {
    const std::size_t n = points.size();
    std::vector<double> out(n);
    std::vector<double> dist;
    dist.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        dist.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) dist.push_back(euclidean(points[i], points[j]));
        std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
        out[i] = 2.0 * dist[k - 1];
    }
    return out;
}

void require_k(std::size_t n, int k, const char* what) {
    if (k < 1) throw std::invalid_argument(std::string(what) + ": k must be at least 1");
    if (static_cast<std::size_t>(k) >= n)
        throw std::invalid_argument(std::string(what) + ": k must be smaller than the point count");
}

std::vector<double> centroid_mean(const TransitionBatch& batch, const std::vector<int>& members) {
    std::vector<double> c(static_cast<std::size_t>(batch.dim()), 0.0);
    for (int m : members)
        for (int d = 0; d < batch.dim(); ++d) c[d] += batch.record(m).embedding[d];
    for (double& v : c) v /= static_cast<double>(members.size());
    return c;
}

std::vector<double> centroid_medoid(const TransitionBatch& batch, const std::vector<int>& members) {
    double best = std::numeric_limits<double>::infinity();
    int pick = members.front();
    for (int m : members) {
        double total = 0.0;
        for (int o : members)
            if (o != m) total += euclidean(batch.record(m).embedding, batch.record(o).embedding);
        if (total < best) {
            best = total;
            pick = m;
        }
    }
    return batch.record(pick).embedding;
}

CommunityAssignment assemble(const TransitionBatch& batch, std::vector<std::vector<int>> members,
                             CentroidKind centroid) {
    CommunityAssignment out;
    out.members = std::move(members);
    out.community_of.assign(batch.size(), -1);
    for (std::size_t c = 0; c < out.members.size(); ++c)
        for (int m : out.members[c]) out.community_of[m] = static_cast<int>(c);
    out.centroids.reserve(out.members.size());
    for (const auto& grp : out.members)
        out.centroids.push_back(centroid == CentroidKind::mean ? centroid_mean(batch, grp)
                                                               : centroid_medoid(batch, grp));
    return out;
}

void require_assignment(const TransitionBatch& batch, const CommunityAssignment& communities) {
    if (communities.community_of.size() != batch.size() ||
        communities.members.size() != communities.centroids.size() || communities.members.empty())
        throw std::invalid_argument("exploration: malformed community assignment");
    std::vector<char> seen(batch.size(), 0);
    for (std::size_t c = 0; c < communities.members.size(); ++c) {
        if (communities.members[c].empty())
            throw std::invalid_argument("exploration: empty community");
        for (int m : communities.members[c]) {
            if (m < 0 || static_cast<std::size_t>(m) >= batch.size() || seen[m] ||
                communities.community_of[m] != static_cast<int>(c))
                throw std::invalid_argument("exploration: assignment is not a partition");
            seen[m] = 1;
        }
    }
}

}  // namespace

TransitionBatch::TransitionBatch(std::vector<TransitionRecord> records)
    : records_(std::move(records)) {
    if (records_.size() < 2)
        throw std::invalid_argument("TransitionBatch: need at least two records");
    dim_ = static_cast<int>(records_.front().embedding.size());
    if (dim_ < 1) throw std::invalid_argument("TransitionBatch: embeddings must be non-empty");
    for (const TransitionRecord& r : records_) {
        if (static_cast<int>(r.embedding.size()) != dim_)
            throw std::invalid_argument("TransitionBatch: inconsistent embedding dimensionality");
        for (double v : r.embedding)
            if (!std::isfinite(v))
                throw std::invalid_argument("TransitionBatch: embeddings must be finite");
        if (!(r.value >= 0.0 && r.value <= 1.0))
            throw std::invalid_argument("TransitionBatch: values must lie in [0, 1]");
    }
}

double knn_entropy(const std::vector<std::vector<double>>& points, int k) {
    require_k(points.size(), k, "knn_entropy");
    const std::size_t dim = points.front().size();
    if (dim == 0) throw std::invalid_argument("knn_entropy: points must be non-empty vectors");
    for (const auto& p : points)
        if (p.size() != dim)
            throw std::invalid_argument("knn_entropy: inconsistent point dimensionality");
    const std::vector<double> diam = knn_diameters(points, k);
    double total = 0.0;
    for (double d : diam) total += std::log2(std::max(d, kDistanceFloor));
    return static_cast<double>(dim) / static_cast<double>(points.size()) * total;
}

CommunityAssignment build_hierarchy(const TransitionBatch& batch, CentroidKind centroid) {
    const std::size_t n = batch.size();
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = batch.record(i).value;

    double spread = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            spread = std::max(spread, std::abs(values[i] - values[j]));
    if (spread == 0.0) return single_community(batch, centroid);

    // Entropy minimization groups heavily connected vertices, so the value
    // distances are inverted into proximities first: records with close
    // values attract, the farthest pair repels.
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            edges.push_back({static_cast<int>(i), static_cast<int>(j),
                             spread - std::abs(values[i] - values[j])});
    const WeightedGraph affinity(static_cast<int>(n), std::move(edges));
    if (!(affinity.volume() > 0.0)) {
        // Two records with distinct values: nothing to merge.
        std::vector<std::vector<int>> singles;
        for (std::size_t i = 0; i < n; ++i) singles.push_back({static_cast<int>(i)});
        return assemble(batch, std::move(singles), centroid);
    }
    const EncodingTree tree = optimize_two_layer(affinity, OptimizeMode::community);
    return assemble(batch, tree.root_partition(), centroid);
}

CommunityAssignment single_community(const TransitionBatch& batch, CentroidKind centroid) {
    std::vector<int> all(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) all[i] = static_cast<int>(i);
    return assemble(batch, {all}, centroid);
}

double vcse_estimate(const TransitionBatch& batch, const CommunityAssignment& communities, int k) {
    require_assignment(batch, communities);
    require_k(batch.size(), k, "vcse_estimate");
    std::vector<std::vector<double>> points;
    points.reserve(batch.size());
    for (const TransitionRecord& r : batch.records()) points.push_back(r.embedding);
    const double full = knn_entropy(points, k);
    const std::size_t n1 = communities.centroids.size();
    if (n1 < 2) return full;
    const int kc = std::min<std::size_t>(static_cast<std::size_t>(k), n1 - 1);
    return full - knn_entropy(communities.centroids, kc);
}

std::vector<double> intrinsic_rewards(const TransitionBatch& batch,
                                      const CommunityAssignment& communities, int k) {
    require_assignment(batch, communities);
    require_k(batch.size(), k, "intrinsic_rewards");
    std::vector<std::vector<double>> points;
    points.reserve(batch.size());
    for (const TransitionRecord& r : batch.records()) points.push_back(r.embedding);
    const std::vector<double> d0 = knn_diameters(points, k);

    const std::size_t n1 = communities.centroids.size();
    std::vector<double> d1(n1, 0.0);
    if (n1 >= 2) {
        const int kc = std::min<std::size_t>(static_cast<std::size_t>(k), n1 - 1);
        d1 = knn_diameters(communities.centroids, kc);
    }
    std::vector<double> rewards(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i)
        rewards[i] = std::log2(1.0 + d0[i]) - std::log2(1.0 + d1[communities.community_of[i]]);
    return rewards;
}

double intrinsic_reward_at(const TransitionBatch& batch, const CommunityAssignment& communities,
                           int k, std::size_t index) {
    require_assignment(batch, communities);
    require_k(batch.size(), k, "intrinsic_reward_at");
    if (index >= batch.size())
        throw std::invalid_argument("intrinsic_reward_at: record index out of range");

    std::vector<double> dist;
    dist.reserve(batch.size() - 1);
    for (std::size_t j = 0; j < batch.size(); ++j)
        if (j != index) dist.push_back(euclidean(batch.record(index).embedding, batch.record(j).embedding));
    std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
    const double d0 = 2.0 * dist[k - 1];

    double d1 = 0.0;
    const std::size_t n1 = communities.centroids.size();
    if (n1 >= 2) {
        const int kc = std::min<std::size_t>(static_cast<std::size_t>(k), n1 - 1);
        const auto c = static_cast<std::size_t>(communities.community_of[index]);
        std::vector<double> cdist;
        cdist.reserve(n1 - 1);
        for (std::size_t j = 0; j < n1; ++j)
            if (j != c) cdist.push_back(euclidean(communities.centroids[c], communities.centroids[j]));
        std::nth_element(cdist.begin(), cdist.begin() + (kc - 1), cdist.end());
        d1 = 2.0 * cdist[kc - 1];
    }
    return std::log2(1.0 + d0) - std::log2(1.0 + d1);
}

double combine_reward(double extrinsic, double intrinsic, double beta) {
    if (beta < 0.0) throw std::invalid_argument("combine_reward: beta must be non-negative");
    return extrinsic + beta * intrinsic;
}

ExactVcse exact_vcse(std::span<const double> probs,
                     const std::vector<std::vector<int>>& communities) {
    const int n = static_cast<int>(probs.size());
    std::vector<int> community_of(n, -1);
    for (std::size_t c = 0; c < communities.size(); ++c) {
        if (communities[c].empty()) throw std::invalid_argument("exact_vcse: empty community");
        for (int v : communities[c]) {
            if (v < 0 || v >= n || community_of[v] != -1)
                throw std::invalid_argument("exact_vcse: communities must partition the indices");
            community_of[v] = static_cast<int>(c);
        }
    }
    for (int v = 0; v < n; ++v)
        if (community_of[v] == -1)
            throw std::invalid_argument("exact_vcse: communities must partition the indices");

    const WeightedGraph graph = degree_realization(probs);
    const EncodingTree tree = EncodingTree::from_partition(graph, communities, true);

    ExactVcse out;
    out.tree_entropy = structural_entropy(graph, tree);
    std::vector<double> mass(communities.size(), 0.0);
    for (int v = 0; v < n; ++v) {
        out.h_v0 -= probs[v] * std::log2(probs[v]);
        mass[community_of[v]] += probs[v];
    }
    for (double m : mass) out.h_v1 -= m * std::log2(m);

    out.zeta = 1.0;
    for (int v = 0; v < n; ++v) {
        const double lp = std::log(probs[v]);
        // Singleton communities give log_p(1) = 0; a lone vertex with p = 1
        // is treated the same way since every bound collapses to zero.
        const double zi = lp == 0.0 ? 0.0 : std::log(probs[v] / mass[community_of[v]]) / lp;
        out.zeta = std::min(out.zeta, zi);
    }

    constexpr double tol = 1e-9;
    const double middle = out.h_v0 - out.h_v1;
    out.sandwich_holds = out.zeta * out.h_v0 <= middle + tol && middle <= out.tree_entropy + tol &&
                         out.tree_entropy <= out.h_v0 + tol;
    return out;
}

}  // namespace si2e
