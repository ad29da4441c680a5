#pragma once

#include <span>
#include <vector>

#include "si2e/graph.hpp"

namespace si2e {

struct TransitionRecord {
    int state = 0;
    int action = 0;
    int next_state = 0;
    double extrinsic_reward = 0.0;
    std::vector<double> embedding;  // fixed surrogate representation of (state, action)
    double value = 0.0;             // scalar policy value in [0, 1]
};

// Validated bundle of transitions: at least two records, embeddings of one
// shared dimensionality, values inside [0, 1].
class TransitionBatch {
public:
    explicit TransitionBatch(std::vector<TransitionRecord> records);

    std::size_t size() const noexcept { return records_.size(); }
    int dim() const noexcept { return dim_; }
    const TransitionRecord& record(std::size_t i) const { return records_.at(i); }
    const std::vector<TransitionRecord>& records() const noexcept { return records_; }

private:
    std::vector<TransitionRecord> records_;
    int dim_ = 0;
};

struct CommunityAssignment {
    std::vector<int> community_of;               // per record index
    std::vector<std::vector<int>> members;       // per community, ascending record ids
    std::vector<std::vector<double>> centroids;  // per community
};

enum class CentroidKind { mean, medoid };

// Particle-style entropy estimate over a point cloud: with d(x_i) twice the
// Euclidean distance to the k-th nearest neighbour,
// (dim / n) * sum_i log2(max(d(x_i), 1e-12)).
double knn_entropy(const std::vector<std::vector<double>>& points, int k);

// Value-conditional communities: records are clustered by minimizing the
// structural entropy of a complete graph whose edge weights are value
// proximities (the spread minus |v_i - v_j|, so close values attract).
// All-equal values collapse to a single community holding every record.
CommunityAssignment build_hierarchy(const TransitionBatch& batch,
                                    CentroidKind centroid = CentroidKind::mean);

// Trivial assignment placing every record in one community; the
// community-blind entropy baseline reuses the reward path through this.
CommunityAssignment single_community(const TransitionBatch& batch,
                                     CentroidKind centroid = CentroidKind::mean);

// Value-conditional structural entropy estimate: the k-NN entropy over all
// record embeddings minus the k'-NN entropy over community centroids
// (k' = min(k, #communities - 1); the second term is zero with a single
// community). Requires k in [1, n) where n is the batch size.
double vcse_estimate(const TransitionBatch& batch, const CommunityAssignment& communities, int k);

// Per-record smoothed novelty: log2(1 + d0_i) - log2(1 + d1_{c(i)}), where
// d0 is the record's k-NN distance among all embeddings and d1 the
// community centroid's distance among centroids.
std::vector<double> intrinsic_rewards(const TransitionBatch& batch,
                                      const CommunityAssignment& communities, int k);

// The same novelty for one record only. Training scores just the newest
// transition against the sampled batch, so this skips the O(n^2) full-batch
// pass; the value matches intrinsic_rewards(batch, communities, k)[index]
// exactly.
double intrinsic_reward_at(const TransitionBatch& batch, const CommunityAssignment& communities,
                           int k, std::size_t index);

double combine_reward(double extrinsic, double intrinsic, double beta);

struct ExactVcse {
    double h_v0 = 0.0;          // Shannon entropy of the probabilities
    double h_v1 = 0.0;          // Shannon entropy of the community masses
    double tree_entropy = 0.0;  // structural entropy of the realized graph
    double zeta = 0.0;          // min_i log_{p_i}(p_i / community mass)
    bool sandwich_holds = false;
};

// Closed-form check on a degree-realized graph: verifies
// zeta * H(V0) <= H(V0) - H(V1) <= H^T(G') <= H(V0) within 1e-9.
ExactVcse exact_vcse(std::span<const double> probs,
                     const std::vector<std::vector<int>>& communities);

}  // namespace si2e
