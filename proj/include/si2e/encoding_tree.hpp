#pragma once

#include <string>
#include <vector>

#include "si2e/graph.hpp"

namespace si2e {

// Node of an encoding tree. Vertex subsets are kept sorted; `cut` caches the
// node's boundary weight g (with self-loops of member vertices included, see
// WeightedGraph) and `vol` the total degree of the subset.
struct TreeNode {
    int parent = -1;
    std::vector<int> children;
    std::vector<int> vertices;
    double cut = 0.0;
    double vol = 0.0;
};

// Rooted partitioning tree of height at most two: the root holds the full
// vertex set, optional internal nodes hold communities, leaves are single
// vertices. Node 0 is always the root. Builders produce a canonical layout
// (children ordered by smallest member vertex), so structurally equal trees
// compare equal.
class EncodingTree {
public:
    int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
    const TreeNode& node(int id) const;
    int root() const noexcept { return 0; }
    const std::vector<int>& root_children() const { return nodes_[0].children; }
    bool is_leaf(int id) const { return node(id).children.empty(); }
    int height() const;

    // Children of the root as vertex groups, in child order.
    std::vector<std::vector<int>> root_partition() const;

    // Recomputes every cached cut/volume from the graph and checks structure
    // (subset nesting, leaf singletons, cache agreement within 1e-12).
    void validate_against(const WeightedGraph& g) const;

    // One node per line: depth, comma-separated vertex subset, g, vol.
    std::string to_text() const;

    bool operator==(const EncodingTree& other) const { return nodes_ == other.nodes_; }

    // Root plus one leaf per vertex; leaf of vertex v is node v + 1.
    // Rejects zero-volume graphs, where Eq-style entropies are undefined.
    static EncodingTree one_layer(const WeightedGraph& g);

    // Two-layer tree over an explicit partition. Groups of size >= 2 become
    // internal nodes; singletons become internal nodes too when
    // wrap_singletons is set and bare leaves otherwise.
    static EncodingTree from_partition(const WeightedGraph& g,
                                       const std::vector<std::vector<int>>& groups,
                                       bool wrap_singletons = false);

private:
    std::vector<TreeNode> nodes_;
    friend bool operator==(const TreeNode&, const TreeNode&);
};

bool operator==(const TreeNode& a, const TreeNode& b);

inline EncodingTree one_layer_tree(const WeightedGraph& g) { return EncodingTree::one_layer(g); }

// Structural entropy of the graph under the tree, in bits: the sum over
// non-root nodes of -(g_a / vol(G)) * log2(vol_a / vol_parent), with
// zero-volume nodes contributing nothing.
double structural_entropy(const WeightedGraph& g, const EncodingTree& tree);

// Entropy change produced by merging two sibling children of the root into
// one community node (positive means the merge lowers the entropy). Works
// for leaf or internal siblings.
double stretch_delta(const WeightedGraph& g, const EncodingTree& tree, int node_a, int node_b);

// The merged tree itself: two leaves become a new internal pair node; when
// an internal node is involved the subsets are united into one flat
// community, keeping the height at two.
EncodingTree apply_stretch(const WeightedGraph& g, const EncodingTree& tree, int node_a, int node_b);

enum class OptimizeMode {
    matching,   // only leaf-leaf merges; every internal node ends with two leaves
    community,  // repeated merging into flat communities of any size
};

// Greedy entropy minimization: starting from the one-layer tree, repeatedly
// apply the best strictly positive stretch among children of the root; stop
// when none remains. Ties break toward the lexicographically smallest
// (smallest-member) pair, so the result is deterministic.
EncodingTree optimize_two_layer(const WeightedGraph& g, OptimizeMode mode);

// Matching tree over the first `x_count` vertices paired with the rest by
// index: internal node i spans {i, x_count + i}.
EncodingTree identity_matching_tree(const WeightedGraph& g, int x_count);

// Shift transformation of a perfect matching tree over a bipartite graph
// with x-vertices 0..n-1 and y-vertices n..2n-1: internal node i (ordered by
// y index) is re-paired to {x_{(i+l) mod n}, y_i}, where x_j is the partner
// of y_j in the input tree. l = 0 returns the same pairing.
EncodingTree l_transform(const WeightedGraph& g, const EncodingTree& tree, int l);

}  // namespace si2e
