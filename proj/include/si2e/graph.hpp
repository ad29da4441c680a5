#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "si2e/joint.hpp"

namespace si2e {

struct Edge {
    int u = 0;      // normalized so u <= v
    int v = 0;
    double w = 0.0; // non-negative; u == v denotes a self-loop
};

// Undirected weighted graph, immutable after construction and safe to share
// read-only. A self-loop counts once toward its vertex degree; volume is the
// sum of all degrees. For boundary weights (encoding-tree g values) a
// self-loop behaves like a dangling stub: it crosses the boundary of every
// vertex subset containing its vertex. That convention is what makes the
// one-layer entropy collapse to the degree-distribution Shannon entropy on
// graphs with loops.
class WeightedGraph {
public:
    WeightedGraph(int vertex_count, std::vector<Edge> edges);

    int vertex_count() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    double degree(int v) const;
    const std::vector<double>& degrees() const noexcept { return degree_; }
    double volume() const noexcept { return volume_; }

    double weight_between(int i, int j) const;  // 0 when no such edge
    double loop_weight(int v) const;

    // Neighbors with positive-weight incident edges (self-loops excluded),
    // sorted by vertex id.
    const std::vector<std::pair<int, double>>& neighbors(int v) const;

    // Connectivity in the random-walk sense: only edges of positive weight
    // join vertices and self-loops are ignored.
    bool is_connected() const;

    // Text fixture format: one "i j w" triple per line, '#' starts a comment.
    // Vertex count is 1 + the largest endpoint mentioned.
    static WeightedGraph load_edge_list(std::istream& in);
    void write_edge_list(std::ostream& out) const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> degree_;
    std::vector<double> loop_;
    std::vector<std::vector<std::pair<int, double>>> adjacency_;
    double volume_ = 0.0;
};

// Bipartite graph of a square or rectangular joint table: x-vertices 0..R-1,
// y-vertices R..R+C-1, edge weight p(x_i, y_j). Degrees equal the marginals.
WeightedGraph bipartite_from_joint(const JointDistribution& joint);

// Complete graph over scalar values with w_ij = |values[i] - values[j]|.
WeightedGraph value_graph(std::span<const double> values);

// Weighted graph whose degree sequence equals the given strictly positive
// probability vector (sum 1): cross weights p_i * p_j for pairs touching
// vertex 2 or later, the first pair carries min(p_0,p_1)*(p_0+p_1) plus a
// balancing self-loop, and each later vertex keeps a p_k^2 self-loop.
// Zero-weight self-loops are dropped. The result is connected and has
// volume 1.
WeightedGraph degree_realization(std::span<const double> probs);

}  // namespace si2e
