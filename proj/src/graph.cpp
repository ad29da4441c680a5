#include "si2e/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace si2e {

WeightedGraph::WeightedGraph(int vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), edges_(std::move(edges)) {
    if (n_ <= 0) throw std::invalid_argument("WeightedGraph: vertex count must be positive");

    for (Edge& e : edges_) {
        if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
            throw std::invalid_argument("WeightedGraph: edge endpoint out of range");
        if (!(e.w >= 0.0))
            throw std::invalid_argument("WeightedGraph: edge weight must be non-negative");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
            throw std::invalid_argument("WeightedGraph: duplicate edge");

    degree_.assign(n_, 0.0);
    loop_.assign(n_, 0.0);
    adjacency_.assign(n_, {});
    for (const Edge& e : edges_) {
        if (e.u == e.v) {
            degree_[e.u] += e.w;  // a loop counts once toward the degree
            loop_[e.u] += e.w;
        } else {
            degree_[e.u] += e.w;
            degree_[e.v] += e.w;
            if (e.w > 0.0) {
                adjacency_[e.u].emplace_back(e.v, e.w);
                adjacency_[e.v].emplace_back(e.u, e.w);
            }
        }
    }
    for (auto& nbrs : adjacency_)
        std::sort(nbrs.begin(), nbrs.end());
    volume_ = 0.0;
    for (double d : degree_) volume_ += d;
}

double WeightedGraph::degree(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("WeightedGraph::degree: vertex out of range");
    return degree_[v];
}

double WeightedGraph::weight_between(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::out_of_range("WeightedGraph::weight_between: vertex out of range");
    if (i == j) return loop_[i];
    const auto& nbrs = adjacency_[i];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), std::make_pair(j, 0.0));
    if (it != nbrs.end() && it->first == j) return it->second;
    return 0.0;
}

double WeightedGraph::loop_weight(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("WeightedGraph::loop_weight: vertex out of range");
    return loop_[v];
}

const std::vector<std::pair<int, double>>& WeightedGraph::neighbors(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("WeightedGraph::neighbors: vertex out of range");
    return adjacency_[v];
}

bool WeightedGraph::is_connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& [u, w] : adjacency_[v]) {
            (void)w;
            if (!seen[u]) {
                seen[u] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == n_;
}

WeightedGraph WeightedGraph::load_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    int max_vertex = -1;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int i, j;
        double w;
        if (!(ls >> i)) continue;  // blank line
        if (!(ls >> j >> w))
            throw std::runtime_error("load_edge_list: expected 'i j w' triple");
        edges.push_back({i, j, w});
        max_vertex = std::max({max_vertex, i, j});
    }
    if (edges.empty()) throw std::runtime_error("load_edge_list: no edges found");
    return WeightedGraph(max_vertex + 1, std::move(edges));
}

void WeightedGraph::write_edge_list(std::ostream& out) const {
    out.precision(17);
    for (const Edge& e : edges_)
        out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

WeightedGraph bipartite_from_joint(const JointDistribution& joint) {
    const int r = joint.rows();
    const int c = joint.cols();
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(r) * c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            edges.push_back({i, r + j, joint.p(i, j)});
    return WeightedGraph(r + c, std::move(edges));
}

WeightedGraph value_graph(std::span<const double> values) {
    const int n = static_cast<int>(values.size());
    if (n < 2) throw std::invalid_argument("value_graph: need at least two values");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("value_graph: values must be finite");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges.push_back({i, j, std::abs(values[i] - values[j])});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph degree_realization(std::span<const double> probs) {
    const int n = static_cast<int>(probs.size());
    if (n < 1) throw std::invalid_argument("degree_realization: empty probability vector");
    double total = 0.0;
    for (double p : probs) {
        if (!(p > 0.0)) throw std::invalid_argument("degree_realization: probabilities must be positive");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("degree_realization: probabilities must sum to 1");

    std::vector<Edge> edges;
    if (n == 1) {
        edges.push_back({0, 0, probs[0]});
        return WeightedGraph(1, std::move(edges));
    }

    // Closed form of the inductive construction: every rescaling applied to
    // an edge created when vertex j joined telescopes to a factor c_j^2, so
    // the final weights are exact products instead of accumulated rounding.
    const double c1 = probs[0] + probs[1];
    const double base_edge = std::min(probs[0], probs[1]) * c1;
    edges.push_back({0, 1, base_edge});
    const double imbalance = std::abs(probs[0] - probs[1]) * c1;
    if (imbalance > 0.0) {
        const int heavy = probs[0] >= probs[1] ? 0 : 1;
        edges.push_back({heavy, heavy, imbalance});
    }
    for (int k = 2; k < n; ++k) {
        for (int i = 0; i < k; ++i)
            edges.push_back({i, k, probs[i] * probs[k]});
        edges.push_back({k, k, probs[k] * probs[k]});
    }
    return WeightedGraph(n, std::move(edges));
}

}  // namespace si2e
