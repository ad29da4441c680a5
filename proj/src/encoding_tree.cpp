#include "si2e/encoding_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace si2e {

namespace {

constexpr double kCacheTolerance = 1e-12;

// x * log2(num / den) with the x = 0 limit pinned to zero, so subsets of
// zero volume or boundary weight drop out instead of producing NaNs.
double xlog2_ratio(double x, double num, double den) {
    if (x == 0.0) return 0.0;
    return x * std::log2(num / den);
}

// Entropy change of replacing root children A and B by their union, from
// cached cluster quantities. w_ab is the total non-loop weight between the
// two subsets; log_a and log_b carry log2(vol_a/vol_graph) and
// log2(vol_b/vol_graph), which the greedy optimizer caches per cluster since
// every candidate pair touching a cluster reuses them. Reduces to
// -(g_a + g_b - g_m)/vol * log2(vol_m/vol) when both nodes are leaves.
double merge_delta(double vol_graph, double g_a, double vol_a, double g_b, double vol_b,
                   double w_ab, double log_a, double log_b) {
    const double g_m = g_a + g_b - 2.0 * w_ab;
    const double vol_m = vol_a + vol_b;
    double delta = 0.0;
    delta -= g_a == 0.0 ? 0.0 : g_a * log_a;
    delta -= g_b == 0.0 ? 0.0 : g_b * log_b;
    delta += xlog2_ratio(g_m, vol_m, vol_graph);
    delta += xlog2_ratio(vol_a, vol_a, vol_m);
    delta += xlog2_ratio(vol_b, vol_b, vol_m);
    return delta / vol_graph;
}

// A subset of zero volume also has zero boundary, so its term vanishes and
// the logarithm is never consulted.
double merge_delta(double vol_graph, double g_a, double vol_a, double g_b, double vol_b,
                   double w_ab) {
    return merge_delta(vol_graph, g_a, vol_a, g_b, vol_b, w_ab,
                       vol_a == 0.0 ? 0.0 : std::log2(vol_a / vol_graph),
                       vol_b == 0.0 ? 0.0 : std::log2(vol_b / vol_graph));
}

}  // namespace

bool operator==(const TreeNode& a, const TreeNode& b) {
    return a.parent == b.parent && a.children == b.children && a.vertices == b.vertices &&
           a.cut == b.cut && a.vol == b.vol;
}

const TreeNode& EncodingTree::node(int id) const {
    if (id < 0 || id >= node_count()) throw std::out_of_range("EncodingTree::node: bad id");
    return nodes_[id];
}

int EncodingTree::height() const {
    int h = 0;
    for (int id = 0; id < node_count(); ++id) {
        int depth = 0;
        for (int at = id; nodes_[at].parent >= 0; at = nodes_[at].parent) ++depth;
        h = std::max(h, depth);
    }
    return h;
}

std::vector<std::vector<int>> EncodingTree::root_partition() const {
    std::vector<std::vector<int>> groups;
    groups.reserve(nodes_[0].children.size());
    for (int child : nodes_[0].children) groups.push_back(nodes_[child].vertices);
    return groups;
}

EncodingTree EncodingTree::one_layer(const WeightedGraph& g) {
    std::vector<std::vector<int>> groups;
    groups.reserve(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) groups.push_back({v});
    return from_partition(g, groups, false);
}

EncodingTree EncodingTree::from_partition(const WeightedGraph& g,
                                          const std::vector<std::vector<int>>& groups,
                                          bool wrap_singletons) {
    if (!(g.volume() > 0.0))
        throw std::invalid_argument("EncodingTree: zero-volume graph has no encoding entropy");
    const int n = g.vertex_count();
    std::vector<int> group_of(n, -1);
    std::vector<std::vector<int>> sorted_groups = groups;
    for (auto& grp : sorted_groups) {
        if (grp.empty()) throw std::invalid_argument("EncodingTree: empty group");
        std::sort(grp.begin(), grp.end());
    }
    std::sort(sorted_groups.begin(), sorted_groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (std::size_t gi = 0; gi < sorted_groups.size(); ++gi)
        for (int v : sorted_groups[gi]) {
            if (v < 0 || v >= n) throw std::invalid_argument("EncodingTree: vertex out of range");
            if (group_of[v] != -1) throw std::invalid_argument("EncodingTree: vertex in two groups");
            group_of[v] = static_cast<int>(gi);
        }
    for (int v = 0; v < n; ++v)
        if (group_of[v] == -1) throw std::invalid_argument("EncodingTree: vertex missing from partition");

    // One edge sweep gives each group's internal (non-loop) weight; the
    // boundary cache is then vol - 2 * internal, which leaves member
    // self-loops counted as boundary weight.
    std::vector<double> internal(sorted_groups.size(), 0.0);
    for (const Edge& e : g.edges())
        if (e.u != e.v && group_of[e.u] == group_of[e.v]) internal[group_of[e.u]] += e.w;

    EncodingTree tree;
    TreeNode root;
    root.parent = -1;
    root.vertices.resize(n);
    for (int v = 0; v < n; ++v) root.vertices[v] = v;
    root.vol = g.volume();
    double all_internal = 0.0;
    for (const Edge& e : g.edges())
        if (e.u != e.v) all_internal += e.w;
    root.cut = g.volume() - 2.0 * all_internal;
    tree.nodes_.push_back(std::move(root));

    std::vector<int> group_node(sorted_groups.size());
    for (std::size_t gi = 0; gi < sorted_groups.size(); ++gi) {
        const auto& grp = sorted_groups[gi];
        double vol = 0.0;
        for (int v : grp) vol += g.degree(v);
        if (grp.size() == 1 && !wrap_singletons) {
            TreeNode leaf;
            leaf.parent = 0;
            leaf.vertices = grp;
            leaf.vol = vol;
            leaf.cut = g.degree(grp[0]);
            group_node[gi] = tree.node_count();
            tree.nodes_.push_back(std::move(leaf));
        } else {
            TreeNode comm;
            comm.parent = 0;
            comm.vertices = grp;
            comm.vol = vol;
            comm.cut = vol - 2.0 * internal[gi];
            group_node[gi] = tree.node_count();
            tree.nodes_.push_back(std::move(comm));
        }
        tree.nodes_[0].children.push_back(group_node[gi]);
    }
    for (std::size_t gi = 0; gi < sorted_groups.size(); ++gi) {
        const auto& grp = sorted_groups[gi];
        if (grp.size() == 1 && !wrap_singletons) continue;
        for (int v : grp) {
            TreeNode leaf;
            leaf.parent = group_node[gi];
            leaf.vertices = {v};
            leaf.vol = g.degree(v);
            leaf.cut = g.degree(v);
            const int id = tree.node_count();
            tree.nodes_.push_back(std::move(leaf));
            tree.nodes_[group_node[gi]].children.push_back(id);
        }
    }
    return tree;
}

void EncodingTree::validate_against(const WeightedGraph& g) const {
    const int n = g.vertex_count();
    if (nodes_.empty()) throw std::invalid_argument("EncodingTree: empty tree");
    const TreeNode& root = nodes_[0];
    if (root.parent != -1) throw std::invalid_argument("EncodingTree: node 0 is not a root");
    if (static_cast<int>(root.vertices.size()) != n)
        throw std::invalid_argument("EncodingTree: root does not cover the graph");
    if (height() > 2) throw std::invalid_argument("EncodingTree: height exceeds two");

    for (int v = 0; v < n; ++v)
        if (root.vertices[v] != v)
            throw std::invalid_argument("EncodingTree: root does not cover the graph");
    for (int id = 0; id < node_count(); ++id) {
        const TreeNode& nd = nodes_[id];
        if (id > 0 && (nd.parent < 0 || nd.parent >= node_count()))
            throw std::invalid_argument("EncodingTree: dangling parent link");
        for (int v : nd.vertices)
            if (v < 0 || v >= n) throw std::invalid_argument("EncodingTree: vertex out of range");
        for (int c : nd.children)
            if (c <= 0 || c >= node_count() || nodes_[c].parent != id)
                throw std::invalid_argument("EncodingTree: inconsistent child link");
        if (nd.children.empty() && nd.vertices.size() != 1 && id != 0)
            throw std::invalid_argument("EncodingTree: leaf must hold one vertex");
        if (!nd.children.empty()) {
            std::vector<int> merged;
            for (int c : nd.children)
                merged.insert(merged.end(), nodes_[c].vertices.begin(), nodes_[c].vertices.end());
            std::sort(merged.begin(), merged.end());
            if (merged != nd.vertices)
                throw std::invalid_argument("EncodingTree: children do not partition parent");
        }
    }

    // Recompute caches from scratch and compare.
    for (int id = 0; id < node_count(); ++id) {
        const TreeNode& nd = nodes_[id];
        double vol = 0.0;
        for (int v : nd.vertices) vol += g.degree(v);
        std::vector<char> inside(n, 0);
        for (int v : nd.vertices) inside[v] = 1;
        double internal = 0.0;
        for (const Edge& e : g.edges())
            if (e.u != e.v && inside[e.u] && inside[e.v]) internal += e.w;
        const double cut = vol - 2.0 * internal;
        if (std::abs(vol - nd.vol) > kCacheTolerance || std::abs(cut - nd.cut) > kCacheTolerance)
            throw std::invalid_argument("EncodingTree: cached cut/volume disagrees with graph");
    }
}

std::string EncodingTree::to_text() const {
    std::ostringstream out;
    out.precision(12);
    // Preorder walk keeps parents above their children.
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, depth] = stack.back();
        stack.pop_back();
        const TreeNode& nd = nodes_[id];
        out << depth << ' ';
        for (std::size_t i = 0; i < nd.vertices.size(); ++i) {
            if (i) out << ',';
            out << nd.vertices[i];
        }
        out << ' ' << nd.cut << ' ' << nd.vol << '\n';
        for (auto it = nd.children.rbegin(); it != nd.children.rend(); ++it)
            stack.push_back({*it, depth + 1});
    }
    return out.str();
}

double structural_entropy(const WeightedGraph& g, const EncodingTree& tree) {
    if (!(g.volume() > 0.0))
        throw std::invalid_argument("structural_entropy: undefined on zero-volume graphs");
    if (static_cast<int>(tree.node(0).vertices.size()) != g.vertex_count() ||
        tree.node(0).vertices.back() != g.vertex_count() - 1)
        throw std::invalid_argument("structural_entropy: tree does not match graph");
    const double vol = g.volume();
    double h = 0.0;
    for (int id = 1; id < tree.node_count(); ++id) {
        const TreeNode& nd = tree.node(id);
        if (!(nd.cut > 0.0)) continue;  // isolated or boundary-free subsets contribute nothing
        const double parent_vol = tree.node(nd.parent).vol;
        h -= nd.cut / vol * std::log2(nd.vol / parent_vol);
    }
    return h;
}

namespace {

// Total non-loop weight between two disjoint vertex subsets.
double cross_weight(const WeightedGraph& g, const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<char> mark(g.vertex_count(), 0);
    for (int v : b) mark[v] = 1;
    double w = 0.0;
    for (int u : a)
        for (const auto& [t, wt] : g.neighbors(u))
            if (mark[t]) w += wt;
    return w;
}

void require_root_siblings(const EncodingTree& tree, int a, int b) {
    if (a == b) throw std::invalid_argument("stretch: nodes must be distinct");
    if (a <= 0 || b <= 0 || a >= tree.node_count() || b >= tree.node_count())
        throw std::invalid_argument("stretch: node id out of range");
    if (tree.node(a).parent != tree.root() || tree.node(b).parent != tree.root())
        throw std::invalid_argument("stretch: nodes must be children of the root");
}

}  // namespace

double stretch_delta(const WeightedGraph& g, const EncodingTree& tree, int node_a, int node_b) {
    require_root_siblings(tree, node_a, node_b);
    const TreeNode& a = tree.node(node_a);
    const TreeNode& b = tree.node(node_b);
    const double w_ab = cross_weight(g, a.vertices, b.vertices);
    return merge_delta(g.volume(), a.cut, a.vol, b.cut, b.vol, w_ab);
}

EncodingTree apply_stretch(const WeightedGraph& g, const EncodingTree& tree, int node_a, int node_b) {
    require_root_siblings(tree, node_a, node_b);
    std::vector<std::vector<int>> groups;
    std::vector<int> merged = tree.node(node_a).vertices;
    merged.insert(merged.end(), tree.node(node_b).vertices.begin(), tree.node(node_b).vertices.end());
    groups.push_back(std::move(merged));
    for (int child : tree.root_children()) {
        if (child == node_a || child == node_b) continue;
        groups.push_back(tree.node(child).vertices);
    }
    // Untouched singleton children stay leaves; the merged group always has
    // at least two vertices and becomes a community node.
    return EncodingTree::from_partition(g, groups, false);
}

namespace {

EncodingTree optimize_matching(const WeightedGraph& g) {
    const double vol = g.volume();
    struct PairCand {
        double dh;
        int u, v;
    };
    std::vector<PairCand> cands;
    for (const Edge& e : g.edges()) {
        if (e.u == e.v || !(e.w > 0.0)) continue;
        const double vol_m = g.degree(e.u) + g.degree(e.v);
        const double dh = -2.0 * e.w / vol * std::log2(vol_m / vol);
        if (dh > 0.0) cands.push_back({dh, e.u, e.v});
    }
    // Leaf-pair deltas never change as other pairs match, so one sorted
    // sweep realizes the greedy loop.
    std::sort(cands.begin(), cands.end(), [](const PairCand& a, const PairCand& b) {
        if (a.dh != b.dh) return a.dh > b.dh;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
    std::vector<char> matched(g.vertex_count(), 0);
    std::vector<std::vector<int>> groups;
    for (const PairCand& c : cands) {
        if (matched[c.u] || matched[c.v]) continue;
        matched[c.u] = matched[c.v] = 1;
        groups.push_back({c.u, c.v});
    }
    for (int v = 0; v < g.vertex_count(); ++v)
        if (!matched[v]) groups.push_back({v});
    return EncodingTree::from_partition(g, groups, false);
}

EncodingTree optimize_community(const WeightedGraph& graph) {
    const int n = graph.vertex_count();
    if (n > 4096)
        throw std::invalid_argument("optimize_two_layer: dense optimizer is limited to 4096 vertices");
    const double vol = graph.volume();
    constexpr double kNoMerge = -std::numeric_limits<double>::infinity();

    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    for (const Edge& e : graph.edges())
        if (e.u != e.v && e.w > 0.0) {
            w[static_cast<std::size_t>(e.u) * n + e.v] = e.w;
            w[static_cast<std::size_t>(e.v) * n + e.u] = e.w;
        }

    struct Cluster {
        std::vector<int> members;
        double vol = 0.0, g = 0.0;
        double log_vol = 0.0;  // log2(vol / graph volume), shared by all candidate pairs
        int key = 0;
        bool alive = true;
    };
    std::vector<Cluster> cl(n);
    for (int v = 0; v < n; ++v) {
        cl[v].members = {v};
        cl[v].vol = graph.degree(v);
        cl[v].g = graph.degree(v);
        cl[v].log_vol = cl[v].vol == 0.0 ? 0.0 : std::log2(cl[v].vol / vol);
        cl[v].key = v;
    }

    // dh[a*n + b] (a < b by slot) caches the entropy change of merging the
    // two live clusters, or -infinity when they are detached or the merge
    // would not improve. A merge only invalidates pairs touching the merged
    // cluster, so each round refreshes one row and rescans for the best
    // candidate. The delta is evaluated with the freshest cluster as the
    // first argument; the accumulation order fixes the low bits, and with
    // them how exact ties rank.
    std::vector<double> dh(static_cast<std::size_t>(n) * n, kNoMerge);
    auto eval_pair = [&](int first, int second) {
        const double wab = w[static_cast<std::size_t>(first) * n + second];
        double val = kNoMerge;
        if (wab > 0.0) {  // merging detached clusters never lowers the entropy
            const double d =
                merge_delta(vol, cl[first].g, cl[first].vol, cl[second].g, cl[second].vol, wab,
                            cl[first].log_vol, cl[second].log_vol);
            if (d > 0.0) val = d;
        }
        const std::size_t a = std::min(first, second), b = std::max(first, second);
        dh[a * n + b] = val;
    };
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) eval_pair(a, b);

    while (true) {
        int best_a = -1, best_b = -1, best_ka = 0, best_kb = 0;
        double best = kNoMerge;
        for (int a = 0; a < n; ++a) {
            if (!cl[a].alive) continue;
            const double* row = dh.data() + static_cast<std::size_t>(a) * n;
            for (int b = a + 1; b < n; ++b) {
                const double d = row[b];
                if (d == kNoMerge || !cl[b].alive) continue;
                // Ties go to the pair with the smallest member vertices.
                int ka = cl[a].key, kb = cl[b].key;
                if (ka > kb) std::swap(ka, kb);
                if (d > best ||
                    (d == best && (ka < best_ka || (ka == best_ka && kb < best_kb)))) {
                    best = d;
                    best_a = a;
                    best_b = b;
                    best_ka = ka;
                    best_kb = kb;
                }
            }
        }
        if (best_a < 0) break;

        Cluster& a = cl[best_a];
        Cluster& b = cl[best_b];
        const double wab = w[static_cast<std::size_t>(best_a) * n + best_b];
        a.g = a.g + b.g - 2.0 * wab;
        a.vol += b.vol;
        a.log_vol = a.vol == 0.0 ? 0.0 : std::log2(a.vol / vol);
        a.key = std::min(a.key, b.key);
        std::vector<int> merged;
        merged.reserve(a.members.size() + b.members.size());
        std::merge(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                   std::back_inserter(merged));
        a.members = std::move(merged);
        b.alive = false;

        for (int t = 0; t < n; ++t) {
            if (t == best_a || !cl[t].alive) continue;
            const double combined = w[static_cast<std::size_t>(best_a) * n + t] +
                                    w[static_cast<std::size_t>(best_b) * n + t];
            w[static_cast<std::size_t>(best_a) * n + t] = combined;
            w[static_cast<std::size_t>(t) * n + best_a] = combined;
            eval_pair(best_a, t);
        }
    }

    std::vector<std::vector<int>> groups;
    for (const Cluster& c : cl)
        if (c.alive) groups.push_back(c.members);
    return EncodingTree::from_partition(graph, groups, false);
}

}  // namespace

EncodingTree optimize_two_layer(const WeightedGraph& g, OptimizeMode mode) {
    if (!(g.volume() > 0.0))
        throw std::invalid_argument("optimize_two_layer: undefined on zero-volume graphs");
    return mode == OptimizeMode::matching ? optimize_matching(g) : optimize_community(g);
}

EncodingTree identity_matching_tree(const WeightedGraph& g, int x_count) {
    if (x_count <= 0 || g.vertex_count() != 2 * x_count)
        throw std::invalid_argument("identity_matching_tree: vertex count must be twice x_count");
    std::vector<std::vector<int>> groups;
    groups.reserve(x_count);
    for (int i = 0; i < x_count; ++i) groups.push_back({i, x_count + i});
    return EncodingTree::from_partition(g, groups, false);
}

EncodingTree l_transform(const WeightedGraph& g, const EncodingTree& tree, int l) {
    if (l < 0) throw std::invalid_argument("l_transform: shift must be non-negative");
    const int n2 = g.vertex_count();
    if (n2 % 2 != 0) throw std::invalid_argument("l_transform: graph must have an even vertex count");
    const int n = n2 / 2;
    const auto& children = tree.root_children();
    if (static_cast<int>(children.size()) != n)
        throw std::invalid_argument("l_transform: tree is not a perfect matching");
    std::vector<int> x_of(n, -1);
    for (int child : children) {
        const TreeNode& nd = tree.node(child);
        if (nd.vertices.size() != 2 || nd.children.size() != 2)
            throw std::invalid_argument("l_transform: tree is not a perfect matching");
        const int x = nd.vertices[0];
        const int y = nd.vertices[1];
        if (x < 0 || x >= n || y < n || y >= n2)
            throw std::invalid_argument("l_transform: node does not pair an x with a y vertex");
        if (x_of[y - n] != -1) throw std::invalid_argument("l_transform: duplicate y vertex");
        x_of[y - n] = x;
    }
    std::vector<std::vector<int>> groups;
    groups.reserve(n);
    for (int i = 0; i < n; ++i) groups.push_back({x_of[(i + l) % n], n + i});
    return EncodingTree::from_partition(g, groups, false);
}

}  // namespace si2e
