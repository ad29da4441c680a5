#include "si2e/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "si2e/encoding_tree.hpp"
#include "si2e/exploration.hpp"
#include "si2e/graph.hpp"
#include "si2e/rng.hpp"
#include "si2e/structural_mi.hpp"
#include "si2e/variational.hpp"

namespace si2e {

namespace {

std::string format_err(double err) {
    std::ostringstream out;
    out << std::scientific << std::setprecision(2) << err;
    return out.str();
}

std::vector<double> random_simplex(Rng& rng, int n) {
    std::vector<double> p(n);
    double total = 0.0;
    for (double& v : p) {
        v = 0.05 + 0.95 * rng.uniform01();
        total += v;
    }
    for (double& v : p) v /= total;
    // One compensation pass so the sum lands within the strict validators.
    double sum = 0.0;
    for (double v : p) sum += v;
    p.back() += 1.0 - sum;
    return p;
}

JointDistribution random_joint(Rng& rng, int rows, int cols) {
    std::vector<std::vector<double>> table(rows, std::vector<double>(cols));
    double total = 0.0;
    for (auto& row : table)
        for (double& v : row) {
            v = 0.05 + 0.95 * rng.uniform01();
            total += v;
        }
    for (auto& row : table)
        for (double& v : row) v /= total;
    double sum = 0.0;
    for (const auto& row : table)
        for (double v : row) sum += v;
    table.back().back() += 1.0 - sum;
    return JointDistribution(table);
}

TabularChannel random_channel(Rng& rng, int rows, int cols) {
    std::vector<std::vector<double>> table(rows, std::vector<double>(cols));
    for (auto& row : table) {
        double total = 0.0;
        for (double& v : row) {
            v = 0.05 + 0.95 * rng.uniform01();
            total += v;
        }
        for (double& v : row) v /= total;
        double sum = 0.0;
        for (double v : row) sum += v;
        row.back() += 1.0 - sum;
    }
    return TabularChannel(table);
}

WeightedGraph random_graph(Rng& rng, int n, double edge_prob, double loop_prob) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform01() < edge_prob)
                edges.push_back({u, v, 0.1 + 0.9 * rng.uniform01()});
        if (rng.uniform01() < loop_prob) edges.push_back({u, u, 0.1 + 0.9 * rng.uniform01()});
    }
    if (edges.empty()) {
        const int u = rng.uniform_int(0, n - 2);
        edges.push_back({u, u + 1, 0.1 + 0.9 * rng.uniform01()});
    }
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph random_sparse_bipartite(Rng& rng, int nx, int ny) {
    std::vector<Edge> edges;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            if (rng.uniform01() < 0.35) edges.push_back({i, nx + j, 0.1 + 0.9 * rng.uniform01()});
    if (edges.empty())
        edges.push_back({rng.uniform_int(0, nx - 1), nx + rng.uniform_int(0, ny - 1),
                         0.1 + 0.9 * rng.uniform01()});
    return WeightedGraph(nx + ny, std::move(edges));
}

std::vector<std::vector<int>> random_partition(Rng& rng, int n, int max_groups) {
    const int groups = rng.uniform_int(1, std::min(n, max_groups));
    std::vector<std::vector<int>> members(groups);
    for (int v = 0; v < n; ++v) members[rng.uniform_int(0, groups - 1)].push_back(v);
    members.erase(std::remove_if(members.begin(), members.end(),
                                 [](const std::vector<int>& m) { return m.empty(); }),
                  members.end());
    return members;
}

// The defining sum with its sign deliberately corrupted (the per-shift tree
// entropy added instead of subtracted); used to prove the oracle check can
// actually fail.
double smi_by_definition_sign_flipped(const JointDistribution& joint) {
    const int n = joint.rows();
    const WeightedGraph graph = bipartite_from_joint(joint);
    const EncodingTree base = identity_matching_tree(graph, n);
    const double hx = marginal_structural_entropy(joint, Axis::rows);
    const double hy = marginal_structural_entropy(joint, Axis::cols);
    double total = 0.0;
    for (int l = 0; l < n; ++l)
        total += hx + hy + structural_entropy(graph, l_transform(graph, base, l));
    return total;
}

CheckResult check_smi_oracle(const VerifyOptions& options) {
    Rng rng(options.seed + 1);
    double max_err = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 7;  // 2..8
        const JointDistribution joint = random_joint(rng, n, n);
        const double closed = smi_closed_form(joint);
        const double defined = options.mutate_smi_sign ? smi_by_definition_sign_flipped(joint)
                                                       : smi_by_definition(joint);
        max_err = std::max(max_err, std::abs(closed - defined));
    }
    CheckResult r{"smi-oracle", max_err <= 1e-9,
                  "100 square joints (n=2..8), max |closed form - defining sum| = " +
                      format_err(max_err),
                  0.0};
    return r;
}

CheckResult check_theorem32(const VerifyOptions& options) {
    Rng rng(options.seed + 2);
    int violations = 0;
    double worst_margin = 1e300;
    for (int t = 0; t < 1000; ++t) {
        const int n = (t % 25 == 0) ? 1 : rng.uniform_int(2, 6);
        const JointDistribution joint = random_joint(rng, n, n);
        const TheoremReport rep = theorem32_report(joint);
        if (!rep.holds) ++violations;
        worst_margin = std::min({worst_margin, rep.mid - rep.lhs, rep.rhs - rep.mid});
    }
    std::ostringstream detail;
    detail << "1000 joints, violations = " << violations
           << ", tightest margin = " << format_err(worst_margin);
    return {"theorem32", violations == 0, detail.str(), 0.0};
}

CheckResult check_theorem41(const VerifyOptions& options) {
    Rng rng(options.seed + 3);
    double max_err = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int n = rng.uniform_int(2, 10);
        const std::vector<double> marginal = random_simplex(rng, n);
        double h = 0.0;
        for (double p : marginal) h -= p * std::log2(p);
        const auto [smi, mi] = theorem41_check(marginal);
        max_err = std::max({max_err, std::abs(smi - h), std::abs(mi - h)});
    }
    return {"theorem41", max_err <= 1e-12,
            "50 diagonal joints, max |entropy mismatch| = " + format_err(max_err), 0.0};
}

CheckResult check_prop31(const VerifyOptions& options) {
    Rng rng(options.seed + 4);
    int bad_pairs = 0, internal_nodes = 0;
    for (int t = 0; t < 200; ++t) {
        const int nx = rng.uniform_int(2, 8), ny = rng.uniform_int(2, 8);
        const WeightedGraph g = random_sparse_bipartite(rng, nx, ny);
        const EncodingTree tree = optimize_two_layer(g, OptimizeMode::matching);
        for (int child : tree.root_children()) {
            const TreeNode& nd = tree.node(child);
            if (nd.vertices.size() < 2) continue;
            ++internal_nodes;
            if (!(g.weight_between(nd.vertices[0], nd.vertices[1]) > 0.0)) ++bad_pairs;
        }
    }
    std::ostringstream detail;
    detail << "200 sparse bipartite graphs, " << internal_nodes
           << " matched pairs, non-adjacent pairs = " << bad_pairs;
    return {"prop31", bad_pairs == 0, detail.str(), 0.0};
}

CheckResult check_stretch(const VerifyOptions& options) {
    Rng rng(options.seed + 5);
    double max_err = 0.0;
    for (int t = 0; t < 200; ++t) {
        const int n = rng.uniform_int(3, 10);
        const WeightedGraph g = random_graph(rng, n, 0.5, 0.15);
        EncodingTree tree = EncodingTree::one_layer(g);
        const int pre_merges = rng.uniform_int(0, 2);
        for (int m = 0; m < pre_merges; ++m) {
            const std::vector<int> kids = tree.root_children();
            if (kids.size() < 3) break;
            const int i = rng.uniform_int(0, static_cast<int>(kids.size()) - 1);
            const int j = rng.uniform_int(0, static_cast<int>(kids.size()) - 1);
            if (i == j) continue;
            tree = apply_stretch(g, tree, kids[i], kids[j]);
        }
        const std::vector<int> kids = tree.root_children();
        const int i = rng.uniform_int(0, static_cast<int>(kids.size()) - 1);
        int j = i;
        while (j == i) j = rng.uniform_int(0, static_cast<int>(kids.size()) - 1);
        const double before = structural_entropy(g, tree);
        const double delta = stretch_delta(g, tree, kids[i], kids[j]);
        const double after = structural_entropy(g, apply_stretch(g, tree, kids[i], kids[j]));
        max_err = std::max(max_err, std::abs(delta - (before - after)));
    }
    // Two disjoint unit edges: merging one edge's endpoints removes exactly
    // half a bit.
    const WeightedGraph pair_graph(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    const EncodingTree flat = EncodingTree::one_layer(pair_graph);
    const double fixture = stretch_delta(pair_graph, flat, 1, 2);
    const double fixture_err = std::abs(fixture - 0.5);
    const bool pass = max_err <= 1e-10 && fixture_err <= 1e-12;
    std::ostringstream detail;
    detail << "200 random merges, max |delta - entropy drop| = " << format_err(max_err)
           << "; disjoint-edges fixture |delta - 0.5| = " << format_err(fixture_err);
    return {"stretch", pass, detail.str(), 0.0};
}

CheckResult check_prop42(const VerifyOptions& options) {
    Rng rng(options.seed + 6);
    double max_err = 0.0;
    int disconnected = 0;
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + t % 16;
        const std::vector<double> probs = random_simplex(rng, n);
        const WeightedGraph g = degree_realization(probs);
        for (int v = 0; v < n; ++v) max_err = std::max(max_err, std::abs(g.degree(v) - probs[v]));
        max_err = std::max(max_err, std::abs(g.volume() - 1.0));
        if (!g.is_connected()) ++disconnected;
    }
    std::ostringstream detail;
    detail << "200 simplex points (n<=16), max |degree - p| = " << format_err(max_err)
           << ", disconnected graphs = " << disconnected;
    return {"prop42", max_err <= 1e-12 && disconnected == 0, detail.str(), 0.0};
}

CheckResult check_theorem43(const VerifyOptions& options) {
    Rng rng(options.seed + 7);
    int violations = 0;
    double tightest = 1e300;
    for (int t = 0; t < 200; ++t) {
        const int n = rng.uniform_int(2, 12);
        const std::vector<double> probs = random_simplex(rng, n);
        const std::vector<std::vector<int>> partition = random_partition(rng, n, 4);
        const ExactVcse r = exact_vcse(probs, partition);
        if (!r.sandwich_holds) ++violations;
        tightest = std::min({tightest, (r.h_v0 - r.h_v1) - r.zeta * r.h_v0,
                             r.tree_entropy - (r.h_v0 - r.h_v1), r.h_v0 - r.tree_entropy});
    }
    std::ostringstream detail;
    detail << "200 (probs, partition) draws, violations = " << violations
           << ", tightest margin = " << format_err(tightest);
    return {"theorem43", violations == 0, detail.str(), 0.0};
}

CheckResult check_bounds(const VerifyOptions& options) {
    Rng rng(options.seed + 8);
    int decomposition_failures = 0;
    double max_tight_err = 0.0;   // equality error at the true decoders
    double worst_slack = 1e300;   // inequality margin under random decoders
    for (int t = 0; t < 200; ++t) {
        const int ns = rng.uniform_int(2, 6);
        const JointDistribution sq = random_joint(rng, ns, ns);
        if (!smi_upper_decomposition_holds(sq)) ++decomposition_failures;

        const int nz = rng.uniform_int(2, 6), nc = rng.uniform_int(2, 6);
        const JointDistribution joint = random_joint(rng, nz, nc);
        const ShannonSummary s = shannon(joint);

        const double up_true = l_up(joint, true_marginal_of_rows(joint));
        max_tight_err = std::max(max_tight_err, std::abs(up_true - s.mi));
        const double up_rand = l_up(joint, random_channel(rng, 1, nz));
        worst_slack = std::min(worst_slack, up_rand - s.mi);

        const double zgs_true = l_zgs(joint, true_rows_given_cols(joint));
        max_tight_err = std::max(max_tight_err, std::abs(zgs_true - s.h_rows_given_cols));
        const double zgs_rand = l_zgs(joint, random_channel(rng, nc, nz));
        worst_slack = std::min(worst_slack, zgs_rand - s.h_rows_given_cols);

        // For the decoder bound the target is I(Z;S') - H(S').
        const double sgz_target = s.mi - s.h_cols;
        const double sgz_true = l_sgz(joint, true_cols_given_rows(joint));
        max_tight_err = std::max(max_tight_err, std::abs(sgz_true - sgz_target));
        const double sgz_rand = l_sgz(joint, random_channel(rng, nz, nc));
        worst_slack = std::min(worst_slack, sgz_target - sgz_rand);
    }
    const bool pass =
        decomposition_failures == 0 && max_tight_err <= 1e-12 && worst_slack >= -1e-9;
    std::ostringstream detail;
    detail << "200 draws; decomposition failures = " << decomposition_failures
           << ", max tightness error = " << format_err(max_tight_err)
           << ", smallest slack = " << format_err(worst_slack);
    return {"bounds", pass, detail.str(), 0.0};
}

CheckResult check_knn(const VerifyOptions& options) {
    Rng rng(options.seed + 9);
    const double fixture = knn_entropy({{0.0}, {1.0}, {3.0}}, 1);
    const double fixture_err = std::abs(fixture - 4.0 / 3.0);

    double max_translate_err = 0.0, max_scale_err = 0.0;
    const double grid = 1.0 / static_cast<double>(1 << 20);
    for (int t = 0; t < 100; ++t) {
        const int n = rng.uniform_int(5, 40);
        const int dim = rng.uniform_int(1, 4);
        const int k = rng.uniform_int(1, std::min(3, n - 1));
        std::vector<std::vector<double>> points;
        while (static_cast<int>(points.size()) < n) {
            std::vector<double> p(dim);
            for (double& c : p)
                c = static_cast<double>(rng.uniform_below(1u << 20)) * grid;
            if (std::find(points.begin(), points.end(), p) == points.end())
                points.push_back(std::move(p));
        }
        const double h = knn_entropy(points, k);

        std::vector<double> shift(dim);
        for (double& c : shift) c = static_cast<double>(rng.uniform_below(1u << 20)) * grid;
        std::vector<std::vector<double>> moved = points;
        for (auto& p : moved)
            for (int d = 0; d < dim; ++d) p[d] += shift[d];
        max_translate_err = std::max(max_translate_err, std::abs(knn_entropy(moved, k) - h));

        const double scale = (t % 3 == 0) ? 0.5 : (t % 3 == 1) ? 2.0 : 4.0;
        std::vector<std::vector<double>> scaled = points;
        for (auto& p : scaled)
            for (double& c : p) c *= scale;
        const double expected = h + dim * std::log2(scale);
        max_scale_err = std::max(max_scale_err, std::abs(knn_entropy(scaled, k) - expected));
    }
    const bool pass =
        fixture_err <= 1e-12 && max_translate_err <= 1e-12 && max_scale_err <= 1e-12;
    std::ostringstream detail;
    detail << "fixture |H - 4/3| = " << format_err(fixture_err)
           << ", max translation error = " << format_err(max_translate_err)
           << ", max scale-law error = " << format_err(max_scale_err);
    return {"knn", pass, detail.str(), 0.0};
}

}  // namespace

const std::vector<std::string>& verification_group_names() {
    static const std::vector<std::string> names = {
        "smi-oracle", "theorem32", "theorem41", "prop31", "stretch",
        "prop42",     "theorem43", "bounds",    "knn",
    };
    return names;
}

CheckResult run_check(const std::string& group, const VerifyOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    CheckResult result;
    if (group == "smi-oracle") result = check_smi_oracle(options);
    else if (group == "theorem32") result = check_theorem32(options);
    else if (group == "theorem41") result = check_theorem41(options);
    else if (group == "prop31") result = check_prop31(options);
    else if (group == "stretch") result = check_stretch(options);
    else if (group == "prop42") result = check_prop42(options);
    else if (group == "theorem43") result = check_theorem43(options);
    else if (group == "bounds") result = check_bounds(options);
    else if (group == "knn") result = check_knn(options);
    else throw std::invalid_argument("unknown check group '" + group + "'");
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

int run_verify(const VerifyOptions& options, std::ostream& out) {
    std::vector<std::string> groups;
    if (options.only.empty()) {
        groups = verification_group_names();
    } else {
        const auto& names = verification_group_names();
        if (std::find(names.begin(), names.end(), options.only) == names.end()) {
            out << "unknown check group '" << options.only << "'; available:";
            for (const std::string& name : names) out << ' ' << name;
            out << '\n';
            return 2;
        }
        groups.push_back(options.only);
    }

    int failures = 0;
    for (const std::string& group : groups) {
        const CheckResult r = run_check(group, options);
        out << std::left << std::setw(12) << r.group << (r.pass ? "PASS" : "FAIL") << "  "
            << std::right << std::fixed << std::setprecision(3) << std::setw(7) << r.seconds
            << "s  " << r.detail << '\n';
        if (!r.pass) ++failures;
    }
    out << (failures == 0 ? "all checks passed" : "checks FAILED") << " ("
        << groups.size() - failures << '/' << groups.size() << ")\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace si2e
