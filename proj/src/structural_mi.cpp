#include "si2e/structural_mi.hpp"

#include <cmath>
#include <stdexcept>

namespace si2e {

namespace {

void require_square(const JointDistribution& joint, const char* what) {
    if (!joint.square())
        throw std::invalid_argument(std::string(what) + ": joint table must be square");
}

}  // namespace

double marginal_structural_entropy(const JointDistribution& joint, Axis axis) {
    const auto& marginal = axis == Axis::rows ? joint.row_marginal() : joint.col_marginal();
    double h = 0.0;
    for (double p : marginal) h -= p / 2.0 * std::log2(p / 2.0);
    return h;
}

double joint_structural_entropy(const JointDistribution& joint, int l) {
    require_square(joint, "joint_structural_entropy");
    if (l < 0) throw std::invalid_argument("joint_structural_entropy: shift must be non-negative");
    const int n = joint.rows();
    const auto& px = joint.row_marginal();
    const auto& py = joint.col_marginal();
    double h = 0.0;
    for (int i = 0; i < n; ++i) {
        const int ix = (i + l) % n;  // x partner of node i under shift l
        const double vol = px[ix] + py[i];
        const double g = vol - 2.0 * joint.p(ix, i);
        h -= g / 2.0 * std::log2(vol / 2.0);
        h -= px[ix] / 2.0 * std::log2(px[ix] / vol);
        h -= py[i] / 2.0 * std::log2(py[i] / vol);
    }
    return h;
}

double smi_closed_form(const JointDistribution& joint) {
    require_square(joint, "smi_closed_form");
    const int n = joint.rows();
    const auto& px = joint.row_marginal();
    const auto& py = joint.col_marginal();
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            total += joint.p(i, j) * std::log2(2.0 / (px[i] + py[j]));
    return total;
}

double smi_by_definition(const JointDistribution& joint) {
    require_square(joint, "smi_by_definition");
    const int n = joint.rows();
    const WeightedGraph graph = bipartite_from_joint(joint);
    const EncodingTree base = identity_matching_tree(graph, n);
    const double hx = marginal_structural_entropy(joint, Axis::rows);
    const double hy = marginal_structural_entropy(joint, Axis::cols);
    double total = 0.0;
    for (int l = 0; l < n; ++l) {
        const EncodingTree shifted = l_transform(graph, base, l);
        total += hx + hy - structural_entropy(graph, shifted);
    }
    return total;
}

ShannonSummary shannon(const JointDistribution& joint) {
    ShannonSummary s;
    for (double p : joint.row_marginal()) s.h_rows -= p * std::log2(p);
    for (double p : joint.col_marginal()) s.h_cols -= p * std::log2(p);
    for (int i = 0; i < joint.rows(); ++i)
        for (int j = 0; j < joint.cols(); ++j) {
            const double p = joint.p(i, j);
            s.h_joint -= p * std::log2(p);
        }
    s.h_rows_given_cols = s.h_joint - s.h_cols;
    s.mi = s.h_rows + s.h_cols - s.h_joint;
    return s;
}

TheoremReport theorem32_report(const JointDistribution& joint) {
    require_square(joint, "theorem32_report");
    const int n = joint.rows();
    const auto& px = joint.row_marginal();
    const auto& py = joint.col_marginal();
    TheoremReport report;
    const ShannonSummary s = shannon(joint);
    report.lhs = s.mi;
    report.mid = smi_closed_form(joint);

    double eps = 1.0;  // degenerate one-cell tables are tight by convention
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double lp = std::log(joint.p(i, j));
            if (lp == 0.0) continue;  // p = 1 only happens for a 1x1 table
            const double ei = std::log(px[i]) / lp;
            const double ej = std::log(py[j]) / lp;
            eps = std::min({eps, ei, ej});
        }
    report.epsilon = eps;
    report.rhs = report.lhs + (1.0 - eps) * s.h_joint;
    constexpr double tol = 1e-9;
    report.holds = report.lhs <= report.mid + tol && report.mid <= report.rhs + tol;
    return report;
}

std::pair<double, double> theorem41_check(std::span<const double> marginal) {
    if (marginal.empty()) throw std::invalid_argument("theorem41_check: empty marginal");
    double total = 0.0;
    for (double p : marginal) {
        if (!(p > 0.0)) throw std::invalid_argument("theorem41_check: probabilities must be positive");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("theorem41_check: probabilities must sum to 1");
    // Diagonal joint: only cells p(x_i, y_i) = p_i survive, and both marginal
    // vectors equal the input, so each sum runs over the diagonal alone.
    double smi = 0.0, mi = 0.0;
    for (double p : marginal) {
        smi += p * std::log2(2.0 / (p + p));
        mi += p * std::log2(p / (p * p));
    }
    return {smi, mi};
}

}  // namespace si2e
