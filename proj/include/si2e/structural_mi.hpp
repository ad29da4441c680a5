#pragma once

#include <span>
#include <utility>

#include "si2e/encoding_tree.hpp"
#include "si2e/joint.hpp"

namespace si2e {

enum class Axis { rows, cols };

// H^SI of one variable: the one-layer structural entropy of its bipartite
// graph restricted to that side, -sum_x (p(x)/2) log2(p(x)/2).
double marginal_structural_entropy(const JointDistribution& joint, Axis axis);

// Structural entropy of the bipartite graph under the shift-l matching tree,
// evaluated through the per-node closed form. Square joints only.
double joint_structural_entropy(const JointDistribution& joint, int l);

// Structural mutual information, closed form:
// sum_{i,j} p(x_i, y_j) * log2(2 / (p(x_i) + p(y_j))). Square joints only.
double smi_closed_form(const JointDistribution& joint);

// Same quantity assembled from first principles: build the bipartite graph,
// take the index matching tree, apply every shift l = 0..n-1 and accumulate
// the n per-shift terms from generic tree entropies. Serves as the
// independent cross-check for the closed form.
double smi_by_definition(const JointDistribution& joint);

struct ShannonSummary {
    double h_rows = 0.0;       // H(X)
    double h_cols = 0.0;       // H(Y)
    double h_joint = 0.0;      // H(X,Y)
    double h_rows_given_cols = 0.0;
    double mi = 0.0;           // I(X;Y)
};

ShannonSummary shannon(const JointDistribution& joint);

struct TheoremReport {
    double lhs = 0.0;      // I(X;Y)
    double mid = 0.0;      // structural MI
    double rhs = 0.0;      // I(X;Y) + (1 - eps) * H(X,Y)
    double epsilon = 0.0;  // min over cells of min(log_{p_ij} p_i, log_{p_ij} p_j)
    bool holds = false;    // lhs <= mid <= rhs within 1e-9
};

// Two-sided sandwich between Shannon MI and structural MI.
TheoremReport theorem32_report(const JointDistribution& joint);

// For a diagonal joint built from the given marginal: returns the pair
// (structural MI, Shannon MI) evaluated through their diagonal closed forms;
// both must equal the marginal's Shannon entropy.
std::pair<double, double> theorem41_check(std::span<const double> marginal);

}  // namespace si2e
