#pragma once

#include <vector>

#include "si2e/joint.hpp"

namespace si2e {

// Row-stochastic table of conditional (or, with a single row, marginal)
// probabilities. Entries strictly positive, each row sums to one.
class TabularChannel {
public:
    explicit TabularChannel(const std::vector<std::vector<double>>& rows);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    double q(int row, int col) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> cells_;
};

// True decoders derived from a joint table (rows = Z, cols = S):
TabularChannel true_marginal_of_rows(const JointDistribution& joint);      // 1 x |Z|
TabularChannel true_rows_given_cols(const JointDistribution& joint);       // |S| x |Z|, p(z|s)
TabularChannel true_cols_given_rows(const JointDistribution& joint);       // |Z| x |S|, p(s|z)

// Upper bound on I(Z;S) through a marginal proposal q_m over Z:
// sum_{z,s} p(z,s) log2(p(z|s) / q_m(z)). Equals I exactly at q_m = p(z).
double l_up(const JointDistribution& joint_zs, const TabularChannel& q_m);

// Cross-entropy upper bound on H(Z|S): sum p(z,s) log2(1 / q(z|s)),
// with q indexed (s row, z column).
double l_zgs(const JointDistribution& joint_zs, const TabularChannel& q);

// Lower-bound surrogate for I(Z;S'): sum p(z,s') log2 q(s'|z), with q indexed
// (z row, s' column). Equals I(Z;S') - H(S') at the true conditional.
double l_sgz(const JointDistribution& joint_zs_next, const TabularChannel& q);

struct LossBundle {
    double up = 0.0;
    double zgs = 0.0;
    double sgz = 0.0;
    double eta = 1.0;
    double combined = 0.0;  // up + zgs + eta * sgz
};

LossBundle combined_loss(double up, double zgs, double sgz, double eta);

// Structural MI never exceeds I(X;Y) + H(X|Y) + H(Y); true within 1e-9.
bool smi_upper_decomposition_holds(const JointDistribution& joint);

}  // namespace si2e
