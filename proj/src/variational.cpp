#include "si2e/variational.hpp"

#include <cmath>
#include <stdexcept>

#include "si2e/structural_mi.hpp"

namespace si2e {

TabularChannel::TabularChannel(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty())
        throw std::invalid_argument("TabularChannel: table must be non-empty");
    rows_ = static_cast<int>(rows.size());
    cols_ = static_cast<int>(rows.front().size());
    cells_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != cols_)
            throw std::invalid_argument("TabularChannel: ragged table");
        double total = 0.0;
        for (double v : row) {
            if (!(v > 0.0))
                throw std::invalid_argument("TabularChannel: entries must be strictly positive");
            cells_.push_back(v);
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("TabularChannel: each row must sum to 1");
    }
}

double TabularChannel::q(int row, int col) const {
    if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
        throw std::out_of_range("TabularChannel::q: index out of range");
    return cells_[static_cast<std::size_t>(row) * cols_ + col];
}

TabularChannel true_marginal_of_rows(const JointDistribution& joint) {
    return TabularChannel({joint.row_marginal()});
}

TabularChannel true_rows_given_cols(const JointDistribution& joint) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(joint.cols()),
                                          std::vector<double>(static_cast<std::size_t>(joint.rows())));
    for (int s = 0; s < joint.cols(); ++s)
        for (int z = 0; z < joint.rows(); ++z)
            rows[s][z] = joint.p(z, s) / joint.col_marginal()[s];
    return TabularChannel(rows);
}

TabularChannel true_cols_given_rows(const JointDistribution& joint) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(joint.rows()),
                                          std::vector<double>(static_cast<std::size_t>(joint.cols())));
    for (int z = 0; z < joint.rows(); ++z)
        for (int s = 0; s < joint.cols(); ++s)
            rows[z][s] = joint.p(z, s) / joint.row_marginal()[z];
    return TabularChannel(rows);
}

double l_up(const JointDistribution& joint_zs, const TabularChannel& q_m) {
    if (q_m.rows() != 1 || q_m.cols() != joint_zs.rows())
        throw std::invalid_argument("l_up: proposal must be a single row over the Z alphabet");
    const auto& ps = joint_zs.col_marginal();
    double total = 0.0;
    for (int z = 0; z < joint_zs.rows(); ++z)
        for (int s = 0; s < joint_zs.cols(); ++s) {
            const double pzs = joint_zs.p(z, s);
            total += pzs * std::log2(pzs / (ps[s] * q_m.q(0, z)));
        }
    return total;
}

double l_zgs(const JointDistribution& joint_zs, const TabularChannel& q) {
    if (q.rows() != joint_zs.cols() || q.cols() != joint_zs.rows())
        throw std::invalid_argument("l_zgs: decoder must map the S alphabet onto Z rows");
    double total = 0.0;
    for (int z = 0; z < joint_zs.rows(); ++z)
        for (int s = 0; s < joint_zs.cols(); ++s)
            total -= joint_zs.p(z, s) * std::log2(q.q(s, z));
    return total;
}

double l_sgz(const JointDistribution& joint_zs_next, const TabularChannel& q) {
    if (q.rows() != joint_zs_next.rows() || q.cols() != joint_zs_next.cols())
        throw std::invalid_argument("l_sgz: decoder must map the Z alphabet onto S' rows");
    double total = 0.0;
    for (int z = 0; z < joint_zs_next.rows(); ++z)
        for (int s = 0; s < joint_zs_next.cols(); ++s)
            total += joint_zs_next.p(z, s) * std::log2(q.q(z, s));
    return total;
}

LossBundle combined_loss(double up, double zgs, double sgz, double eta) {
    if (eta < 0.0) throw std::invalid_argument("combined_loss: eta must be non-negative");
    LossBundle bundle;
    bundle.up = up;
    bundle.zgs = zgs;
    bundle.sgz = sgz;
    bundle.eta = eta;
    bundle.combined = up + zgs + eta * sgz;
    return bundle;
}

bool smi_upper_decomposition_holds(const JointDistribution& joint) {
    const ShannonSummary s = shannon(joint);
    return smi_closed_form(joint) <= s.mi + s.h_rows_given_cols + s.h_cols + 1e-9;
}

}  // namespace si2e
