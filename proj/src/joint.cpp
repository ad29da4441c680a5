#include "si2e/joint.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace si2e {

namespace {
constexpr double kSumTolerance = 1e-12;
}

JointDistribution::JointDistribution(const std::vector<std::vector<double>>& table) {
    if (table.empty() || table.front().empty())
        throw std::invalid_argument("JointDistribution: table must be non-empty");
    rows_ = static_cast<int>(table.size());
    cols_ = static_cast<int>(table.front().size());
    cells_.reserve(static_cast<std::size_t>(rows_) * cols_);
    double total = 0.0;
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != cols_)
            throw std::invalid_argument("JointDistribution: ragged table");
        for (double v : row) {
            if (!(v > 0.0))
                throw std::invalid_argument("JointDistribution: entries must be strictly positive");
            if (v > 1.0)
                throw std::invalid_argument("JointDistribution: entry exceeds 1");
            cells_.push_back(v);
            total += v;
        }
    }
    if (std::abs(total - 1.0) > kSumTolerance)
        throw std::invalid_argument("JointDistribution: entries must sum to 1");

    row_marginal_.assign(rows_, 0.0);
    col_marginal_.assign(cols_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            const double v = cells_[static_cast<std::size_t>(i) * cols_ + j];
            row_marginal_[i] += v;
            col_marginal_[j] += v;
        }
}

double JointDistribution::p(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw std::out_of_range("JointDistribution::p: index out of range");
    return cells_[static_cast<std::size_t>(i) * cols_ + j];
}

JointDistribution JointDistribution::transposed() const {
    std::vector<std::vector<double>> t(static_cast<std::size_t>(cols_),
                                       std::vector<double>(static_cast<std::size_t>(rows_)));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            t[j][i] = cells_[static_cast<std::size_t>(i) * cols_ + j];
    return JointDistribution(t);
}

JointDistribution JointDistribution::load_matrix(std::istream& in) {
    std::vector<std::vector<double>> table;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof())
            throw std::runtime_error("JointDistribution::load_matrix: malformed number");
        if (!row.empty()) table.push_back(std::move(row));
    }
    if (table.empty())
        throw std::runtime_error("JointDistribution::load_matrix: no rows found");
    return JointDistribution(table);
}

}  // namespace si2e
