#pragma once

#include <iosfwd>
#include <vector>

namespace si2e {

// Finite joint distribution over two discrete variables, stored row-major.
// Rows index the first variable, columns the second. Every entry must be
// strictly positive and the table must sum to one (1e-12 slack).
class JointDistribution {
public:
    explicit JointDistribution(const std::vector<std::vector<double>>& table);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double p(int i, int j) const;

    // Marginals of the row variable (length rows()) and column variable.
    const std::vector<double>& row_marginal() const noexcept { return row_marginal_; }
    const std::vector<double>& col_marginal() const noexcept { return col_marginal_; }

    JointDistribution transposed() const;

    // Reads one row per line, whitespace-separated entries, '#' comments.
    static JointDistribution load_matrix(std::istream& in);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> cells_;
    std::vector<double> row_marginal_;
    std::vector<double> col_marginal_;
};

}  // namespace si2e
