#pragma once

// Shared fixtures and independent oracles for the test suite.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "si2e/graph.hpp"
#include "si2e/joint.hpp"
#include "si2e/rng.hpp"

namespace testutil {

// Strictly positive probability vector summing to one (up to rounding of the
// final normalization, well inside the 1e-12 slack the validators allow).
inline std::vector<double> random_simplex(si2e::Rng& rng, int n) {
    std::vector<double> p(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (auto& x : p) {
        x = 0.05 + rng.uniform01();
        sum += x;
    }
    for (auto& x : p) x /= sum;
    return p;
}

inline std::vector<std::vector<double>> random_joint_table(si2e::Rng& rng, int rows, int cols) {
    const std::vector<double> flat = random_simplex(rng, rows * cols);
    std::vector<std::vector<double>> table(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i)
        table[static_cast<std::size_t>(i)].assign(flat.begin() + static_cast<std::ptrdiff_t>(i) * cols,
                                                  flat.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols);
    return table;
}

// Every set partition of {0..n-1}, enumerated through restricted growth
// strings. Bell numbers stay small for the n used in tests (Bell(7) = 877).
inline std::vector<std::vector<std::vector<int>>> all_partitions(int n) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<int> rgs(static_cast<std::size_t>(n), 0);
    while (true) {
        const int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<std::vector<int>> groups(static_cast<std::size_t>(blocks));
        for (int i = 0; i < n; ++i) groups[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i);
        out.push_back(std::move(groups));
        int i = n - 1;
        for (; i > 0; --i) {
            const int cap = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
            if (rgs[static_cast<std::size_t>(i)] < cap) break;
        }
        if (i == 0) break;
        ++rgs[static_cast<std::size_t>(i)];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
    }
    return out;
}

// Literal step-by-step construction of the degree-realizing graph: start
// from the two-vertex solution and rescale the whole graph each time a
// vertex joins. Numerically rougher than the closed form the library uses,
// which makes it an independent cross-check rather than a copy.
inline si2e::WeightedGraph degree_realization_by_steps(std::span<const double> probs) {
    const int n = static_cast<int>(probs.size());
    if (n == 1) return si2e::WeightedGraph(1, {{0, 0, probs[0]}});
    std::vector<std::vector<double>> w(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    double c = probs[0] + probs[1];
    const double q0 = probs[0] / c;
    const double q1 = probs[1] / c;
    w[0][1] = w[1][0] = std::min(q0, q1);
    if (q0 > q1)
        w[0][0] = q0 - q1;
    else
        w[1][1] = q1 - q0;
    for (int k = 2; k < n; ++k) {
        const double c_next = c + probs[static_cast<std::size_t>(k)];
        const double scale = (c / c_next) * (c / c_next);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *= scale;
                w[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                    w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
        for (int i = 0; i < k; ++i) {
            const double cross = probs[static_cast<std::size_t>(i)] * probs[static_cast<std::size_t>(k)] /
                                 (c_next * c_next);
            w[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = cross;
            w[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = cross;
        }
        w[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] =
            (probs[static_cast<std::size_t>(k)] / c_next) * (probs[static_cast<std::size_t>(k)] / c_next);
        c = c_next;
    }
    std::vector<si2e::Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > 0.0)
                edges.push_back({i, j, w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});
    return si2e::WeightedGraph(n, std::move(edges));
}

// Sparse random graph with self-loops sprinkled in; always carries at least
// one edge so its volume is positive.
inline si2e::WeightedGraph random_graph(si2e::Rng& rng, int n, double density) {
    std::vector<si2e::Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double roll = rng.uniform01();
            if (i == j) {
                if (roll < density * 0.25) edges.push_back({i, j, 0.1 + rng.uniform01()});
            } else if (roll < density) {
                edges.push_back({i, j, 0.1 + rng.uniform01()});
            }
        }
    if (edges.empty()) edges.push_back({0, n > 1 ? 1 : 0, 1.0});
    return si2e::WeightedGraph(n, std::move(edges));
}

}  // namespace testutil
