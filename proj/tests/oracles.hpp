#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "motifgcn/dense.hpp"
#include "motifgcn/graph.hpp"
#include "motifgcn/motifs.hpp"
#include "motifgcn/sparse.hpp"

namespace oracles {

using motifgcn::DenseMatrix;
using motifgcn::DirectedGraph;
using motifgcn::SparseMatrix;

inline DenseMatrix random_dense(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                double lo = -1.0, double hi = 1.0) {
    DenseMatrix m(rows, cols);
    motifgcn::fill_uniform(m, rng, lo, hi);
    return m;
}

// G(n, p) directed graph, no self-loops, weights in [0.2, 2).
inline DirectedGraph random_digraph(std::size_t n, double p, std::mt19937_64& rng,
                                    bool unit_weights = false) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> wdist(0.2, 2.0);
    std::vector<motifgcn::Triplet> arcs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (coin(rng) < p) arcs.push_back({i, j, unit_weights ? 1.0 : wdist(rng)});
        }
    return motifgcn::graph_from_triplets(n, true, std::move(arcs));
}

// Plain monomial-basis evaluation of sum_j theta_j A^j f by Horner's rule on
// the densified operator.
inline DenseMatrix horner_apply(const SparseMatrix& op, const std::vector<double>& theta,
                                const DenseMatrix& f) {
    const DenseMatrix a = motifgcn::to_dense(op);
    DenseMatrix acc = f;
    acc.scale_inplace(theta.back());
    for (std::size_t j = theta.size() - 1; j-- > 0;) {
        acc = motifgcn::matmul(a, acc);
        acc.axpy(theta[j], f);
    }
    return acc;
}

// Dense evaluation of one operator word (application order: word[0] first).
inline DenseMatrix dense_word_apply(const std::vector<const SparseMatrix*>& ops,
                                    const std::vector<int>& word, const DenseMatrix& f) {
    DenseMatrix acc = f;
    for (int k : word) acc = motifgcn::matmul(motifgcn::to_dense(*ops[static_cast<std::size_t>(k)]), acc);
    return acc;
}

struct BruteTriadCounts {
    std::array<std::map<std::pair<std::size_t, std::size_t>, std::uint64_t>,
               motifgcn::kTriadMotifCount>
        pair_counts;
    std::array<std::uint64_t, motifgcn::kTriadMotifCount> instance_totals{};
    std::uint64_t connected_triples = 0;
};

// Checks all C(n,3) triples against a dense adjacency snapshot.
inline BruteTriadCounts brute_force_triads(const DirectedGraph& g) {
    const std::size_t n = g.n;
    std::vector<std::vector<bool>> arc(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = g.adj.row_ptr[i]; k < g.adj.row_ptr[i + 1]; ++k)
            arc[i][g.adj.col_idx[k]] = true;

    BruteTriadCounts out;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
                bool pattern[3][3] = {};
                const std::size_t v[3] = {a, b, c};
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        if (i != j) pattern[i][j] = arc[v[i]][v[j]];
                const auto id = motifgcn::classify_triad(pattern);
                if (!id) continue;
                out.connected_triples++;
                const auto k = static_cast<std::size_t>(static_cast<int>(*id) - 1);
                out.instance_totals[k]++;
                out.pair_counts[k][{a, b}]++;
                out.pair_counts[k][{a, c}]++;
                out.pair_counts[k][{b, c}]++;
            }
    return out;
}

// Central finite differences of a scalar function with respect to one
// matrix's entries.
inline DenseMatrix finite_difference(std::function<double()> eval, DenseMatrix& param,
                                     double h = 1e-5) {
    DenseMatrix grad(param.rows(), param.cols());
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double saved = param.values()[i];
        param.values()[i] = saved + h;
        const double up = eval();
        param.values()[i] = saved - h;
        const double down = eval();
        param.values()[i] = saved;
        grad.values()[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

// |a-b| <= tol * max(1, |a|, |b|) elementwise; returns the worst violation.
inline double relative_gap(const DenseMatrix& a, const DenseMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a.values()[i], y = b.values()[i];
        const double denom = std::max({1.0, std::fabs(x), std::fabs(y)});
        worst = std::max(worst, std::fabs(x - y) / denom);
    }
    return worst;
}

}  // namespace oracles
