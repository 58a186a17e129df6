#pragma once

#include <vector>

#include "motifgcn/dense.hpp"
#include "motifgcn/laplacian.hpp"

namespace motifgcn {

inline constexpr std::size_t kDefaultWordBudget = 65536;

// Words over the operator alphabet {0..K-1}, listed in application order:
// word[0] is applied to the signal first, word.back() last (the leftmost
// factor of the written product). Serialization order is length-then-lex.
std::size_t word_count(std::size_t num_operators, int order);
std::vector<std::vector<int>> enumerate_words(std::size_t num_operators, int order);

// theta[j] is the (in_channels x out_channels) coefficient block of degree j.
struct ChebCoeffs {
    std::vector<DenseMatrix> theta;
    int order() const { return static_cast<int>(theta.size()) - 1; }
};

// One coefficient block per word, in enumerate_words order.
struct MultivarCoeffs {
    std::size_t num_operators = 0;
    int order = 0;
    std::vector<DenseMatrix> theta;
};

enum class AttentionGranularity { PerLayer, PerChannel };

// theta[j] as in ChebCoeffs; attention_logits has one row per (step, slot)
// with K columns, rows grouped step-major: row (j-1)*slots + s belongs to
// recursion step j. Effective weights are the row-softmax of the logits.
struct RecursiveCoeffs {
    std::vector<DenseMatrix> theta;
    DenseMatrix attention_logits;
    AttentionGranularity granularity = AttentionGranularity::PerLayer;
    std::size_t num_operators = 0;
    int order() const { return static_cast<int>(theta.size()) - 1; }
};

DenseMatrix softmax_rows(const DenseMatrix& logits);

// --- scalar-coefficient filters (single filter applied to every column) ---

DenseMatrix chebyshev_apply(const SparseMatrix& rescaled, const std::vector<double>& theta,
                            const DenseMatrix& f);
DenseMatrix multivar_apply(const std::vector<const SparseMatrix*>& ops,
                           const std::vector<double>& theta, const DenseMatrix& f,
                           std::size_t word_budget = kDefaultWordBudget);
DenseMatrix motifnet_d_apply(const SparseMatrix& lap_in, const SparseMatrix& lap_out,
                             const std::vector<double>& theta, const DenseMatrix& f,
                             std::size_t word_budget = kDefaultWordBudget);
// alpha is (p x K), rows already normalized (each step's weights sum to 1).
DenseMatrix recursive_apply(const std::vector<const SparseMatrix*>& ops,
                            const std::vector<double>& theta, const DenseMatrix& alpha,
                            const DenseMatrix& f);

// --- channel-mixing filters (the convolutional-layer form) ---

DenseMatrix chebyshev_apply(const SparseMatrix& rescaled, const ChebCoeffs& coeffs,
                            const DenseMatrix& f);
DenseMatrix multivar_apply(const std::vector<const SparseMatrix*>& ops,
                           const MultivarCoeffs& coeffs, const DenseMatrix& f,
                           std::size_t word_budget = kDefaultWordBudget);
DenseMatrix recursive_apply(const std::vector<const SparseMatrix*>& ops,
                            const RecursiveCoeffs& coeffs, const DenseMatrix& f);

}  // namespace motifgcn
