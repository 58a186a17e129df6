#include "motifgcn/filters.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace motifgcn {

std::size_t word_count(std::size_t num_operators, int order) {
    if (order < 0) throw std::invalid_argument("word_count: negative order");
    std::size_t total = 0, level = 1;
    for (int j = 0; j <= order; ++j) {
        total += level;
        if (level > (static_cast<std::size_t>(1) << 40) / std::max<std::size_t>(num_operators, 1))
            throw std::invalid_argument("word_count: overflow for K=" +
                                        std::to_string(num_operators) +
                                        ", p=" + std::to_string(order));
        level *= num_operators;
    }
    return total;
}

std::vector<std::vector<int>> enumerate_words(std::size_t num_operators, int order) {
    std::vector<std::vector<int>> words;
    words.push_back({});  // the degree-0 identity word
    std::size_t level_begin = 0, level_end = 1;
    for (int j = 1; j <= order; ++j) {
        for (std::size_t w = level_begin; w < level_end; ++w)
            for (std::size_t k = 0; k < num_operators; ++k) {
                std::vector<int> next = words[w];
                next.push_back(static_cast<int>(k));
                words.push_back(std::move(next));
            }
        level_begin = level_end;
        level_end = words.size();
    }
    return words;
}

DenseMatrix softmax_rows(const DenseMatrix& logits) {
    DenseMatrix out = logits;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double mx = out(i, 0);
        for (std::size_t j = 1; j < out.cols(); ++j) mx = std::max(mx, out(i, j));
        double denom = 0.0;
        for (std::size_t j = 0; j < out.cols(); ++j) {
            out(i, j) = std::exp(out(i, j) - mx);
            denom += out(i, j);
        }
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) /= denom;
    }
    return out;
}

namespace {

void check_signal(const SparseMatrix& op, const DenseMatrix& f, const char* what) {
    if (op.rows != op.cols || op.cols != f.rows())
        throw std::invalid_argument(std::string(what) + ": operator is " +
                                    std::to_string(op.rows) + "x" + std::to_string(op.cols) +
                                    ", signal has " + std::to_string(f.rows()) + " rows");
}

void check_ops(const std::vector<const SparseMatrix*>& ops, const DenseMatrix& f,
               const char* what) {
    if (ops.empty()) throw std::invalid_argument(std::string(what) + ": no operators given");
    for (const SparseMatrix* op : ops) check_signal(*op, f, what);
}

void guard_words(std::size_t num_operators, int order, std::size_t budget, const char* what) {
    const std::size_t words = word_count(num_operators, order);
    if (words > budget)
        throw std::invalid_argument(std::string(what) + ": K=" + std::to_string(num_operators) +
                                    ", p=" + std::to_string(order) + " needs " +
                                    std::to_string(words) + " words, over the budget of " +
                                    std::to_string(budget));
}

}  // namespace

DenseMatrix chebyshev_apply(const SparseMatrix& rescaled, const std::vector<double>& theta,
                            const DenseMatrix& f) {
    check_signal(rescaled, f, "chebyshev_apply");
    if (theta.empty()) throw std::invalid_argument("chebyshev_apply: empty coefficients");
    DenseMatrix out = f;
    out.scale_inplace(theta[0]);
    if (theta.size() == 1) return out;
    DenseMatrix tprev = f;
    DenseMatrix tcur = spmv(rescaled, f);
    out.axpy(theta[1], tcur);
    for (std::size_t j = 2; j < theta.size(); ++j) {
        DenseMatrix tnext = spmv(rescaled, tcur);
        tnext.scale_inplace(2.0);
        tnext.sub_inplace(tprev);
        out.axpy(theta[j], tnext);
        tprev = std::move(tcur);
        tcur = std::move(tnext);
    }
    return out;
}

DenseMatrix chebyshev_apply(const SparseMatrix& rescaled, const ChebCoeffs& coeffs,
                            const DenseMatrix& f) {
    check_signal(rescaled, f, "chebyshev_apply");
    if (coeffs.theta.empty()) throw std::invalid_argument("chebyshev_apply: empty coefficients");
    for (const DenseMatrix& th : coeffs.theta)
        if (th.rows() != f.cols())
            throw std::invalid_argument("chebyshev_apply: coefficient block is " +
                                        std::to_string(th.rows()) + "x" +
                                        std::to_string(th.cols()) + " but signal has " +
                                        std::to_string(f.cols()) + " channels");
    DenseMatrix out = matmul(f, coeffs.theta[0]);
    if (coeffs.theta.size() == 1) return out;
    DenseMatrix tprev = f;
    DenseMatrix tcur = spmv(rescaled, f);
    out.add_inplace(matmul(tcur, coeffs.theta[1]));
    for (std::size_t j = 2; j < coeffs.theta.size(); ++j) {
        DenseMatrix tnext = spmv(rescaled, tcur);
        tnext.scale_inplace(2.0);
        tnext.sub_inplace(tprev);
        out.add_inplace(matmul(tnext, coeffs.theta[j]));
        tprev = std::move(tcur);
        tcur = std::move(tnext);
    }
    return out;
}

namespace {

// Level-by-level prefix-tree walk over words. visit(word_index, product) is
// called in the serialization order; each product extends a shorter one by
// one spmv with the word's last letter (the leftmost factor, applied last).
template <typename Visit>
void walk_word_products(const std::vector<const SparseMatrix*>& ops, int order,
                        const DenseMatrix& f, Visit&& visit) {
    const std::size_t num_ops = ops.size();
    std::size_t index = 0;
    std::vector<DenseMatrix> level;
    level.push_back(f);
    visit(index++, level[0]);
    for (int j = 1; j <= order; ++j) {
        std::vector<DenseMatrix> next;
        next.reserve(level.size() * num_ops);
        for (const DenseMatrix& prod : level)
            for (std::size_t k = 0; k < num_ops; ++k) {
                next.push_back(spmv(*ops[k], prod));
                visit(index++, next.back());
            }
        level = std::move(next);
    }
}

}  // namespace

DenseMatrix multivar_apply(const std::vector<const SparseMatrix*>& ops,
                           const std::vector<double>& theta, const DenseMatrix& f,
                           std::size_t word_budget) {
    check_ops(ops, f, "multivar_apply");
    // p is recovered from the coefficient count
    int order = 0;
    while (word_count(ops.size(), order) < theta.size()) order++;
    if (word_count(ops.size(), order) != theta.size())
        throw std::invalid_argument("multivar_apply: coefficient count " +
                                    std::to_string(theta.size()) +
                                    " is not sum_{j<=p} K^j for K=" + std::to_string(ops.size()));
    guard_words(ops.size(), order, word_budget, "multivar_apply");
    DenseMatrix out(f.rows(), f.cols());
    walk_word_products(ops, order, f, [&](std::size_t w, const DenseMatrix& prod) {
        out.axpy(theta[w], prod);
    });
    return out;
}

DenseMatrix multivar_apply(const std::vector<const SparseMatrix*>& ops,
                           const MultivarCoeffs& coeffs, const DenseMatrix& f,
                           std::size_t word_budget) {
    check_ops(ops, f, "multivar_apply");
    if (ops.size() != coeffs.num_operators)
        throw std::invalid_argument("multivar_apply: got " + std::to_string(ops.size()) +
                                    " operators, coefficients expect " +
                                    std::to_string(coeffs.num_operators));
    if (coeffs.theta.size() != word_count(coeffs.num_operators, coeffs.order))
        throw std::invalid_argument("multivar_apply: coefficient block count mismatch");
    guard_words(ops.size(), coeffs.order, word_budget, "multivar_apply");
    DenseMatrix out(f.rows(), coeffs.theta[0].cols());
    walk_word_products(ops, coeffs.order, f, [&](std::size_t w, const DenseMatrix& prod) {
        out.add_inplace(matmul(prod, coeffs.theta[w]));
    });
    return out;
}

DenseMatrix motifnet_d_apply(const SparseMatrix& lap_in, const SparseMatrix& lap_out,
                             const std::vector<double>& theta, const DenseMatrix& f,
                             std::size_t word_budget) {
    return multivar_apply({&lap_in, &lap_out}, theta, f, word_budget);
}

DenseMatrix recursive_apply(const std::vector<const SparseMatrix*>& ops,
                            const std::vector<double>& theta, const DenseMatrix& alpha,
                            const DenseMatrix& f) {
    check_ops(ops, f, "recursive_apply");
    if (theta.empty()) throw std::invalid_argument("recursive_apply: empty coefficients");
    const int order = static_cast<int>(theta.size()) - 1;
    if (alpha.rows() != static_cast<std::size_t>(order) || (order > 0 && alpha.cols() != ops.size()))
        throw std::invalid_argument("recursive_apply: alpha must be p x K = " +
                                    std::to_string(order) + "x" + std::to_string(ops.size()));
    DenseMatrix out = f;
    out.scale_inplace(theta[0]);
    DenseMatrix g = f;  // P_0 f
    for (int j = 1; j <= order; ++j) {
        DenseMatrix next(f.rows(), f.cols());
        for (std::size_t k = 0; k < ops.size(); ++k) {
            const double a = alpha(static_cast<std::size_t>(j - 1), k);
            if (a == 0.0) continue;
            next.axpy(a, spmv(*ops[k], g));
        }
        out.axpy(theta[static_cast<std::size_t>(j)], next);
        g = std::move(next);
    }
    return out;
}

DenseMatrix recursive_apply(const std::vector<const SparseMatrix*>& ops,
                            const RecursiveCoeffs& coeffs, const DenseMatrix& f) {
    check_ops(ops, f, "recursive_apply");
    if (coeffs.theta.empty()) throw std::invalid_argument("recursive_apply: empty coefficients");
    const int order = coeffs.order();
    const std::size_t out_channels = coeffs.theta[0].cols();
    const std::size_t slots =
        coeffs.granularity == AttentionGranularity::PerLayer ? 1 : out_channels;
    if (order > 0 && (coeffs.attention_logits.rows() != static_cast<std::size_t>(order) * slots ||
                      coeffs.attention_logits.cols() != ops.size()))
        throw std::invalid_argument("recursive_apply: attention logits must be (p*slots) x K");
    const DenseMatrix alpha = order > 0 ? softmax_rows(coeffs.attention_logits) : DenseMatrix();

    if (coeffs.granularity == AttentionGranularity::PerLayer) {
        DenseMatrix out = matmul(f, coeffs.theta[0]);
        DenseMatrix g = f;
        for (int j = 1; j <= order; ++j) {
            DenseMatrix next(f.rows(), f.cols());
            for (std::size_t k = 0; k < ops.size(); ++k)
                next.axpy(alpha(static_cast<std::size_t>(j - 1), k), spmv(*ops[k], g));
            out.add_inplace(matmul(next, coeffs.theta[static_cast<std::size_t>(j)]));
            g = std::move(next);
        }
        return out;
    }

    // Per-channel attention: each output channel runs its own recursion.
    DenseMatrix out = matmul(f, coeffs.theta[0]);
    for (std::size_t l = 0; l < out_channels; ++l) {
        DenseMatrix g = f;
        for (int j = 1; j <= order; ++j) {
            DenseMatrix next(f.rows(), f.cols());
            for (std::size_t k = 0; k < ops.size(); ++k)
                next.axpy(alpha(static_cast<std::size_t>(j - 1) * slots + l, k), spmv(*ops[k], g));
            const DenseMatrix& th = coeffs.theta[static_cast<std::size_t>(j)];
            for (std::size_t r = 0; r < f.rows(); ++r) {
                double s = 0.0;
                for (std::size_t c = 0; c < f.cols(); ++c) s += next(r, c) * th(c, l);
                out(r, l) += s;
            }
            g = std::move(next);
        }
    }
    return out;
}

}  // namespace motifgcn
