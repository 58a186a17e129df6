#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "motifgcn/dense.hpp"
#include "motifgcn/optim.hpp"
#include "motifgcn/sparse.hpp"

namespace motifgcn {

enum class OpKind {
    Leaf,
    ConstSpmv,
    MatMul,
    Add,
    Sub,
    Scale,
    AddRowVec,
    Relu,
    Dropout,
    SoftmaxRows,
    SoftmaxXent,
    WeightedSum,
    Entry,
    Cols,
    ConcatCols,
    SumAll,
};

// Append-only reverse-mode tape. Nodes are identified by their position;
// inputs always precede outputs, and backward() walks in strict reverse
// recording order. One tape records one training step.
class Tape {
public:
    explicit Tape(bool training = true, std::uint64_t seed = 0)
        : training_(training), rng_(seed) {}

    bool training() const { return training_; }
    std::size_t size() const { return nodes_.size(); }

    int leaf(DenseMatrix value, bool requires_grad = false);

    // Registers a parameter as a gradient-tracked leaf; write_grads_back()
    // copies the computed gradients into the bound Param objects.
    int param_leaf(Param& p);
    void write_grads_back();

    // y = S x. The caller keeps S and S^T alive for the tape's lifetime.
    int const_spmv(const SparseMatrix& s, const SparseMatrix& s_transposed, int x);
    int matmul(int a, int b);
    int add(int a, int b);
    int sub(int a, int b);
    int scale(int a, double c);
    int add_rowvec(int a, int row);  // broadcast a 1 x q row over every row of a
    int relu(int a);
    // Inverted scaling; identity when not training or keep_p == 1.
    int dropout(int a, double keep_p);
    int softmax_rows(int a);
    // Mean cross-entropy over masked rows.
    int softmax_xent(int logits, const std::vector<int>& labels,
                     const std::vector<std::uint8_t>& mask);
    int weighted_sum(const std::vector<int>& mats, const std::vector<int>& weights);
    int entry(int a, std::size_t r, std::size_t c);  // 1x1 view of one element
    int cols(int a, std::size_t c0, std::size_t c1);
    int concat_cols(const std::vector<int>& columns);
    int sum_all(int a);

    const DenseMatrix& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    const DenseMatrix& grad(int id) const;

    // Populates gradients for every node that can reach a parameter leaf.
    // Leaves flagged requires_grad always end with an allocated gradient
    // (zero when unreachable from the loss).
    void backward(int loss);

private:
    struct Node {
        OpKind kind = OpKind::Leaf;
        std::vector<int> inputs;
        DenseMatrix value;
        DenseMatrix grad;
        bool requires_grad = false;

        const SparseMatrix* sp = nullptr;
        const SparseMatrix* sp_t = nullptr;
        double scalar = 0.0;                // Scale factor or dropout keep_p
        std::vector<std::uint8_t> mask;     // dropout mask
        std::vector<int> labels;            // SoftmaxXent
        std::vector<std::uint8_t> row_sel;  // SoftmaxXent mask
        DenseMatrix cache;                  // SoftmaxXent softmax probabilities
        std::size_t n_mats = 0;             // WeightedSum split point
        std::size_t r0 = 0, c0 = 0, c1 = 0; // Entry / Cols coordinates
    };

    Node& at(int id) { return nodes_[static_cast<std::size_t>(id)]; }
    const Node& at(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    int push(Node n);
    DenseMatrix& grad_slot(int id);
    bool propagates(int id) const { return at(id).requires_grad; }

    bool training_;
    std::mt19937_64 rng_;
    std::vector<Node> nodes_;
    std::vector<std::pair<Param*, int>> bound_params_;
    bool ran_backward_ = false;
};

}  // namespace motifgcn
