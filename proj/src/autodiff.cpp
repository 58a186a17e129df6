#include "motifgcn/autodiff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "motifgcn/filters.hpp"

namespace motifgcn {

namespace {
[[noreturn]] void op_shape_error(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
}
}  // namespace

int Tape::push(Node n) {
    for (int in : n.inputs)
        if (at(in).requires_grad) n.requires_grad = true;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(DenseMatrix value, bool requires_grad) {
    Node n;
    n.kind = OpKind::Leaf;
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

int Tape::param_leaf(Param& p) {
    const int id = leaf(p.value, true);
    bound_params_.emplace_back(&p, id);
    return id;
}

void Tape::write_grads_back() {
    if (!ran_backward_) throw std::logic_error("write_grads_back: backward() has not run");
    for (auto& [p, id] : bound_params_) p->grad = at(id).grad;
}

int Tape::const_spmv(const SparseMatrix& s, const SparseMatrix& s_transposed, int x) {
    Node n;
    n.kind = OpKind::ConstSpmv;
    n.inputs = {x};
    n.sp = &s;
    n.sp_t = &s_transposed;
    n.value = spmv(s, value(x));
    return push(std::move(n));
}

int Tape::matmul(int a, int b) {
    Node n;
    n.kind = OpKind::MatMul;
    n.inputs = {a, b};
    n.value = motifgcn::matmul(value(a), value(b));
    return push(std::move(n));
}

int Tape::add(int a, int b) {
    if (!value(a).same_shape(value(b))) op_shape_error("add", value(a), value(b));
    Node n;
    n.kind = OpKind::Add;
    n.inputs = {a, b};
    n.value = value(a);
    n.value.add_inplace(value(b));
    return push(std::move(n));
}

int Tape::sub(int a, int b) {
    if (!value(a).same_shape(value(b))) op_shape_error("sub", value(a), value(b));
    Node n;
    n.kind = OpKind::Sub;
    n.inputs = {a, b};
    n.value = value(a);
    n.value.sub_inplace(value(b));
    return push(std::move(n));
}

int Tape::scale(int a, double c) {
    Node n;
    n.kind = OpKind::Scale;
    n.inputs = {a};
    n.scalar = c;
    n.value = value(a);
    n.value.scale_inplace(c);
    return push(std::move(n));
}

int Tape::add_rowvec(int a, int row) {
    const DenseMatrix& m = value(a);
    const DenseMatrix& r = value(row);
    if (r.rows() != 1 || r.cols() != m.cols()) op_shape_error("add_rowvec", m, r);
    Node n;
    n.kind = OpKind::AddRowVec;
    n.inputs = {a, row};
    n.value = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) n.value(i, j) += r(0, j);
    return push(std::move(n));
}

int Tape::relu(int a) {
    Node n;
    n.kind = OpKind::Relu;
    n.inputs = {a};
    n.value = value(a);
    for (double& v : n.value.values()) v = v > 0.0 ? v : 0.0;
    return push(std::move(n));
}

int Tape::dropout(int a, double keep_p) {
    if (keep_p <= 0.0 || keep_p > 1.0)
        throw std::invalid_argument("dropout: keep probability must be in (0,1], got " +
                                    std::to_string(keep_p));
    if (!training_ || keep_p == 1.0) return a;
    Node n;
    n.kind = OpKind::Dropout;
    n.inputs = {a};
    n.scalar = keep_p;
    n.value = value(a);
    n.mask.resize(n.value.size());
    std::bernoulli_distribution keep(keep_p);
    const double inv = 1.0 / keep_p;
    for (std::size_t i = 0; i < n.value.size(); ++i) {
        n.mask[i] = keep(rng_) ? 1 : 0;
        n.value.values()[i] = n.mask[i] ? n.value.values()[i] * inv : 0.0;
    }
    return push(std::move(n));
}

int Tape::softmax_rows(int a) {
    Node n;
    n.kind = OpKind::SoftmaxRows;
    n.inputs = {a};
    n.value = motifgcn::softmax_rows(value(a));
    return push(std::move(n));
}

int Tape::softmax_xent(int logits, const std::vector<int>& labels,
                       const std::vector<std::uint8_t>& mask) {
    const DenseMatrix& z = value(logits);
    if (labels.size() != z.rows() || mask.size() != z.rows())
        throw std::invalid_argument("softmax_xent: labels/mask length " +
                                    std::to_string(labels.size()) + "/" +
                                    std::to_string(mask.size()) + " but logits have " +
                                    std::to_string(z.rows()) + " rows");
    std::size_t count = 0;
    for (std::uint8_t m : mask) count += m ? 1 : 0;
    if (count == 0) throw std::invalid_argument("softmax_xent: empty mask");

    Node n;
    n.kind = OpKind::SoftmaxXent;
    n.inputs = {logits};
    n.labels = labels;
    n.row_sel = mask;
    n.cache = motifgcn::softmax_rows(z);
    double loss = 0.0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        if (!mask[i]) continue;
        const int y = labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= z.cols())
            throw std::invalid_argument("softmax_xent: label " + std::to_string(y) +
                                        " out of range at row " + std::to_string(i));
        // no clamp: a fully underflowed class probability means the loss is
        // genuinely infinite, and the trainer treats that as divergence
        loss -= std::log(n.cache(i, static_cast<std::size_t>(y)));
    }
    n.value = DenseMatrix(1, 1);
    n.value(0, 0) = loss / static_cast<double>(count);
    return push(std::move(n));
}

int Tape::weighted_sum(const std::vector<int>& mats, const std::vector<int>& weights) {
    if (mats.empty() || mats.size() != weights.size())
        throw std::invalid_argument("weighted_sum: need matching non-empty term and weight lists");
    Node n;
    n.kind = OpKind::WeightedSum;
    n.n_mats = mats.size();
    n.inputs = mats;
    n.inputs.insert(n.inputs.end(), weights.begin(), weights.end());
    n.value = DenseMatrix(value(mats[0]).rows(), value(mats[0]).cols());
    for (std::size_t i = 0; i < mats.size(); ++i) {
        const DenseMatrix& w = value(weights[i]);
        if (w.rows() != 1 || w.cols() != 1)
            throw std::invalid_argument("weighted_sum: weights must be 1x1 scalars");
        if (!value(mats[i]).same_shape(n.value))
            op_shape_error("weighted_sum", n.value, value(mats[i]));
        n.value.axpy(w(0, 0), value(mats[i]));
    }
    return push(std::move(n));
}

int Tape::entry(int a, std::size_t r, std::size_t c) {
    const DenseMatrix& m = value(a);
    if (r >= m.rows() || c >= m.cols())
        throw std::invalid_argument("entry: (" + std::to_string(r) + "," + std::to_string(c) +
                                    ") outside " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()));
    Node n;
    n.kind = OpKind::Entry;
    n.inputs = {a};
    n.r0 = r;
    n.c0 = c;
    n.value = DenseMatrix(1, 1);
    n.value(0, 0) = m(r, c);
    return push(std::move(n));
}

int Tape::cols(int a, std::size_t c0, std::size_t c1) {
    const DenseMatrix& m = value(a);
    if (c0 >= c1 || c1 > m.cols())
        throw std::invalid_argument("cols: bad column range [" + std::to_string(c0) + "," +
                                    std::to_string(c1) + ") for " + std::to_string(m.cols()) +
                                    " columns");
    Node n;
    n.kind = OpKind::Cols;
    n.inputs = {a};
    n.c0 = c0;
    n.c1 = c1;
    n.value = DenseMatrix(m.rows(), c1 - c0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = c0; j < c1; ++j) n.value(i, j - c0) = m(i, j);
    return push(std::move(n));
}

int Tape::concat_cols(const std::vector<int>& columns) {
    if (columns.empty()) throw std::invalid_argument("concat_cols: no inputs");
    const std::size_t rows = value(columns[0]).rows();
    Node n;
    n.kind = OpKind::ConcatCols;
    n.inputs = columns;
    std::size_t total = 0;
    for (int c : columns) {
        if (value(c).rows() != rows) op_shape_error("concat_cols", value(columns[0]), value(c));
        total += value(c).cols();
    }
    n.value = DenseMatrix(rows, total);
    std::size_t off = 0;
    for (int c : columns) {
        const DenseMatrix& m = value(c);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) n.value(i, off + j) = m(i, j);
        off += m.cols();
    }
    return push(std::move(n));
}

int Tape::sum_all(int a) {
    Node n;
    n.kind = OpKind::SumAll;
    n.inputs = {a};
    n.value = DenseMatrix(1, 1);
    n.value(0, 0) = motifgcn::sum_all(value(a));
    return push(std::move(n));
}

const DenseMatrix& Tape::grad(int id) const {
    if (!ran_backward_) throw std::logic_error("grad: backward() has not run");
    return at(id).grad;
}

DenseMatrix& Tape::grad_slot(int id) {
    Node& n = at(id);
    if (n.grad.empty() || !n.grad.same_shape(n.value))
        n.grad = DenseMatrix(n.value.rows(), n.value.cols());
    return n.grad;
}

void Tape::backward(int loss) {
    const Node& top = at(loss);
    if (top.value.rows() != 1 || top.value.cols() != 1)
        throw std::invalid_argument("backward: loss must be scalar (1x1), got " +
                                    std::to_string(top.value.rows()) + "x" +
                                    std::to_string(top.value.cols()));
    grad_slot(loss)(0, 0) = 1.0;

    for (int id = loss; id >= 0; --id) {
        Node& n = at(id);
        if (n.grad.empty() || !n.requires_grad) continue;
        const DenseMatrix& g = n.grad;
        switch (n.kind) {
            case OpKind::Leaf:
                break;
            case OpKind::ConstSpmv:
                if (propagates(n.inputs[0])) grad_slot(n.inputs[0]).add_inplace(spmv(*n.sp_t, g));
                break;
            case OpKind::MatMul:
                if (propagates(n.inputs[0]))
                    grad_slot(n.inputs[0]).add_inplace(matmul_nt(g, value(n.inputs[1])));
                if (propagates(n.inputs[1]))
                    grad_slot(n.inputs[1]).add_inplace(matmul_tn(value(n.inputs[0]), g));
                break;
            case OpKind::Add:
                if (propagates(n.inputs[0])) grad_slot(n.inputs[0]).add_inplace(g);
                if (propagates(n.inputs[1])) grad_slot(n.inputs[1]).add_inplace(g);
                break;
            case OpKind::Sub:
                if (propagates(n.inputs[0])) grad_slot(n.inputs[0]).add_inplace(g);
                if (propagates(n.inputs[1])) grad_slot(n.inputs[1]).sub_inplace(g);
                break;
            case OpKind::Scale:
                if (propagates(n.inputs[0])) grad_slot(n.inputs[0]).axpy(n.scalar, g);
                break;
            case OpKind::AddRowVec:
                if (propagates(n.inputs[0])) grad_slot(n.inputs[0]).add_inplace(g);
                if (propagates(n.inputs[1])) grad_slot(n.inputs[1]).add_inplace(col_sums(g));
                break;
            case OpKind::Relu: {
                if (!propagates(n.inputs[0])) break;
                DenseMatrix& ig = grad_slot(n.inputs[0]);
                const DenseMatrix& x = value(n.inputs[0]);
                for (std::size_t i = 0; i < x.size(); ++i)
                    if (x.values()[i] > 0.0) ig.values()[i] += g.values()[i];
                break;
            }
            case OpKind::Dropout: {
                if (!propagates(n.inputs[0])) break;
                DenseMatrix& ig = grad_slot(n.inputs[0]);
                const double inv = 1.0 / n.scalar;
                for (std::size_t i = 0; i < g.size(); ++i)
                    if (n.mask[i]) ig.values()[i] += g.values()[i] * inv;
                break;
            }
            case OpKind::SoftmaxRows: {
                if (!propagates(n.inputs[0])) break;
                DenseMatrix& ig = grad_slot(n.inputs[0]);
                const DenseMatrix& s = n.value;
                for (std::size_t i = 0; i < s.rows(); ++i) {
                    double dot = 0.0;
                    for (std::size_t j = 0; j < s.cols(); ++j) dot += g(i, j) * s(i, j);
                    for (std::size_t j = 0; j < s.cols(); ++j)
                        ig(i, j) += s(i, j) * (g(i, j) - dot);
                }
                break;
            }
            case OpKind::SoftmaxXent: {
                if (!propagates(n.inputs[0])) break;
                DenseMatrix& ig = grad_slot(n.inputs[0]);
                std::size_t count = 0;
                for (std::uint8_t m : n.row_sel) count += m ? 1 : 0;
                const double gs = g(0, 0) / static_cast<double>(count);
                for (std::size_t i = 0; i < n.cache.rows(); ++i) {
                    if (!n.row_sel[i]) continue;
                    for (std::size_t j = 0; j < n.cache.cols(); ++j) {
                        const double onehot =
                            static_cast<std::size_t>(n.labels[i]) == j ? 1.0 : 0.0;
                        ig(i, j) += gs * (n.cache(i, j) - onehot);
                    }
                }
                break;
            }
            case OpKind::WeightedSum: {
                for (std::size_t t = 0; t < n.n_mats; ++t) {
                    const int mat = n.inputs[t];
                    const int wgt = n.inputs[n.n_mats + t];
                    const double w = value(wgt)(0, 0);
                    if (propagates(mat)) grad_slot(mat).axpy(w, g);
                    if (propagates(wgt)) {
                        double dot = 0.0;
                        const DenseMatrix& mv = value(mat);
                        for (std::size_t i = 0; i < mv.size(); ++i)
                            dot += mv.values()[i] * g.values()[i];
                        grad_slot(wgt)(0, 0) += dot;
                    }
                }
                break;
            }
            case OpKind::Entry:
                if (propagates(n.inputs[0])) grad_slot(n.inputs[0])(n.r0, n.c0) += g(0, 0);
                break;
            case OpKind::Cols: {
                if (!propagates(n.inputs[0])) break;
                DenseMatrix& ig = grad_slot(n.inputs[0]);
                for (std::size_t i = 0; i < g.rows(); ++i)
                    for (std::size_t j = 0; j < g.cols(); ++j) ig(i, n.c0 + j) += g(i, j);
                break;
            }
            case OpKind::ConcatCols: {
                std::size_t off = 0;
                for (int c : n.inputs) {
                    const std::size_t w = value(c).cols();
                    if (propagates(c)) {
                        DenseMatrix& ig = grad_slot(c);
                        for (std::size_t i = 0; i < g.rows(); ++i)
                            for (std::size_t j = 0; j < w; ++j) ig(i, j) += g(i, off + j);
                    }
                    off += w;
                }
                break;
            }
            case OpKind::SumAll: {
                if (!propagates(n.inputs[0])) break;
                DenseMatrix& ig = grad_slot(n.inputs[0]);
                const double gs = g(0, 0);
                for (double& v : ig.values()) v += gs;
                break;
            }
        }
    }

    // Unreachable parameter leaves report a zero gradient.
    for (Node& n : nodes_)
        if (n.requires_grad && n.grad.empty()) n.grad = DenseMatrix(n.value.rows(), n.value.cols());
    ran_backward_ = true;
}

}  // namespace motifgcn
