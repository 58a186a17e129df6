#include "motifgcn/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "motifgcn/threading.hpp"

namespace motifgcn {

namespace {
std::string shape_str(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}
}  // namespace

double SparseMatrix::at(std::size_t i, std::size_t j) const {
    const auto b = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    const auto e = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    const auto it = std::lower_bound(b, e, j);
    if (it != e && *it == j) return values[static_cast<std::size_t>(it - col_idx.begin())];
    return 0.0;
}

bool SparseMatrix::has_entry(std::size_t i, std::size_t j) const {
    const auto b = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
    const auto e = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
    return std::binary_search(b, e, j);
}

SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries,
                           bool drop_zeros) {
    for (const Triplet& t : entries) {
        if (t.row >= rows || t.col >= cols)
            throw std::invalid_argument("from_triplets: entry (" + std::to_string(t.row) + "," +
                                        std::to_string(t.col) + ") outside " +
                                        shape_str(rows, cols));
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    // Sum duplicates in place.
    std::size_t w = 0;
    for (std::size_t r = 0; r < entries.size(); ++r) {
        if (w > 0 && entries[w - 1].row == entries[r].row && entries[w - 1].col == entries[r].col) {
            entries[w - 1].value += entries[r].value;
        } else {
            entries[w++] = entries[r];
        }
    }
    entries.resize(w);
    if (drop_zeros) {
        entries.erase(std::remove_if(entries.begin(), entries.end(),
                                     [](const Triplet& t) { return t.value == 0.0; }),
                      entries.end());
    }

    SparseMatrix m(rows, cols);
    m.col_idx.reserve(entries.size());
    m.values.reserve(entries.size());
    for (const Triplet& t : entries) {
        m.row_ptr[t.row + 1]++;
        m.col_idx.push_back(t.col);
        m.values.push_back(t.value);
    }
    for (std::size_t i = 0; i < rows; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
    return m;
}

SparseMatrix sparse_identity(std::size_t n) {
    SparseMatrix m(n, n);
    m.col_idx.resize(n);
    m.values.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.col_idx[i] = i;
        m.row_ptr[i + 1] = i + 1;
    }
    return m;
}

DenseMatrix spmv(const SparseMatrix& m, const DenseMatrix& x, int threads) {
    if (m.cols != x.rows())
        throw std::invalid_argument("spmv: dimension mismatch (matrix is " +
                                    shape_str(m.rows, m.cols) + ", operand is " +
                                    shape_str(x.rows(), x.cols()) + ")");
    DenseMatrix out(m.rows, x.cols());
    const std::size_t q = x.cols();
    // One worker per output row: results are independent of the thread count.
    parallel_for(0, m.rows, threads, [&](std::size_t lo, std::size_t hi, int) {
        for (std::size_t i = lo; i < hi; ++i) {
            double* orow = out.data() + i * q;
            for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
                const double a = m.values[k];
                const double* xrow = x.data() + m.col_idx[k] * q;
                for (std::size_t j = 0; j < q; ++j) orow[j] += a * xrow[j];
            }
        }
    });
    return out;
}

SparseMatrix transpose(const SparseMatrix& m) {
    SparseMatrix out(m.cols, m.rows);
    out.col_idx.resize(m.nnz());
    out.values.resize(m.nnz());
    std::vector<std::size_t> count(m.cols + 1, 0);
    for (std::size_t j : m.col_idx) count[j + 1]++;
    for (std::size_t j = 0; j < m.cols; ++j) count[j + 1] += count[j];
    out.row_ptr = count;  // final offsets
    std::vector<std::size_t> next = count;
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
            const std::size_t pos = next[m.col_idx[k]]++;
            out.col_idx[pos] = i;
            out.values[pos] = m.values[k];
        }
    }
    return out;  // rows visited in order, so columns stay sorted
}

DenseMatrix degree_vector(const SparseMatrix& m, Orientation orientation) {
    if (m.rows != m.cols)
        throw std::invalid_argument("degree_vector: matrix must be square, got " +
                                    shape_str(m.rows, m.cols));
    DenseMatrix d(m.rows, 1);
    if (orientation == Orientation::Row) {
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) d(i, 0) += m.values[k];
    } else {
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
                d(m.col_idx[k], 0) += m.values[k];
    }
    return d;
}

DenseMatrix to_dense(const SparseMatrix& m) {
    DenseMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
            out(i, m.col_idx[k]) += m.values[k];
    return out;
}

SparseMatrix from_dense(const DenseMatrix& m, double tol) {
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (std::fabs(m(i, j)) > tol) entries.push_back({i, j, m(i, j)});
    return from_triplets(m.rows(), m.cols(), std::move(entries), false);
}

bool is_symmetric(const SparseMatrix& m) {
    if (m.rows != m.cols) return false;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
            if (m.at(m.col_idx[k], i) != m.values[k]) return false;
    return true;
}

double sparse_max_abs_diff(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("sparse_max_abs_diff: shape mismatch (" +
                                    shape_str(a.rows, a.cols) + " vs " +
                                    shape_str(b.rows, b.cols) + ")");
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            d = std::max(d, std::fabs(a.values[k] - b.at(i, a.col_idx[k])));
        for (std::size_t k = b.row_ptr[i]; k < b.row_ptr[i + 1]; ++k)
            d = std::max(d, std::fabs(b.values[k] - a.at(i, b.col_idx[k])));
    }
    return d;
}

double offdiagonal_density(const SparseMatrix& m) {
    if (m.rows < 2) return 0.0;
    std::size_t offdiag = 0;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
            if (m.col_idx[k] != i) offdiag++;
    return static_cast<double>(offdiag) /
           (static_cast<double>(m.rows) * static_cast<double>(m.rows - 1));
}

}  // namespace motifgcn
