#pragma once

#include <cstddef>
#include <vector>

#include "motifgcn/dense.hpp"

namespace motifgcn {

struct Triplet {
    std::size_t row = 0, col = 0;
    double value = 0.0;
};

// Compressed sparse row matrix. Canonical form: column indices sorted and
// unique within each row. Explicit zeros are permitted; from_triplets drops
// them unless told otherwise.
struct SparseMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::size_t> row_ptr;  // size rows + 1
    std::vector<std::size_t> col_idx;
    std::vector<double> values;

    SparseMatrix() : row_ptr(1, 0) {}
    SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), row_ptr(r + 1, 0) {}

    std::size_t nnz() const { return col_idx.size(); }
    // Value at (i, j); 0 for absent entries. Binary search within the row.
    double at(std::size_t i, std::size_t j) const;
    bool has_entry(std::size_t i, std::size_t j) const;

    bool operator==(const SparseMatrix& o) const = default;
};

enum class Orientation { Row, Column };

SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries,
                           bool drop_zeros = true);
SparseMatrix sparse_identity(std::size_t n);

DenseMatrix spmv(const SparseMatrix& m, const DenseMatrix& x, int threads = 1);
SparseMatrix transpose(const SparseMatrix& m);
DenseMatrix degree_vector(const SparseMatrix& m, Orientation orientation);

DenseMatrix to_dense(const SparseMatrix& m);
SparseMatrix from_dense(const DenseMatrix& m, double tol = 0.0);

bool is_symmetric(const SparseMatrix& m);
double sparse_max_abs_diff(const SparseMatrix& a, const SparseMatrix& b);
// Off-diagonal fill ratio: nnz excluding diagonal over n*(n-1).
double offdiagonal_density(const SparseMatrix& m);

}  // namespace motifgcn
