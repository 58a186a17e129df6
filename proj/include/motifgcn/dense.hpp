#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace motifgcn {

// Row-major dense matrix of doubles: the carrier for vertex signals,
// feature blocks and trainable parameters.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    bool same_shape(const DenseMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
    void add_inplace(const DenseMatrix& o);
    void sub_inplace(const DenseMatrix& o);
    void scale_inplace(double c);
    // this += c * o
    void axpy(double c, const DenseMatrix& o);

    bool operator==(const DenseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// a * b^T and a^T * b without materializing the transpose
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transposed(const DenseMatrix& a);
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix col_sums(const DenseMatrix& a);  // 1 x cols
DenseMatrix row_sums(const DenseMatrix& a);  // rows x 1

double max_abs(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& a);
double sum_all(const DenseMatrix& a);
bool all_finite(const DenseMatrix& a);

void fill_uniform(DenseMatrix& m, std::mt19937_64& rng, double lo, double hi);
void fill_gaussian(DenseMatrix& m, std::mt19937_64& rng, double mean, double stddev);

}  // namespace motifgcn
