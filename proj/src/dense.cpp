#include "motifgcn/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace motifgcn {

namespace {
[[noreturn]] void shape_error(const char* op, const DenseMatrix& a, const DenseMatrix& b) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
}
}  // namespace

void DenseMatrix::add_inplace(const DenseMatrix& o) {
    if (!same_shape(o)) shape_error("add", *this, o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
}

void DenseMatrix::sub_inplace(const DenseMatrix& o) {
    if (!same_shape(o)) shape_error("sub", *this, o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
}

void DenseMatrix::scale_inplace(double c) {
    for (double& v : data_) v *= c;
}

void DenseMatrix::axpy(double c, const DenseMatrix& o) {
    if (!same_shape(o)) shape_error("axpy", *this, o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += c * o.data_[i];
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) shape_error("matmul", a, b);
    DenseMatrix out(a.rows(), b.cols());
    const std::size_t n = a.rows(), k = a.cols(), q = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        double* orow = out.data() + i * q;
        const double* arow = a.data() + i * k;
        for (std::size_t t = 0; t < k; ++t) {
            const double av = arow[t];
            if (av == 0.0) continue;
            const double* brow = b.data() + t * q;
            for (std::size_t j = 0; j < q; ++j) orow[j] += av * brow[j];
        }
    }
    return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) shape_error("matmul_nt", a, b);
    DenseMatrix out(a.rows(), b.rows());
    const std::size_t k = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.data() + i * k;
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double* brow = b.data() + j * k;
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += arow[t] * brow[t];
            out(i, j) = s;
        }
    }
    return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) shape_error("matmul_tn", a, b);
    DenseMatrix out(a.cols(), b.cols());
    const std::size_t q = b.cols(), m = a.cols();
    for (std::size_t t = 0; t < a.rows(); ++t) {
        const double* arow = a.data() + t * m;
        const double* brow = b.data() + t * q;
        for (std::size_t i = 0; i < m; ++i) {
            const double av = arow[i];
            if (av == 0.0) continue;
            double* orow = out.data() + i * q;
            for (std::size_t j = 0; j < q; ++j) orow[j] += av * brow[j];
        }
    }
    return out;
}

DenseMatrix transposed(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) shape_error("hadamard", a, b);
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= b.values()[i];
    return out;
}

DenseMatrix col_sums(const DenseMatrix& a) {
    DenseMatrix out(1, a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(0, j) += a(i, j);
    return out;
}

DenseMatrix row_sums(const DenseMatrix& a) {
    DenseMatrix out(a.rows(), 1);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, 0) += a(i, j);
    return out;
}

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::fabs(v));
    return m;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) shape_error("max_abs_diff", a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::fabs(a.values()[i] - b.values()[i]));
    return m;
}

double frobenius_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.values()) s += v * v;
    return std::sqrt(s);
}

double sum_all(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.values()) s += v;
    return s;
}

bool all_finite(const DenseMatrix& a) {
    for (double v : a.values())
        if (!std::isfinite(v)) return false;
    return true;
}

void fill_uniform(DenseMatrix& m, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& v : m.values()) v = dist(rng);
}

void fill_gaussian(DenseMatrix& m, std::mt19937_64& rng, double mean, double stddev) {
    std::normal_distribution<double> dist(mean, stddev);
    for (double& v : m.values()) v = dist(rng);
}

}  // namespace motifgcn
