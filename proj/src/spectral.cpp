#include "motifgcn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace motifgcn {

namespace {

double offdiagonal_frobenius(const DenseMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

SpectralDecomposition jacobi_eigendecomposition(const DenseMatrix& a, double tol,
                                                int max_sweeps) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("jacobi_eigendecomposition: matrix must be square");
    const std::size_t n = a.rows();
    DenseMatrix m = a;
    DenseMatrix v = DenseMatrix::identity(n);
    const double scale = std::max(1.0, frobenius_norm(a));

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiagonal_frobenius(m) <= tol * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double app = m(p, p), aqq = m(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = m(i, i);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

    SpectralDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.eigenvectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        dec.eigenvalues[j] = diag[order[j]];
        for (std::size_t i = 0; i < n; ++i) dec.eigenvectors(i, j) = v(i, order[j]);
    }
    return dec;
}

SpectralDecomposition dense_eigendecomposition(const NormalizedLaplacian& lap, std::size_t cap) {
    if (!lap.symmetric)
        throw std::invalid_argument("dense_eigendecomposition: asymmetric Laplacian (motif " +
                                    std::string(motif_name(lap.source_motif)) + ")");
    if (lap.matrix.rows > cap)
        throw std::invalid_argument("dense_eigendecomposition: n=" +
                                    std::to_string(lap.matrix.rows) + " exceeds cap " +
                                    std::to_string(cap));
    return jacobi_eigendecomposition(to_dense(lap.matrix));
}

DenseMatrix spectral_filter_oracle(const SpectralDecomposition& dec, double lambda_max,
                                   const std::vector<double>& theta, const DenseMatrix& f) {
    const std::size_t n = dec.eigenvectors.rows();
    if (f.rows() != n)
        throw std::invalid_argument("spectral_filter_oracle: signal has " +
                                    std::to_string(f.rows()) + " rows, expected " +
                                    std::to_string(n));
    if (lambda_max <= 0.0)
        throw std::invalid_argument("spectral_filter_oracle: lambda_max must be positive");

    DenseMatrix fhat = matmul_tn(dec.eigenvectors, f);  // Phi^T f
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = 2.0 * dec.eigenvalues[i] / lambda_max - 1.0;
        // scalar Chebyshev recurrence
        double multiplier = 0.0;
        double tprev = 1.0, tcur = lam;
        for (std::size_t j = 0; j < theta.size(); ++j) {
            double tj;
            if (j == 0) {
                tj = 1.0;
            } else if (j == 1) {
                tj = lam;
            } else {
                tj = 2.0 * lam * tcur - tprev;
                tprev = tcur;
                tcur = tj;
            }
            multiplier += theta[j] * tj;
        }
        for (std::size_t c = 0; c < fhat.cols(); ++c) fhat(i, c) *= multiplier;
    }
    return matmul(dec.eigenvectors, fhat);  // Phi (...)
}

}  // namespace motifgcn
