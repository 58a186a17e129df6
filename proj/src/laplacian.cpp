#include "motifgcn/laplacian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "motifgcn/spectral.hpp"

namespace motifgcn {

NormalizedLaplacian normalized_laplacian(const MotifAdjacency& adj, std::size_t dense_cap) {
    const SparseMatrix& w = adj.matrix;
    if (w.rows != w.cols)
        throw std::invalid_argument("normalized_laplacian: adjacency must be square");
    for (double v : w.values)
        if (v < 0.0)
            throw std::invalid_argument("normalized_laplacian: negative entry in motif adjacency " +
                                        std::string(motif_name(adj.motif)));

    const bool symmetric = adj.motif != MotifId::Min && adj.motif != MotifId::Mout;
    const std::size_t n = w.rows;
    const DenseMatrix left_deg = degree_vector(w, Orientation::Row);
    const DenseMatrix right_deg =
        symmetric ? left_deg : degree_vector(w, Orientation::Column);

    std::vector<double> left(n), right(n);
    for (std::size_t i = 0; i < n; ++i) {
        left[i] = left_deg(i, 0) > 0.0 ? 1.0 / std::sqrt(left_deg(i, 0)) : 0.0;
        right[i] = right_deg(i, 0) > 0.0 ? 1.0 / std::sqrt(right_deg(i, 0)) : 0.0;
    }

    std::vector<Triplet> entries;
    entries.reserve(w.nnz() + n);
    for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = w.row_ptr[i]; k < w.row_ptr[i + 1]; ++k) {
            const double v = -left[i] * w.values[k] * right[w.col_idx[k]];
            if (v != 0.0) entries.push_back({i, w.col_idx[k], v});
        }

    NormalizedLaplacian lap;
    lap.matrix = from_triplets(n, n, std::move(entries), false);
    lap.source_motif = adj.motif;
    lap.symmetric = symmetric;
    // exact value at oracle scale, the spectral bound beyond it, power
    // iteration for the directional operators
    if (symmetric) {
        lap.lambda_max = 2.0;
        if (n > 0 && n <= dense_cap) {
            const auto dec = jacobi_eigendecomposition(to_dense(lap.matrix));
            lap.lambda_max = dec.eigenvalues.back();
        }
    } else {
        lap.lambda_max = estimate_lambda_max(lap);
    }
    return lap;
}

double estimate_lambda_max(const NormalizedLaplacian& lap, std::uint64_t seed, int max_iterations,
                           double tol) {
    const std::size_t n = lap.matrix.rows;
    if (n == 0) return 0.0;
    const SparseMatrix* a = &lap.matrix;
    SparseMatrix sym_part;
    if (!lap.symmetric) {
        // power iteration runs on the symmetrized part
        const SparseMatrix at = transpose(lap.matrix);
        std::vector<Triplet> entries;
        entries.reserve(2 * lap.matrix.nnz());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = lap.matrix.row_ptr[i]; k < lap.matrix.row_ptr[i + 1]; ++k)
                entries.push_back({i, lap.matrix.col_idx[k], 0.5 * lap.matrix.values[k]});
            for (std::size_t k = at.row_ptr[i]; k < at.row_ptr[i + 1]; ++k)
                entries.push_back({i, at.col_idx[k], 0.5 * at.values[k]});
        }
        sym_part = from_triplets(n, n, std::move(entries), false);
        a = &sym_part;
    }

    std::mt19937_64 rng(seed);
    DenseMatrix v(n, 1);
    fill_uniform(v, rng, -1.0, 1.0);
    double norm = frobenius_norm(v);
    if (norm == 0.0) v(0, 0) = norm = 1.0;
    v.scale_inplace(1.0 / norm);

    double rho_prev = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        DenseMatrix av = spmv(*a, v);
        av.add_inplace(v);  // +I shift keeps the top eigenvalue dominant
        double rho = 0.0;
        for (std::size_t i = 0; i < n; ++i) rho += v(i, 0) * av(i, 0);
        const double an = frobenius_norm(av);
        if (an == 0.0) return 0.0;
        av.scale_inplace(1.0 / an);
        v = std::move(av);
        if (it > 0 && std::fabs(rho - rho_prev) < tol * std::max(1.0, std::fabs(rho)))
            return rho - 1.0;
        rho_prev = rho;
    }
    return lap.symmetric ? 2.0 : rho_prev - 1.0;
}

RescaledLaplacian rescale(const NormalizedLaplacian& lap, double lambda_max) {
    if (lambda_max <= 0.0)
        throw std::invalid_argument("rescale: lambda_max must be positive, got " +
                                    std::to_string(lambda_max));
    const std::size_t n = lap.matrix.rows;
    const double scale = 2.0 / lambda_max;
    std::vector<Triplet> entries;
    entries.reserve(lap.matrix.nnz() + n);
    std::vector<bool> has_diag(n, false);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = lap.matrix.row_ptr[i]; k < lap.matrix.row_ptr[i + 1]; ++k) {
            const std::size_t j = lap.matrix.col_idx[k];
            double v = scale * lap.matrix.values[k];
            if (i == j) {
                v -= 1.0;
                has_diag[i] = true;
            }
            entries.push_back({i, j, v});
        }
    for (std::size_t i = 0; i < n; ++i)
        if (!has_diag[i]) entries.push_back({i, i, -1.0});

    RescaledLaplacian out;
    out.scale = scale;
    out.shift = -1.0;
    out.matrix = from_triplets(n, n, std::move(entries), false);  // keep explicit zeros
    return out;
}

}  // namespace motifgcn
