#pragma once

#include "motifgcn/motifs.hpp"
#include "motifgcn/sparse.hpp"

namespace motifgcn {

inline constexpr std::size_t kDefaultDenseCap = 512;

// I - D^{-1/2} W D^{-1/2} with row-sum degrees; for the asymmetric Min/Mout
// operators the left factor uses out-degrees (row sums) and the right factor
// in-degrees (column sums). Zero-degree vertices keep a plain identity row.
struct NormalizedLaplacian {
    SparseMatrix matrix;
    MotifId source_motif = MotifId::U;
    bool symmetric = true;
    double lambda_max = 2.0;  // exact (dense solve), estimated, or the bound 2.0
};

// (2/lambda_max) * Delta - I; stored with the full diagonal, explicit zeros
// kept so the operator's structure is preserved.
struct RescaledLaplacian {
    SparseMatrix matrix;
    double scale = 1.0;   // 2 / lambda_max
    double shift = -1.0;  // applied on the diagonal
};

NormalizedLaplacian normalized_laplacian(const MotifAdjacency& adj,
                                         std::size_t dense_cap = kDefaultDenseCap);

// Power iteration on the (symmetrized) operator, shifted by +I so the top
// eigenvalue dominates. Deterministic given the seed; falls back to the
// bound 2.0 for symmetric inputs that fail to converge. The iteration cap
// is sized for clustered normalized-Laplacian spectra.
double estimate_lambda_max(const NormalizedLaplacian& lap, std::uint64_t seed = 12345,
                           int max_iterations = 2000, double tol = 1e-9);

RescaledLaplacian rescale(const NormalizedLaplacian& lap, double lambda_max);

}  // namespace motifgcn
