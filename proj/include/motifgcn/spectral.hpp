#pragma once

#include <vector>

#include "motifgcn/dense.hpp"
#include "motifgcn/laplacian.hpp"

namespace motifgcn {

// Eigenvectors in columns, eigenvalues ascending.
struct SpectralDecomposition {
    DenseMatrix eigenvectors;
    std::vector<double> eigenvalues;
};

// Cyclic Jacobi rotations for a dense symmetric matrix. Self-contained and
// accurate at oracle scale; not meant for large n.
SpectralDecomposition jacobi_eigendecomposition(const DenseMatrix& a, double tol = 1e-12,
                                                int max_sweeps = 100);

// Jacobi on the Laplacian, with symmetry and size guards.
SpectralDecomposition dense_eigendecomposition(const NormalizedLaplacian& lap,
                                               std::size_t cap = kDefaultDenseCap);

// Applies sum_j theta_j T_j(lambda~) as a diagonal multiplier in the
// eigenbasis, with lambda~ = 2*lambda/lambda_max - 1. The dense reference
// for the recurrence-based Chebyshev filter.
DenseMatrix spectral_filter_oracle(const SpectralDecomposition& dec, double lambda_max,
                                   const std::vector<double>& theta, const DenseMatrix& f);

}  // namespace motifgcn
