#include <doctest.h>

#include <stdexcept>

#include "motifgcn/laplacian.hpp"
#include "motifgcn/spectral.hpp"
#include "oracles.hpp"

using namespace motifgcn;

namespace {

MotifAdjacency wrap_symmetric(const SparseMatrix& m) {
    MotifAdjacency adj;
    adj.motif = MotifId::U;
    adj.matrix = m;
    adj.counts = m;
    return adj;
}

MotifAdjacency random_symmetric_adjacency(std::size_t n, double p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> w(0.2, 2.0);
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng) < p) {
                const double v = w(rng);
                entries.push_back({i, j, v});
                entries.push_back({j, i, v});
            }
    return wrap_symmetric(from_triplets(n, n, std::move(entries)));
}

}  // namespace

TEST_CASE("normalized laplacian: single edge and empty graph") {
    const auto adj = wrap_symmetric(from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}}));
    const NormalizedLaplacian lap = normalized_laplacian(adj);
    CHECK(lap.matrix.at(0, 0) == 1.0);
    CHECK(lap.matrix.at(1, 1) == 1.0);
    CHECK(lap.matrix.at(0, 1) == -1.0);
    CHECK(lap.matrix.at(1, 0) == -1.0);
    CHECK(lap.lambda_max == doctest::Approx(2.0).epsilon(1e-10));

    const NormalizedLaplacian empty = normalized_laplacian(wrap_symmetric(SparseMatrix(4, 4)));
    CHECK(empty.matrix == sparse_identity(4));
}

TEST_CASE("normalized laplacian: zero-degree vertices keep identity rows") {
    // vertex 2 isolated
    const auto adj = wrap_symmetric(from_triplets(3, 3, {{0, 1, 2.0}, {1, 0, 2.0}}));
    const NormalizedLaplacian lap = normalized_laplacian(adj);
    CHECK(lap.matrix.at(2, 2) == 1.0);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(lap.matrix.at(2, j) == 0.0);
        CHECK(lap.matrix.at(j, 2) == 0.0);
    }
}

TEST_CASE("normalized laplacian rejects negative entries") {
    MotifAdjacency adj;
    adj.motif = MotifId::U;
    adj.matrix = from_triplets(2, 2, {{0, 1, -1.0}});
    adj.counts = adj.matrix;
    CHECK_THROWS_AS(normalized_laplacian(adj), std::invalid_argument);
}

TEST_CASE("symmetric laplacian spectrum lies in [0, 2]") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 5; ++rep) {
        const NormalizedLaplacian lap =
            normalized_laplacian(random_symmetric_adjacency(20, 0.3, rng));
        const SpectralDecomposition dec = dense_eigendecomposition(lap);
        CHECK(dec.eigenvalues.front() >= -1e-10);
        CHECK(dec.eigenvalues.back() <= 2.0 + 1e-10);
    }
}

TEST_CASE("jacobi eigendecomposition invariants") {
    std::mt19937_64 rng(22);

    const SpectralDecomposition id_dec = jacobi_eigendecomposition(DenseMatrix::identity(5));
    for (double ev : id_dec.eigenvalues) CHECK(ev == doctest::Approx(1.0));

    // two-node edge laplacian: eigenpairs known up to sign
    const auto adj = wrap_symmetric(from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}}));
    const auto dec2 = dense_eigendecomposition(normalized_laplacian(adj));
    CHECK(dec2.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dec2.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::fabs(dec2.eigenvectors(0, 0) * dec2.eigenvectors(1, 0)) ==
          doctest::Approx(0.5).epsilon(1e-9));  // (1,1)/sqrt(2) up to sign
    CHECK(std::fabs(dec2.eigenvectors(0, 0)) == doctest::Approx(inv_sqrt2).epsilon(1e-9));

    // random symmetric: reconstruction and orthonormality
    for (int rep = 0; rep < 3; ++rep) {
        const NormalizedLaplacian lap =
            normalized_laplacian(random_symmetric_adjacency(30, 0.25, rng));
        const SpectralDecomposition dec = dense_eigendecomposition(lap);
        const std::size_t n = 30;
        DenseMatrix lambda(n, n);
        for (std::size_t i = 0; i < n; ++i) lambda(i, i) = dec.eigenvalues[i];
        const DenseMatrix recon =
            matmul(matmul(dec.eigenvectors, lambda), transposed(dec.eigenvectors));
        CHECK(max_abs_diff(recon, to_dense(lap.matrix)) <= 1e-8);
        const DenseMatrix gram = matmul_tn(dec.eigenvectors, dec.eigenvectors);
        CHECK(max_abs_diff(gram, DenseMatrix::identity(n)) <= 1e-8);
    }
}

TEST_CASE("dense eigendecomposition guards") {
    const DirectedGraph g = graph_from_triplets(2, true, {{0, 1, 1.0}});
    const NormalizedLaplacian asym = normalized_laplacian(motif_adjacency(g, MotifId::Mout));
    CHECK_THROWS_AS(dense_eigendecomposition(asym), std::invalid_argument);

    std::mt19937_64 rng(23);
    const NormalizedLaplacian big = normalized_laplacian(random_symmetric_adjacency(6, 0.5, rng));
    CHECK_THROWS_AS(dense_eigendecomposition(big, 4), std::invalid_argument);
}

TEST_CASE("lambda max estimation") {
    NormalizedLaplacian identity_lap;
    identity_lap.matrix = sparse_identity(8);
    identity_lap.symmetric = true;
    CHECK(estimate_lambda_max(identity_lap) == doctest::Approx(1.0).epsilon(1e-9));

    const auto edge = wrap_symmetric(from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}}));
    const NormalizedLaplacian lap2 = normalized_laplacian(edge);
    CHECK(estimate_lambda_max(lap2) == doctest::Approx(2.0).epsilon(1e-6));

    std::mt19937_64 rng(24);
    for (int rep = 0; rep < 5; ++rep) {
        const NormalizedLaplacian lap =
            normalized_laplacian(random_symmetric_adjacency(30, 0.3, rng));
        const auto dec = dense_eigendecomposition(lap);
        CHECK(estimate_lambda_max(lap) == doctest::Approx(dec.eigenvalues.back()).epsilon(1e-6));
    }
}

TEST_CASE("rescale") {
    NormalizedLaplacian identity_lap;
    identity_lap.matrix = sparse_identity(3);
    identity_lap.symmetric = true;
    const RescaledLaplacian zero = rescale(identity_lap, 2.0);
    CHECK(max_abs(to_dense(zero.matrix)) == 0.0);
    CHECK(zero.matrix.nnz() == 3);  // structure kept as explicit zeros

    const auto edge = wrap_symmetric(from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}}));
    const RescaledLaplacian r = rescale(normalized_laplacian(edge), 2.0);
    CHECK(r.matrix.at(0, 1) == -1.0);
    CHECK(r.matrix.at(1, 0) == -1.0);
    CHECK(r.matrix.at(0, 0) == 0.0);

    CHECK_THROWS_AS(rescale(identity_lap, 0.0), std::invalid_argument);

    // eigenvalues map to 2*lambda/lambda_max - 1
    std::mt19937_64 rng(25);
    const NormalizedLaplacian lap = normalized_laplacian(random_symmetric_adjacency(20, 0.3, rng));
    const auto dec = dense_eigendecomposition(lap);
    const double lmax = dec.eigenvalues.back();
    const RescaledLaplacian resc = rescale(lap, lmax);
    const auto rdec = jacobi_eigendecomposition(to_dense(resc.matrix));
    for (std::size_t i = 0; i < 20; ++i)
        CHECK(rdec.eigenvalues[i] ==
              doctest::Approx(2.0 * dec.eigenvalues[i] / lmax - 1.0).epsilon(1e-8));
    CHECK(rdec.eigenvalues.front() >= -1.0 - 1e-8);
    CHECK(rdec.eigenvalues.back() <= 1.0 + 1e-8);
}

TEST_CASE("asymmetric normalization reduces to the symmetric formula on symmetric input") {
    std::mt19937_64 rng(26);
    std::vector<Triplet> entries;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = i + 1; j < 12; ++j)
            if (coin(rng) < 0.4) {
                entries.push_back({i, j, 1.0});
                entries.push_back({j, i, 1.0});
            }
    const DirectedGraph g = graph_from_triplets(12, true, entries);
    const NormalizedLaplacian via_out = normalized_laplacian(motif_adjacency(g, MotifId::Mout));
    const NormalizedLaplacian via_u = normalized_laplacian(motif_adjacency(g, MotifId::U));
    CHECK(sparse_max_abs_diff(via_out.matrix, via_u.matrix) <= 1e-12);
}

TEST_CASE("fourier round trip") {
    std::mt19937_64 rng(27);
    const NormalizedLaplacian lap = normalized_laplacian(random_symmetric_adjacency(40, 0.2, rng));
    const auto dec = dense_eigendecomposition(lap);
    const DenseMatrix f = oracles::random_dense(40, 3, rng);
    const DenseMatrix round = matmul(dec.eigenvectors, matmul_tn(dec.eigenvectors, f));
    CHECK(max_abs_diff(round, f) <= 1e-8);
}

TEST_CASE("spectral filter oracle basics") {
    std::mt19937_64 rng(28);
    const NormalizedLaplacian lap = normalized_laplacian(random_symmetric_adjacency(20, 0.3, rng));
    const auto dec = dense_eigendecomposition(lap);
    const double lmax = dec.eigenvalues.back();
    const DenseMatrix f = oracles::random_dense(20, 2, rng);

    // theta = (1, 0, ...): identity
    CHECK(max_abs_diff(spectral_filter_oracle(dec, lmax, {1.0, 0.0, 0.0}, f), f) <= 1e-10);

    // theta = (0, 1): the rescaled operator itself
    const RescaledLaplacian resc = rescale(lap, lmax);
    const DenseMatrix via_oracle = spectral_filter_oracle(dec, lmax, {0.0, 1.0}, f);
    CHECK(max_abs_diff(via_oracle, spmv(resc.matrix, f)) <= 1e-10);
}
