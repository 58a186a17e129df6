#include <doctest.h>

#include <stdexcept>

#include "motifgcn/filters.hpp"
#include "motifgcn/spectral.hpp"
#include "oracles.hpp"

using namespace motifgcn;

namespace {

RescaledLaplacian random_rescaled(std::size_t n, double p, std::mt19937_64& rng,
                                  double* lambda_out = nullptr) {
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
    MotifAdjacency adj;
    adj.motif = MotifId::U;
    adj.matrix = from_triplets(n, n, std::move(entries));
    adj.counts = adj.matrix;
    const NormalizedLaplacian lap = normalized_laplacian(adj);
    if (lambda_out) *lambda_out = lap.lambda_max;
    return rescale(lap, lap.lambda_max);
}

std::vector<double> random_coeffs(std::size_t count, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> theta(count);
    for (double& t : theta) t = dist(rng);
    return theta;
}

}  // namespace

TEST_CASE("word enumeration: order and counts") {
    CHECK(word_count(2, 0) == 1);
    CHECK(word_count(2, 2) == 7);
    CHECK(word_count(3, 3) == 40);
    CHECK(word_count(1, 4) == 5);

    const auto words = enumerate_words(2, 2);
    REQUIRE(words.size() == 7);
    CHECK(words[0].empty());
    CHECK(words[1] == std::vector<int>{0});
    CHECK(words[2] == std::vector<int>{1});
    CHECK(words[3] == std::vector<int>{0, 0});
    CHECK(words[4] == std::vector<int>{0, 1});
    CHECK(words[5] == std::vector<int>{1, 0});
    CHECK(words[6] == std::vector<int>{1, 1});

    CHECK_THROWS_WITH_AS(multivar_apply({}, std::vector<double>{1.0}, DenseMatrix(2, 1)),
                         doctest::Contains("no operators"), std::invalid_argument);
}

TEST_CASE("chebyshev: trivial coefficients") {
    std::mt19937_64 rng(31);
    const RescaledLaplacian resc = random_rescaled(10, 0.3, rng);
    const DenseMatrix f = oracles::random_dense(10, 3, rng);

    CHECK(max_abs_diff(chebyshev_apply(resc.matrix, {1.0}, f), f) == 0.0);

    // T_2 on the zero operator: T_2(0) = -1
    const SparseMatrix zero(10, 10);
    DenseMatrix neg = f;
    neg.scale_inplace(-1.0);
    CHECK(max_abs_diff(chebyshev_apply(zero, {0.0, 0.0, 1.0}, f), neg) <= 1e-15);
}

TEST_CASE("chebyshev recurrence matches the spectral oracle") {
    std::mt19937_64 rng(32);
    for (int rep = 0; rep < 10; ++rep) {
        double lmax = 0.0;
        const RescaledLaplacian resc = random_rescaled(30, 0.25, rng, &lmax);
        // recover the unrescaled laplacian for the oracle path
        SparseMatrix lap_mat = resc.matrix;
        {
            std::vector<Triplet> entries;
            for (std::size_t i = 0; i < lap_mat.rows; ++i)
                for (std::size_t k = lap_mat.row_ptr[i]; k < lap_mat.row_ptr[i + 1]; ++k) {
                    double v = lap_mat.values[k] / resc.scale;
                    if (lap_mat.col_idx[k] == i) v = (lap_mat.values[k] + 1.0) / resc.scale;
                    entries.push_back({i, lap_mat.col_idx[k], v});
                }
            lap_mat = from_triplets(30, 30, std::move(entries), false);
        }
        NormalizedLaplacian lap;
        lap.matrix = lap_mat;
        lap.symmetric = true;
        const auto dec = dense_eigendecomposition(lap);

        const std::vector<double> theta = random_coeffs(8, rng);
        const DenseMatrix f = oracles::random_dense(30, 2, rng);
        const DenseMatrix fast = chebyshev_apply(resc.matrix, theta, f);
        const DenseMatrix oracle = spectral_filter_oracle(dec, lmax, theta, f);
        CHECK(oracles::relative_gap(fast, oracle) <= 1e-9);
    }
}

TEST_CASE("multivar: degree zero and K=1 Horner collapse") {
    std::mt19937_64 rng(33);
    const RescaledLaplacian a = random_rescaled(10, 0.3, rng);
    const DenseMatrix f = oracles::random_dense(10, 2, rng);

    DenseMatrix scaled = f;
    scaled.scale_inplace(0.7);
    CHECK(max_abs_diff(multivar_apply({&a.matrix}, std::vector<double>{0.7}, f), scaled) == 0.0);

    const std::vector<double> theta = random_coeffs(5, rng);  // K=1, p=4
    const DenseMatrix via_multivar = multivar_apply({&a.matrix}, theta, f);
    const DenseMatrix via_horner = oracles::horner_apply(a.matrix, theta, f);
    CHECK(max_abs_diff(via_multivar, via_horner) <= 1e-10);
}

TEST_CASE("multivar K=2 p=2 matches dense word expansion") {
    std::mt19937_64 rng(34);
    const RescaledLaplacian a = random_rescaled(10, 0.4, rng);
    const RescaledLaplacian b = random_rescaled(10, 0.4, rng);
    const std::vector<const SparseMatrix*> ops = {&a.matrix, &b.matrix};
    const std::vector<double> theta = random_coeffs(7, rng);
    const DenseMatrix f = oracles::random_dense(10, 3, rng);

    const auto words = enumerate_words(2, 2);
    DenseMatrix expected(10, 3);
    for (std::size_t w = 0; w < words.size(); ++w)
        expected.axpy(theta[w], oracles::dense_word_apply(ops, words[w], f));

    CHECK(max_abs_diff(multivar_apply(ops, theta, f), expected) <= 1e-10);
}

TEST_CASE("multivar word budget guard") {
    std::mt19937_64 rng(35);
    const RescaledLaplacian a = random_rescaled(6, 0.4, rng);
    const std::vector<const SparseMatrix*> ops = {&a.matrix, &a.matrix, &a.matrix};
    const DenseMatrix f = oracles::random_dense(6, 1, rng);
    const std::vector<double> theta = random_coeffs(word_count(3, 3), rng);
    CHECK_THROWS_WITH_AS(multivar_apply(ops, theta, f, 10), doctest::Contains("budget"),
                         std::invalid_argument);
}

TEST_CASE("motifnet_d entry point") {
    std::mt19937_64 rng(36);
    // directed graph; in/out laplacians differ
    const DirectedGraph g = oracles::random_digraph(20, 0.15, rng);
    const NormalizedLaplacian lin = normalized_laplacian(motif_adjacency(g, MotifId::Min));
    const NormalizedLaplacian lout = normalized_laplacian(motif_adjacency(g, MotifId::Mout));
    const RescaledLaplacian rin = rescale(lin, lin.lambda_max);
    const RescaledLaplacian rout = rescale(lout, lout.lambda_max);
    const DenseMatrix f = oracles::random_dense(20, 2, rng);

    // p=1, theta = (0, 1, 0): picks out the first (incoming) operator
    const DenseMatrix y = motifnet_d_apply(rin.matrix, rout.matrix, {0.0, 1.0, 0.0}, f);
    CHECK(max_abs_diff(y, spmv(rin.matrix, f)) == 0.0);

    // p=3 matches the dense word expansion
    const std::vector<double> theta = random_coeffs(word_count(2, 3), rng);
    const std::vector<const SparseMatrix*> ops = {&rin.matrix, &rout.matrix};
    const auto words = enumerate_words(2, 3);
    DenseMatrix expected(20, 2);
    for (std::size_t w = 0; w < words.size(); ++w)
        expected.axpy(theta[w], oracles::dense_word_apply(ops, words[w], f));
    CHECK(max_abs_diff(motifnet_d_apply(rin.matrix, rout.matrix, theta, f), expected) <= 1e-10);
}

TEST_CASE("motifnet_d collapses to a univariate polynomial on symmetric graphs") {
    std::mt19937_64 rng(37);
    std::vector<Triplet> entries;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t i = 0; i < 15; ++i)
        for (std::size_t j = i + 1; j < 15; ++j)
            if (coin(rng) < 0.3) {
                entries.push_back({i, j, 1.0});
                entries.push_back({j, i, 1.0});
            }
    const DirectedGraph g = graph_from_triplets(15, true, entries);
    const NormalizedLaplacian lin = normalized_laplacian(motif_adjacency(g, MotifId::Min));
    const NormalizedLaplacian lout = normalized_laplacian(motif_adjacency(g, MotifId::Mout));
    const double lmax = std::max(lin.lambda_max, lout.lambda_max);
    const RescaledLaplacian rin = rescale(lin, lmax);
    const RescaledLaplacian rout = rescale(lout, lmax);
    const DenseMatrix f = oracles::random_dense(15, 2, rng);

    const int p = 2;
    const std::vector<double> theta = random_coeffs(word_count(2, p), rng);
    const auto words = enumerate_words(2, p);
    std::vector<double> collapsed(static_cast<std::size_t>(p) + 1, 0.0);
    for (std::size_t w = 0; w < words.size(); ++w) collapsed[words[w].size()] += theta[w];

    const DenseMatrix via_d = motifnet_d_apply(rin.matrix, rout.matrix, theta, f);
    const DenseMatrix via_uni = oracles::horner_apply(rin.matrix, collapsed, f);
    CHECK(max_abs_diff(via_d, via_uni) <= 1e-10);
}

TEST_CASE("recursive: degree zero and K=1 collapse") {
    std::mt19937_64 rng(38);
    const RescaledLaplacian a = random_rescaled(12, 0.3, rng);
    const DenseMatrix f = oracles::random_dense(12, 2, rng);

    DenseMatrix scaled = f;
    scaled.scale_inplace(1.3);
    CHECK(max_abs_diff(recursive_apply({&a.matrix}, std::vector<double>{1.3}, DenseMatrix(0, 0), f),
                       scaled) == 0.0);

    const std::vector<double> theta = random_coeffs(4, rng);
    const DenseMatrix alpha(3, 1, 1.0);  // K=1 forces alpha = 1
    const DenseMatrix via_rec = recursive_apply({&a.matrix}, theta, alpha, f);
    const DenseMatrix via_horner = oracles::horner_apply(a.matrix, theta, f);
    CHECK(max_abs_diff(via_rec, via_horner) <= 1e-10);
}

TEST_CASE("recursive unrolls into the multivariate family") {
    std::mt19937_64 rng(39);
    const RescaledLaplacian a = random_rescaled(10, 0.35, rng);
    const RescaledLaplacian b = random_rescaled(10, 0.35, rng);
    const RescaledLaplacian c = random_rescaled(10, 0.35, rng);
    const std::vector<const SparseMatrix*> ops = {&a.matrix, &b.matrix, &c.matrix};
    const DenseMatrix f = oracles::random_dense(10, 2, rng);

    const int p = 3;
    const std::vector<double> theta = random_coeffs(static_cast<std::size_t>(p) + 1, rng);
    DenseMatrix logits = oracles::random_dense(p, 3, rng);
    const DenseMatrix alpha = softmax_rows(logits);

    // induced word coefficients: theta_{|w|} * prod_t alpha(step t, w[t])
    const auto words = enumerate_words(3, p);
    std::vector<double> word_theta(words.size());
    for (std::size_t w = 0; w < words.size(); ++w) {
        double v = theta[words[w].size()];
        for (std::size_t t = 0; t < words[w].size(); ++t)
            v *= alpha(t, static_cast<std::size_t>(words[w][t]));
        word_theta[w] = v;
    }

    const DenseMatrix via_rec = recursive_apply(ops, theta, alpha, f);
    const DenseMatrix via_multivar = multivar_apply(ops, word_theta, f);
    CHECK(max_abs_diff(via_rec, via_multivar) <= 1e-10);
}

TEST_CASE("all filters are linear in the signal") {
    std::mt19937_64 rng(40);
    const RescaledLaplacian a = random_rescaled(12, 0.3, rng);
    const RescaledLaplacian b = random_rescaled(12, 0.3, rng);
    const std::vector<const SparseMatrix*> ops = {&a.matrix, &b.matrix};
    const DenseMatrix f1 = oracles::random_dense(12, 2, rng);
    const DenseMatrix f2 = oracles::random_dense(12, 2, rng);
    const double c = 0.37;
    DenseMatrix combo = f1;
    combo.axpy(c, f2);

    const std::vector<double> cheb_theta = random_coeffs(5, rng);
    DenseMatrix lin = chebyshev_apply(a.matrix, cheb_theta, f1);
    lin.axpy(c, chebyshev_apply(a.matrix, cheb_theta, f2));
    CHECK(max_abs_diff(chebyshev_apply(a.matrix, cheb_theta, combo), lin) <= 1e-10);

    const std::vector<double> mv_theta = random_coeffs(7, rng);
    lin = multivar_apply(ops, mv_theta, f1);
    lin.axpy(c, multivar_apply(ops, mv_theta, f2));
    CHECK(max_abs_diff(multivar_apply(ops, mv_theta, combo), lin) <= 1e-10);

    const std::vector<double> rec_theta = random_coeffs(3, rng);
    DenseMatrix logits = oracles::random_dense(2, 2, rng);
    const DenseMatrix alpha = softmax_rows(logits);
    lin = recursive_apply(ops, rec_theta, alpha, f1);
    lin.axpy(c, recursive_apply(ops, rec_theta, alpha, f2));
    CHECK(max_abs_diff(recursive_apply(ops, rec_theta, alpha, combo), lin) <= 1e-10);
}

TEST_CASE("channel-mixing variants agree with scalar filters") {
    std::mt19937_64 rng(41);
    const RescaledLaplacian a = random_rescaled(10, 0.3, rng);
    const RescaledLaplacian b = random_rescaled(10, 0.3, rng);
    const DenseMatrix f = oracles::random_dense(10, 1, rng);

    // q' = q = 1 blocks reduce to scalars
    ChebCoeffs cheb;
    std::vector<double> cheb_scalar;
    for (int j = 0; j < 4; ++j) {
        DenseMatrix blk(1, 1);
        blk(0, 0) = 0.3 * j - 0.4;
        cheb.theta.push_back(blk);
        cheb_scalar.push_back(blk(0, 0));
    }
    CHECK(max_abs_diff(chebyshev_apply(a.matrix, cheb, f),
                       chebyshev_apply(a.matrix, cheb_scalar, f)) <= 1e-12);

    MultivarCoeffs mv;
    mv.num_operators = 2;
    mv.order = 2;
    std::vector<double> mv_scalar;
    for (std::size_t w = 0; w < word_count(2, 2); ++w) {
        DenseMatrix blk(1, 1);
        blk(0, 0) = 0.1 * static_cast<double>(w) - 0.3;
        mv.theta.push_back(blk);
        mv_scalar.push_back(blk(0, 0));
    }
    CHECK(max_abs_diff(multivar_apply({&a.matrix, &b.matrix}, mv, f),
                       multivar_apply({&a.matrix, &b.matrix}, mv_scalar, f)) <= 1e-12);

    RecursiveCoeffs rc;
    rc.num_operators = 2;
    rc.granularity = AttentionGranularity::PerLayer;
    std::vector<double> rc_scalar;
    for (int j = 0; j < 3; ++j) {
        DenseMatrix blk(1, 1);
        blk(0, 0) = 0.5 - 0.2 * j;
        rc.theta.push_back(blk);
        rc_scalar.push_back(blk(0, 0));
    }
    rc.attention_logits = oracles::random_dense(2, 2, rng);
    const DenseMatrix alpha = softmax_rows(rc.attention_logits);
    CHECK(max_abs_diff(recursive_apply({&a.matrix, &b.matrix}, rc, f),
                       recursive_apply({&a.matrix, &b.matrix}, rc_scalar, alpha, f)) <= 1e-12);

    // per-channel granularity with identical rows equals per-layer
    RecursiveCoeffs rcq;
    rcq.num_operators = 2;
    rcq.granularity = AttentionGranularity::PerChannel;
    std::mt19937_64 rng2(7);
    for (int j = 0; j < 3; ++j) rcq.theta.push_back(oracles::random_dense(3, 2, rng2));
    const DenseMatrix fq = oracles::random_dense(10, 3, rng2);
    DenseMatrix per_layer_logits = oracles::random_dense(2, 2, rng2);
    rcq.attention_logits = DenseMatrix(2 * 2, 2);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t l = 0; l < 2; ++l)
            for (std::size_t k = 0; k < 2; ++k)
                rcq.attention_logits(j * 2 + l, k) = per_layer_logits(j, k);
    RecursiveCoeffs rcl = rcq;
    rcl.granularity = AttentionGranularity::PerLayer;
    rcl.attention_logits = per_layer_logits;
    CHECK(max_abs_diff(recursive_apply({&a.matrix, &b.matrix}, rcq, fq),
                       recursive_apply({&a.matrix, &b.matrix}, rcl, fq)) <= 1e-12);
}
