#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "motifgcn/graph.hpp"
#include "motifgcn/motifs.hpp"

namespace motifgcn {

struct Masks {
    std::vector<std::uint8_t> train, val, test;

    std::size_t size() const { return train.size(); }
    static std::size_t count(const std::vector<std::uint8_t>& m) {
        std::size_t c = 0;
        for (auto v : m) c += v ? 1 : 0;
        return c;
    }
};

struct NodeDataset {
    DirectedGraph graph;
    DenseMatrix features;      // n x d
    std::vector<int> labels;   // one class per vertex, in [0, num_classes)
    int num_classes = 0;
    Masks masks;
};

// Directed stochastic block model. Class signal is carried by edge
// direction: on top of the base probabilities, vertices cite the next block
// with an extра "directionality" boost (a -> a+1 chain, no wraparound).
// Features are class means plus Gaussian noise.
struct SyntheticSpec {
    std::size_t n = 1000;
    int blocks = 4;
    DenseMatrix block_probs;        // blocks x blocks; built by the factory below
    double directionality = 1.0;    // recorded strength that shaped block_probs
    std::size_t feature_dim = 16;
    double noise_sigma = 1.0;
    double mean_scale = 1.0;
    std::array<double, 3> split_fractions = {0.1, 0.1, 0.1};
    std::uint64_t seed = 1;
};

SyntheticSpec make_directional_spec(std::size_t n, int blocks, double p_within, double p_between,
                                    double directionality, std::size_t feature_dim,
                                    double noise_sigma, std::uint64_t seed);

NodeDataset generate_synthetic(const SyntheticSpec& spec);

// Planted-motif benchmark: within-block triples carry one triad motif's
// pattern, cross-block arcs are direction-agnostic noise, features carry no
// class signal beyond noise_sigma-scaled Gaussians.
struct PlantedMotifSpec {
    std::size_t n = 160;
    int blocks = 4;
    MotifId motif = MotifId::M13;
    int instances_per_block = 120;
    double cross_noise_p = 0.01;
    std::size_t feature_dim = 8;
    double noise_sigma = 1.0;
    std::array<double, 3> split_fractions = {0.1, 0.1, 0.1};
    std::uint64_t seed = 1;
};

NodeDataset generate_planted_motif(const PlantedMotifSpec& spec);

struct SplitWarnings {
    std::vector<int> unstratified_classes;
};

// Disjoint train/val/test masks of floor(n * fraction) vertices, seeded
// shuffle; stratified per class when labels are given.
Masks make_splits(std::size_t n, const std::array<double, 3>& fractions, std::uint64_t seed,
                  bool stratify_by_label = false, const std::vector<int>* labels = nullptr,
                  SplitWarnings* warnings = nullptr);

struct PcaResult {
    DenseMatrix projected;            // n x k
    DenseMatrix components;           // d x k, sign-fixed
    DenseMatrix mean;                 // 1 x d
    std::vector<double> explained;    // top-k eigenvalues of the covariance
};

// Mean-center, eigendecompose the covariance (Gram trick when n < d),
// project on the top components. Component signs are fixed so the largest
// loading of each component is positive.
PcaResult pca_reduce(const DenseMatrix& features, std::size_t target_dims);

// Keeps the target_n first vertices (BFS order from the smallest vertex) of
// the largest weakly connected component; masks are regenerated.
NodeDataset subsample_largest_wcc(const NodeDataset& ds, std::size_t target_n,
                                  std::uint64_t seed = 1);

// Dataset directory: edges.tsv / features.tsv / labels.tsv, optional
// splits.json; idmap.tsv and labelmap.tsv record any id remapping.
NodeDataset load_cora_format(const std::string& dir_path);
void save_dataset(const std::string& dir_path, const NodeDataset& ds, bool write_splits = true);

double masked_accuracy(const DenseMatrix& logits, const std::vector<int>& labels,
                       const std::vector<std::uint8_t>& mask);
double masked_cross_entropy(const DenseMatrix& logits, const std::vector<int>& labels,
                            const std::vector<std::uint8_t>& mask);

}  // namespace motifgcn
