#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "motifgcn/dataset.hpp"
#include "motifgcn/model.hpp"

namespace motifgcn {

struct TrainConfig {
    double lr = 1e-3;
    double weight_decay = 1e-3;
    bool decoupled_decay = false;
    int max_epochs = 1000;
    int patience = 50;  // early stopping on validation cross-entropy
    std::uint64_t seed = 1;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0, train_acc = 0.0;
    double val_loss = 0.0, val_acc = 0.0;
    double test_loss = 0.0, test_acc = 0.0;

    bool operator==(const EpochStats&) const = default;
};

struct TrainReport {
    std::vector<EpochStats> history;
    int best_epoch = -1;            // argmin of validation cross-entropy
    double test_accuracy = 0.0;     // test accuracy at best_epoch
    double best_val_loss = 0.0;
    std::vector<DenseMatrix> attention;  // softmaxed, per conv layer, at best epoch
    double wall_seconds = 0.0;
    int epochs_run = 0;
};

// Raised when the training loss stops being finite.
struct TrainingDiverged : std::runtime_error {
    explicit TrainingDiverged(const std::string& what) : std::runtime_error(what) {}
    int epoch = -1;
};

// Full-batch semi-supervised training: every step evaluates all vertices,
// the loss is taken on the train mask, early stopping watches validation
// cross-entropy. The model keeps the best-epoch parameter values.
TrainReport train(Model& model, const DenseMatrix& features, const std::vector<int>& labels,
                  const Masks& masks, const TrainConfig& cfg);

EpochStats evaluate(Model& model, const DenseMatrix& features, const std::vector<int>& labels,
                    const Masks& masks);

struct MotifMass {
    MotifId motif = MotifId::U;
    double mass = 0.0;       // mean attention over layers, steps and channels
    double density = 0.0;    // off-diagonal fill of the motif adjacency
    bool dense_flagged = false;
};

struct SelectionResult {
    std::vector<MotifMass> ranked;        // mass descending
    std::vector<MotifId> selected;        // above-uniform mass, not dense-flagged
    std::vector<MotifId> above_threshold; // above-uniform mass
    std::vector<MotifId> dense_flagged;
    TrainReport report;
};

struct SelectionConfig {
    std::vector<MotifId> candidates;  // defaults to all 16 operators
    double density_cap = 0.25;
    std::size_t hidden = 16;
    double keep_prob = 0.5;
    TrainConfig train;
    std::size_t dense_cap = kDefaultDenseCap;
    int threads = 1;
};

// The two-stage workflow: train the attention model at order p=1 over the
// candidate operators, rank motifs by mean attention mass, keep the ones
// above uniform, and flag dense adjacencies.
SelectionResult motif_selection(const DirectedGraph& g, const DenseMatrix& features,
                                const std::vector<int>& labels, const Masks& masks,
                                const SelectionConfig& cfg);

}  // namespace motifgcn
