#include "motifgcn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace motifgcn {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

EpochStats evaluate(Model& model, const DenseMatrix& features, const std::vector<int>& labels,
                    const Masks& masks) {
    const DenseMatrix logits = model.forward_values(features);
    EpochStats s;
    s.train_loss = masked_cross_entropy(logits, labels, masks.train);
    s.train_acc = masked_accuracy(logits, labels, masks.train);
    s.val_loss = masked_cross_entropy(logits, labels, masks.val);
    s.val_acc = masked_accuracy(logits, labels, masks.val);
    s.test_loss = masked_cross_entropy(logits, labels, masks.test);
    s.test_acc = masked_accuracy(logits, labels, masks.test);
    return s;
}

TrainReport train(Model& model, const DenseMatrix& features, const std::vector<int>& labels,
                  const Masks& masks, const TrainConfig& cfg) {
    if (labels.size() != features.rows())
        throw std::invalid_argument("train: labels/features size mismatch");
    if (masks.train.size() != labels.size() || masks.val.size() != labels.size() ||
        masks.test.size() != labels.size())
        throw std::invalid_argument("train: masks must cover every vertex");
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (masks.train[i] + masks.val[i] + masks.test[i] > 1)
            throw std::invalid_argument("train: masks overlap at vertex " + std::to_string(i));

    AdamConfig adam;
    adam.lr = cfg.lr;
    adam.weight_decay = cfg.weight_decay;
    adam.decoupled = cfg.decoupled_decay;
    const std::vector<Param*> params = model.parameters();

    TrainReport report;
    std::vector<DenseMatrix> best_values;
    const auto started = std::chrono::steady_clock::now();

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        Tape tape(true, mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
        const int logits = model.forward(tape, features);
        const int loss = tape.softmax_xent(logits, labels, masks.train);
        const double loss_value = tape.value(loss)(0, 0);
        if (!std::isfinite(loss_value)) {
            TrainingDiverged err("train: non-finite loss " + std::to_string(loss_value) +
                                 " at epoch " + std::to_string(epoch));
            err.epoch = epoch;
            throw err;
        }
        tape.backward(loss);
        tape.write_grads_back();
        adam_step(params, adam);

        EpochStats stats = evaluate(model, features, labels, masks);
        stats.epoch = epoch;
        report.history.push_back(stats);
        report.epochs_run = epoch + 1;

        if (report.best_epoch < 0 || stats.val_loss < report.best_val_loss) {
            report.best_epoch = epoch;
            report.best_val_loss = stats.val_loss;
            report.test_accuracy = stats.test_acc;
            best_values.clear();
            for (const Param* p : params) best_values.push_back(p->value);
        }
        if (epoch - report.best_epoch >= cfg.patience) break;
    }

    // leave the model at its best-validation state
    if (!best_values.empty())
        for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best_values[i];
    report.attention = model.attention();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

SelectionResult motif_selection(const DirectedGraph& g, const DenseMatrix& features,
                                const std::vector<int>& labels, const Masks& masks,
                                const SelectionConfig& cfg) {
    std::vector<MotifId> candidates = cfg.candidates;
    if (candidates.empty()) {
        const auto all = all_motifs();
        candidates.assign(all.begin(), all.end());
    }
    const std::size_t num_classes =
        static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;

    ModelSpec spec;
    spec.family = ModelFamily::MotifNetM;
    spec.order = 1;  // the selection stage trains at first order
    spec.motifs = candidates;
    spec.in_dim = features.cols();
    spec.hidden1 = cfg.hidden;
    spec.hidden2 = cfg.hidden;
    spec.classes = num_classes;
    spec.attention = AttentionGranularity::PerChannel;
    spec.keep_prob = cfg.keep_prob;
    spec.seed = cfg.train.seed;

    PreparedOperators ops = prepare_operators(g, candidates, cfg.dense_cap, cfg.threads);
    std::vector<double> densities;
    densities.reserve(candidates.size());
    const auto adjacencies = motif_adjacencies(g, candidates, cfg.threads);
    for (const MotifAdjacency& adj : adjacencies)
        densities.push_back(offdiagonal_density(adj.matrix));

    Model model = build_model(spec, std::move(ops));
    SelectionResult result;
    result.report = train(model, features, labels, masks, cfg.train);

    // mean attention mass per operator over layers, steps and channels
    std::vector<double> mass(candidates.size(), 0.0);
    std::size_t rows = 0;
    for (const DenseMatrix& alpha : result.report.attention) {
        for (std::size_t r = 0; r < alpha.rows(); ++r)
            for (std::size_t k = 0; k < alpha.cols(); ++k) mass[k] += alpha(r, k);
        rows += alpha.rows();
    }
    for (double& m : mass) m /= static_cast<double>(std::max<std::size_t>(rows, 1));

    for (std::size_t k = 0; k < candidates.size(); ++k) {
        MotifMass mm;
        mm.motif = candidates[k];
        mm.mass = mass[k];
        mm.density = densities[k];
        mm.dense_flagged = densities[k] > cfg.density_cap;
        result.ranked.push_back(mm);
        if (mm.dense_flagged) result.dense_flagged.push_back(mm.motif);
    }
    std::sort(result.ranked.begin(), result.ranked.end(),
              [](const MotifMass& a, const MotifMass& b) { return a.mass > b.mass; });

    const double uniform = 1.0 / static_cast<double>(candidates.size());
    for (const MotifMass& mm : result.ranked) {
        if (mm.mass <= uniform) continue;
        result.above_threshold.push_back(mm.motif);
        if (!mm.dense_flagged) result.selected.push_back(mm.motif);
    }
    return result;
}

}  // namespace motifgcn
