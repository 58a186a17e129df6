#include <doctest.h>

#include <filesystem>
#include <stdexcept>

#include "motifgcn/serialize.hpp"
#include "motifgcn/train.hpp"
#include "oracles.hpp"

using namespace motifgcn;

namespace {

NodeDataset two_block_dataset(std::size_t n, std::uint64_t seed) {
    SyntheticSpec spec = make_directional_spec(n, 2, 0.25, 0.03, 0.0, 6, 0.4, seed);
    return generate_synthetic(spec);
}

ModelSpec small_chebnet(const NodeDataset& ds, std::uint64_t seed) {
    ModelSpec spec;
    spec.family = ModelFamily::ChebNet;
    spec.order = 2;
    spec.motifs = {MotifId::U};
    spec.in_dim = ds.features.cols();
    spec.hidden1 = 8;
    spec.hidden2 = 8;
    spec.classes = static_cast<std::size_t>(ds.num_classes);
    spec.keep_prob = 0.5;
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("training loss decreases on an easy synthetic task") {
    const NodeDataset ds = two_block_dataset(20, 23);
    ModelSpec spec = small_chebnet(ds, 23);
    spec.keep_prob = 1.0;  // smoke oracle checks the optimizer, not dropout
    Model model = build_model(spec, prepare_operators(ds.graph, spec.motifs));

    TrainConfig cfg;
    cfg.max_epochs = 50;
    cfg.patience = 50;
    cfg.seed = 23;
    const TrainReport report = train(model, ds.features, ds.labels, ds.masks, cfg);

    REQUIRE(report.history.size() >= 10);
    for (int e = 1; e < 10; ++e)
        CHECK(report.history[static_cast<std::size_t>(e)].train_loss <
              report.history[static_cast<std::size_t>(e - 1)].train_loss);
}

TEST_CASE("random labels stay near chance") {
    NodeDataset ds = two_block_dataset(80, 29);
    // shuffle labels so structure and features carry no signal; 4 fake classes
    std::mt19937_64 rng(5);
    ds.num_classes = 4;
    for (int& l : ds.labels) l = static_cast<int>(rng() % 4);
    ds.masks = make_splits(80, {0.2, 0.2, 0.2}, 31, false);

    ModelSpec spec = small_chebnet(ds, 29);
    spec.classes = 4;
    Model model = build_model(spec, prepare_operators(ds.graph, spec.motifs));
    TrainConfig cfg;
    cfg.max_epochs = 60;
    cfg.patience = 60;
    cfg.seed = 29;
    const TrainReport report = train(model, ds.features, ds.labels, ds.masks, cfg);
    CHECK(report.test_accuracy <= 3.0 * 0.25);
}

TEST_CASE("training is deterministic under a fixed seed") {
    const NodeDataset ds = two_block_dataset(30, 37);
    ModelSpec spec = small_chebnet(ds, 37);
    TrainConfig cfg;
    cfg.max_epochs = 25;
    cfg.patience = 25;
    cfg.seed = 37;

    Model a = build_model(spec, prepare_operators(ds.graph, spec.motifs));
    Model b = build_model(spec, prepare_operators(ds.graph, spec.motifs));
    const TrainReport ra = train(a, ds.features, ds.labels, ds.masks, cfg);
    const TrainReport rb = train(b, ds.features, ds.labels, ds.masks, cfg);

    REQUIRE(ra.history.size() == rb.history.size());
    CHECK(ra.history == rb.history);  // bitwise-identical loss trajectory
    CHECK(ra.best_epoch == rb.best_epoch);
    CHECK(ra.test_accuracy == rb.test_accuracy);
}

TEST_CASE("reported test accuracy comes from the best-validation epoch") {
    const NodeDataset ds = two_block_dataset(40, 41);
    ModelSpec spec = small_chebnet(ds, 41);
    Model model = build_model(spec, prepare_operators(ds.graph, spec.motifs));
    TrainConfig cfg;
    cfg.max_epochs = 40;
    cfg.patience = 15;
    cfg.seed = 41;
    const TrainReport report = train(model, ds.features, ds.labels, ds.masks, cfg);

    REQUIRE(report.best_epoch >= 0);
    const EpochStats& best = report.history[static_cast<std::size_t>(report.best_epoch)];
    CHECK(report.test_accuracy == best.test_acc);
    for (const EpochStats& s : report.history) CHECK(best.val_loss <= s.val_loss);
    // early stopping respected the patience window
    CHECK(report.epochs_run - 1 - report.best_epoch <= cfg.patience);
}

TEST_CASE("divergence aborts with a diagnostic") {
    const NodeDataset ds = two_block_dataset(20, 43);
    ModelSpec spec = small_chebnet(ds, 43);
    Model model = build_model(spec, prepare_operators(ds.graph, spec.motifs));
    TrainConfig cfg;
    cfg.lr = 1e18;  // guaranteed blow-up
    cfg.weight_decay = 0.0;
    cfg.max_epochs = 50;
    cfg.seed = 43;
    CHECK_THROWS_AS(train(model, ds.features, ds.labels, ds.masks, cfg), TrainingDiverged);
}

TEST_CASE("overlapping masks are rejected") {
    const NodeDataset ds = two_block_dataset(20, 47);
    ModelSpec spec = small_chebnet(ds, 47);
    Model model = build_model(spec, prepare_operators(ds.graph, spec.motifs));
    Masks bad = ds.masks;
    bad.train[0] = bad.val[0] = 1;
    CHECK_THROWS_AS(train(model, ds.features, ds.labels, bad, TrainConfig{}),
                    std::invalid_argument);
}

TEST_CASE("checkpoint round trip restores the model exactly") {
    const NodeDataset ds = two_block_dataset(24, 53);
    ModelSpec spec = small_chebnet(ds, 53);
    Model model = build_model(spec, prepare_operators(ds.graph, spec.motifs));
    TrainConfig cfg;
    cfg.max_epochs = 10;
    cfg.patience = 10;
    cfg.seed = 53;
    const TrainReport report = train(model, ds.features, ds.labels, ds.masks, cfg);

    const auto path = std::filesystem::temp_directory_path() / "mgcn_ckpt.json";
    save_checkpoint(path.string(), model, report);
    const Checkpoint ckpt = load_checkpoint(path.string());
    Model restored = restore_model(ckpt, prepare_operators(ds.graph, spec.motifs));

    CHECK(max_abs_diff(restored.forward_values(ds.features), model.forward_values(ds.features)) ==
          0.0);
    CHECK(ckpt.best_epoch == report.best_epoch);
    CHECK(ckpt.test_accuracy == report.test_accuracy);
    REQUIRE(ckpt.history.size() == report.history.size());
    CHECK(ckpt.history.back() == report.history.back());
}

TEST_CASE("motif selection ranks a planted motif first") {
    bool cycle[3][3] = {};
    cycle[0][1] = cycle[1][2] = cycle[2][0] = true;
    PlantedMotifSpec pspec;
    pspec.n = 120;
    pspec.blocks = 4;
    pspec.motif = *classify_triad(cycle);
    pspec.instances_per_block = 25;
    pspec.cross_noise_p = 0.05;
    pspec.feature_dim = 8;
    pspec.split_fractions = {0.3, 0.2, 0.2};
    pspec.seed = 59;
    const NodeDataset ds = generate_planted_motif(pspec);

    SelectionConfig cfg;
    cfg.hidden = 8;
    cfg.train.max_epochs = 150;
    cfg.train.patience = 50;
    cfg.train.seed = 59;
    const SelectionResult result =
        motif_selection(ds.graph, ds.features, ds.labels, ds.masks, cfg);

    REQUIRE(result.ranked.size() == 16);
    CHECK(result.ranked.front().motif == pspec.motif);
    CHECK(!result.selected.empty());
    // masses are a convex combination: nonnegative, summing to ~1 over K
    double total = 0.0;
    for (const MotifMass& mm : result.ranked) {
        CHECK(mm.mass >= 0.0);
        total += mm.mass;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dense motifs are flagged on a complete digraph") {
    std::vector<Triplet> arcs;
    for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 30; ++j)
            if (i != j) arcs.push_back({i, j, 1.0});
    const DirectedGraph complete = graph_from_triplets(30, true, std::move(arcs));
    const MotifAdjacency adj = motif_adjacency(complete, MotifId::M13);
    CHECK(offdiagonal_density(adj.matrix) > 0.25);
}
