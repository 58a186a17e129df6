#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "motifgcn/model.hpp"
#include "motifgcn/train.hpp"

namespace motifgcn {

nlohmann::json to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EpochStats& s);

nlohmann::json dense_to_json(const DenseMatrix& m);
DenseMatrix dense_from_json(const nlohmann::json& j);

struct SavedParam {
    DenseMatrix value, m, v;
    long step = 0;
    bool weight_decay = true;
};

// Versioned JSON container: model spec, named parameter tensors, Adam state
// and the epoch history.
struct Checkpoint {
    int format_version = 1;
    ModelSpec spec;
    std::map<std::string, SavedParam> params;
    std::vector<EpochStats> history;
    int best_epoch = -1;
    double test_accuracy = 0.0;
};

void save_checkpoint(const std::string& path, const Model& model, const TrainReport& report);
Checkpoint load_checkpoint(const std::string& path);

// Rebuilds the model from a checkpoint; operators must match the spec's
// motif set.
Model restore_model(const Checkpoint& ckpt, PreparedOperators ops);

}  // namespace motifgcn
