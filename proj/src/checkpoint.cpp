#include <fstream>
#include <stdexcept>

#include "motifgcn/serialize.hpp"

namespace motifgcn {

using nlohmann::json;

namespace {

std::vector<MotifId> motif_list_from_json(const json& j) {
    std::vector<MotifId> out;
    for (const auto& name : j) {
        const auto id = motif_from_name(name.get<std::string>());
        if (!id)
            throw std::invalid_argument("unknown motif name '" + name.get<std::string>() + "'");
        out.push_back(*id);
    }
    return out;
}

json motif_list_to_json(const std::vector<MotifId>& ids) {
    json out = json::array();
    for (MotifId id : ids) out.push_back(motif_name(id));
    return out;
}

}  // namespace

json to_json(const ModelSpec& spec) {
    return json{{"family", family_name(spec.family)},
                {"order", spec.order},
                {"motifs", motif_list_to_json(spec.motifs)},
                {"in_dim", spec.in_dim},
                {"hidden", {spec.hidden1, spec.hidden2}},
                {"classes", spec.classes},
                {"attention",
                 spec.attention == AttentionGranularity::PerLayer ? "per_layer" : "per_channel"},
                {"keep_prob", spec.keep_prob},
                {"seed", spec.seed}};
}

ModelSpec model_spec_from_json(const json& j) {
    ModelSpec spec;
    const auto fam = family_from_name(j.at("family").get<std::string>());
    if (!fam)
        throw std::invalid_argument("unknown model family '" +
                                    j.at("family").get<std::string>() + "'");
    spec.family = *fam;
    spec.order = j.at("order").get<int>();
    if (j.contains("motifs")) spec.motifs = motif_list_from_json(j.at("motifs"));
    if (j.contains("in_dim")) spec.in_dim = j.at("in_dim").get<std::size_t>();
    if (j.contains("hidden")) {
        const auto h = j.at("hidden");
        if (h.is_array() && h.size() == 2) {
            spec.hidden1 = h[0].get<std::size_t>();
            spec.hidden2 = h[1].get<std::size_t>();
        } else {
            spec.hidden1 = spec.hidden2 = h.get<std::size_t>();
        }
    }
    if (j.contains("classes")) spec.classes = j.at("classes").get<std::size_t>();
    if (j.contains("attention")) {
        const std::string a = j.at("attention").get<std::string>();
        if (a == "per_layer")
            spec.attention = AttentionGranularity::PerLayer;
        else if (a == "per_channel")
            spec.attention = AttentionGranularity::PerChannel;
        else
            throw std::invalid_argument("unknown attention granularity '" + a + "'");
    }
    if (j.contains("keep_prob")) spec.keep_prob = j.at("keep_prob").get<double>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

json to_json(const TrainConfig& cfg) {
    return json{{"lr", cfg.lr},
                {"weight_decay", cfg.weight_decay},
                {"decoupled_decay", cfg.decoupled_decay},
                {"max_epochs", cfg.max_epochs},
                {"patience", cfg.patience},
                {"seed", cfg.seed}};
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig cfg;
    if (j.contains("lr")) cfg.lr = j.at("lr").get<double>();
    if (j.contains("weight_decay")) cfg.weight_decay = j.at("weight_decay").get<double>();
    if (j.contains("decoupled_decay")) cfg.decoupled_decay = j.at("decoupled_decay").get<bool>();
    if (j.contains("max_epochs")) cfg.max_epochs = j.at("max_epochs").get<int>();
    if (j.contains("patience")) cfg.patience = j.at("patience").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

json to_json(const EpochStats& s) {
    return json{{"epoch", s.epoch},         {"train_loss", s.train_loss},
                {"train_acc", s.train_acc}, {"val_loss", s.val_loss},
                {"val_acc", s.val_acc},     {"test_loss", s.test_loss},
                {"test_acc", s.test_acc}};
}

json dense_to_json(const DenseMatrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.values()}};
}

DenseMatrix dense_from_json(const json& j) {
    DenseMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.size())
        throw std::invalid_argument("dense_from_json: data length does not match shape");
    m.values() = data;
    return m;
}

void save_checkpoint(const std::string& path, const Model& model, const TrainReport& report) {
    json params = json::object();
    for (const Param* p : model.parameters()) {
        params[p->name] = json{{"value", dense_to_json(p->value)},
                               {"m", dense_to_json(p->m)},
                               {"v", dense_to_json(p->v)},
                               {"step", p->step},
                               {"weight_decay", p->weight_decay}};
    }
    json history = json::array();
    for (const EpochStats& s : report.history) history.push_back(to_json(s));
    const json j{{"format_version", 1},
                 {"model", to_json(model.spec())},
                 {"params", params},
                 {"history", history},
                 {"best_epoch", report.best_epoch},
                 {"test_accuracy", report.test_accuracy}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_checkpoint: cannot write " + path);
    out << j.dump() << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    const json j = json::parse(in);
    Checkpoint ckpt;
    ckpt.format_version = j.at("format_version").get<int>();
    if (ckpt.format_version != 1)
        throw std::runtime_error("load_checkpoint: unsupported format version " +
                                 std::to_string(ckpt.format_version));
    ckpt.spec = model_spec_from_json(j.at("model"));
    for (const auto& [name, pj] : j.at("params").items()) {
        SavedParam sp;
        sp.value = dense_from_json(pj.at("value"));
        sp.m = dense_from_json(pj.at("m"));
        sp.v = dense_from_json(pj.at("v"));
        sp.step = pj.at("step").get<long>();
        sp.weight_decay = pj.at("weight_decay").get<bool>();
        ckpt.params[name] = std::move(sp);
    }
    if (j.contains("history"))
        for (const auto& sj : j.at("history")) {
            EpochStats s;
            s.epoch = sj.at("epoch").get<int>();
            s.train_loss = sj.at("train_loss").get<double>();
            s.train_acc = sj.at("train_acc").get<double>();
            s.val_loss = sj.at("val_loss").get<double>();
            s.val_acc = sj.at("val_acc").get<double>();
            s.test_loss = sj.at("test_loss").get<double>();
            s.test_acc = sj.at("test_acc").get<double>();
            ckpt.history.push_back(s);
        }
    ckpt.best_epoch = j.value("best_epoch", -1);
    ckpt.test_accuracy = j.value("test_accuracy", 0.0);
    return ckpt;
}

Model restore_model(const Checkpoint& ckpt, PreparedOperators ops) {
    Model model = build_model(ckpt.spec, std::move(ops));
    for (Param* p : model.parameters()) {
        const auto it = ckpt.params.find(p->name);
        if (it == ckpt.params.end())
            throw std::runtime_error("restore_model: checkpoint is missing parameter " + p->name);
        if (!it->second.value.same_shape(p->value))
            throw std::runtime_error("restore_model: shape mismatch for " + p->name);
        p->value = it->second.value;
        p->m = it->second.m;
        p->v = it->second.v;
        p->step = it->second.step;
        p->weight_decay = it->second.weight_decay;
    }
    return model;
}

}  // namespace motifgcn
