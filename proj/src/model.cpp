#include "motifgcn/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace motifgcn {

const char* family_name(ModelFamily f) {
    switch (f) {
        case ModelFamily::ChebNet: return "chebnet";
        case ModelFamily::MotifNetM: return "motifnet_m";
        case ModelFamily::MotifNetD: return "motifnet_d";
    }
    return "?";
}

std::optional<ModelFamily> family_from_name(const std::string& name) {
    if (name == "chebnet") return ModelFamily::ChebNet;
    if (name == "motifnet_m") return ModelFamily::MotifNetM;
    if (name == "motifnet_d") return ModelFamily::MotifNetD;
    return std::nullopt;
}

PreparedOperators prepare_operators(const DirectedGraph& g, const std::vector<MotifId>& motifs,
                                    std::size_t dense_cap, int threads) {
    PreparedOperators out;
    out.ids = motifs;
    const auto adjacencies = motif_adjacencies(g, motifs, threads);
    for (const MotifAdjacency& adj : adjacencies) {
        NormalizedLaplacian lap = normalized_laplacian(adj, dense_cap);
        RescaledLaplacian resc = rescale(lap, lap.lambda_max);
        out.rescaled_t.push_back(transpose(resc.matrix));
        out.rescaled.push_back(std::move(resc.matrix));
        out.laplacians.push_back(std::move(lap));
    }
    return out;
}

namespace {

std::size_t theta_block_count(const ModelSpec& spec) {
    switch (spec.family) {
        case ModelFamily::ChebNet:
        case ModelFamily::MotifNetM:
            return static_cast<std::size_t>(spec.order) + 1;
        case ModelFamily::MotifNetD:
            return word_count(2, spec.order);
    }
    return 0;
}

std::size_t attention_slots(const ModelSpec& spec, std::size_t q_out) {
    if (spec.family != ModelFamily::MotifNetM || spec.order == 0) return 0;
    return spec.attention == AttentionGranularity::PerLayer ? 1 : q_out;
}

DenseMatrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
    DenseMatrix m(fan_in, fan_out);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    fill_uniform(m, rng, -limit, limit);
    return m;
}

void validate(const ModelSpec& spec, const PreparedOperators& ops) {
    if (spec.in_dim == 0 || spec.hidden1 == 0 || spec.hidden2 == 0 || spec.classes == 0)
        throw std::invalid_argument("build_model: channel widths must be positive");
    if (spec.order < 0) throw std::invalid_argument("build_model: negative order");
    if (ops.ids != spec.motifs)
        throw std::invalid_argument("build_model: prepared operators do not match the motif set");
    switch (spec.family) {
        case ModelFamily::ChebNet:
            if (spec.motifs.size() != 1)
                throw std::invalid_argument("build_model: chebnet takes exactly one operator");
            if (!ops.laplacians[0].symmetric)
                throw std::invalid_argument(
                    "build_model: chebnet requires a symmetric operator, got " +
                    std::string(motif_name(spec.motifs[0])));
            break;
        case ModelFamily::MotifNetD:
            if (spec.motifs != std::vector<MotifId>{MotifId::Min, MotifId::Mout})
                throw std::invalid_argument("build_model: motifnet_d takes exactly {Min, Mout}");
            break;
        case ModelFamily::MotifNetM:
            if (spec.motifs.empty())
                throw std::invalid_argument("build_model: motifnet_m needs at least one motif");
            break;
    }
}

}  // namespace

ConvLayer Model::make_conv_layer(const std::string& prefix, std::size_t q_in, std::size_t q_out,
                                 std::mt19937_64& rng) const {
    ConvLayer layer;
    const std::size_t blocks = theta_block_count(spec_);
    layer.theta.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b)
        layer.theta.emplace_back(prefix + "/theta" + std::to_string(b),
                                 glorot_uniform(q_in, q_out, rng), true);
    layer.bias = Param(prefix + "/bias", DenseMatrix(1, q_out), false);
    const std::size_t slots = attention_slots(spec_, q_out);
    if (slots > 0) {
        // zero logits start at uniform attention
        layer.attention_logits =
            Param(prefix + "/attention",
                  DenseMatrix(static_cast<std::size_t>(spec_.order) * slots, ops_.ids.size()),
                  false);
    }
    return layer;
}

Model::Model(ModelSpec spec, PreparedOperators ops) : spec_(std::move(spec)), ops_(std::move(ops)) {
    validate(spec_, ops_);
    std::mt19937_64 rng(spec_.seed);
    conv1_ = make_conv_layer("conv1", spec_.in_dim, spec_.hidden1, rng);
    conv2_ = make_conv_layer("conv2", spec_.hidden1, spec_.hidden2, rng);
    dense_w_ = Param("dense/weight", glorot_uniform(spec_.hidden2, spec_.classes, rng), true);
    dense_b_ = Param("dense/bias", DenseMatrix(1, spec_.classes), false);
}

Model build_model(const ModelSpec& spec, PreparedOperators ops) {
    return Model(spec, std::move(ops));
}

std::vector<Param*> Model::parameters() {
    std::vector<Param*> out;
    for (ConvLayer* layer : {&conv1_, &conv2_}) {
        for (Param& p : layer->theta) out.push_back(&p);
        out.push_back(&layer->bias);
        if (layer->attention_logits) out.push_back(&*layer->attention_logits);
    }
    out.push_back(&dense_w_);
    out.push_back(&dense_b_);
    return out;
}

std::vector<const Param*> Model::parameters() const {
    auto* self = const_cast<Model*>(this);
    std::vector<const Param*> out;
    for (Param* p : self->parameters()) out.push_back(p);
    return out;
}

Param* Model::find_parameter(const std::string& name) {
    for (Param* p : parameters())
        if (p->name == name) return p;
    return nullptr;
}

int Model::conv_forward(Tape& tape, ConvLayer& layer, int input) {
    std::vector<int> theta_ids;
    theta_ids.reserve(layer.theta.size());
    for (Param& p : layer.theta) theta_ids.push_back(tape.param_leaf(p));
    const int bias_id = tape.param_leaf(layer.bias);
    const std::size_t num_ops = ops_.rescaled.size();
    int acc = -1;

    switch (spec_.family) {
        case ModelFamily::ChebNet: {
            const SparseMatrix& s = ops_.rescaled[0];
            const SparseMatrix& st = ops_.rescaled_t[0];
            acc = tape.matmul(input, theta_ids[0]);
            if (spec_.order >= 1) {
                int tprev = input;
                int tcur = tape.const_spmv(s, st, input);
                acc = tape.add(acc, tape.matmul(tcur, theta_ids[1]));
                for (int j = 2; j <= spec_.order; ++j) {
                    const int tnext =
                        tape.sub(tape.scale(tape.const_spmv(s, st, tcur), 2.0), tprev);
                    acc = tape.add(acc, tape.matmul(tnext, theta_ids[static_cast<std::size_t>(j)]));
                    tprev = tcur;
                    tcur = tnext;
                }
            }
            break;
        }
        case ModelFamily::MotifNetD: {
            // prefix tree over operator words, one spmv per word
            acc = tape.matmul(input, theta_ids[0]);
            std::vector<int> level = {input};
            std::size_t next_block = 1;
            for (int j = 1; j <= spec_.order; ++j) {
                std::vector<int> next;
                next.reserve(level.size() * num_ops);
                for (int prod : level)
                    for (std::size_t k = 0; k < num_ops; ++k) {
                        const int pw = tape.const_spmv(ops_.rescaled[k], ops_.rescaled_t[k], prod);
                        acc = tape.add(acc, tape.matmul(pw, theta_ids[next_block++]));
                        next.push_back(pw);
                    }
                level = std::move(next);
            }
            break;
        }
        case ModelFamily::MotifNetM: {
            acc = tape.matmul(input, theta_ids[0]);
            if (spec_.order == 0) break;
            const int logits_id = tape.param_leaf(*layer.attention_logits);
            const int alpha = tape.softmax_rows(logits_id);
            const std::size_t q_out = layer.theta[0].value.cols();
            if (spec_.attention == AttentionGranularity::PerLayer) {
                int g = input;
                for (int j = 1; j <= spec_.order; ++j) {
                    std::vector<int> terms, weights;
                    for (std::size_t k = 0; k < num_ops; ++k) {
                        terms.push_back(tape.const_spmv(ops_.rescaled[k], ops_.rescaled_t[k], g));
                        weights.push_back(tape.entry(alpha, static_cast<std::size_t>(j - 1), k));
                    }
                    g = tape.weighted_sum(terms, weights);
                    acc = tape.add(acc, tape.matmul(g, theta_ids[static_cast<std::size_t>(j)]));
                }
            } else {
                // each output channel runs its own recursion
                std::vector<int> channel_cols;
                channel_cols.reserve(q_out);
                for (std::size_t l = 0; l < q_out; ++l) {
                    int g = input;
                    int col = -1;
                    for (int j = 1; j <= spec_.order; ++j) {
                        std::vector<int> terms, weights;
                        for (std::size_t k = 0; k < num_ops; ++k) {
                            terms.push_back(
                                tape.const_spmv(ops_.rescaled[k], ops_.rescaled_t[k], g));
                            weights.push_back(
                                tape.entry(alpha, static_cast<std::size_t>(j - 1) * q_out + l, k));
                        }
                        g = tape.weighted_sum(terms, weights);
                        const int contrib =
                            tape.matmul(g, tape.cols(theta_ids[static_cast<std::size_t>(j)], l, l + 1));
                        col = col < 0 ? contrib : tape.add(col, contrib);
                    }
                    channel_cols.push_back(col);
                }
                acc = tape.add(acc, tape.concat_cols(channel_cols));
            }
            break;
        }
    }
    return tape.add_rowvec(acc, bias_id);
}

int Model::forward(Tape& tape, const DenseMatrix& features) {
    if (features.cols() != spec_.in_dim)
        throw std::invalid_argument("forward: features have " + std::to_string(features.cols()) +
                                    " columns, spec expects " + std::to_string(spec_.in_dim));
    const int x = tape.leaf(features, false);
    const int h1 = tape.relu(conv_forward(tape, conv1_, tape.dropout(x, spec_.keep_prob)));
    const int h2 = tape.relu(conv_forward(tape, conv2_, tape.dropout(h1, spec_.keep_prob)));
    const int pooled = tape.dropout(h2, spec_.keep_prob);
    return tape.add_rowvec(tape.matmul(pooled, tape.param_leaf(dense_w_)),
                           tape.param_leaf(dense_b_));
}

DenseMatrix Model::conv_values(const ConvLayer& layer, const DenseMatrix& input) const {
    std::vector<const SparseMatrix*> ops;
    for (const SparseMatrix& s : ops_.rescaled) ops.push_back(&s);
    DenseMatrix out;
    switch (spec_.family) {
        case ModelFamily::ChebNet: {
            ChebCoeffs coeffs;
            for (const Param& p : layer.theta) coeffs.theta.push_back(p.value);
            out = chebyshev_apply(*ops[0], coeffs, input);
            break;
        }
        case ModelFamily::MotifNetD: {
            MultivarCoeffs coeffs;
            coeffs.num_operators = ops.size();
            coeffs.order = spec_.order;
            for (const Param& p : layer.theta) coeffs.theta.push_back(p.value);
            out = multivar_apply(ops, coeffs, input);
            break;
        }
        case ModelFamily::MotifNetM: {
            RecursiveCoeffs coeffs;
            coeffs.num_operators = ops.size();
            coeffs.granularity = spec_.attention;
            for (const Param& p : layer.theta) coeffs.theta.push_back(p.value);
            if (layer.attention_logits) coeffs.attention_logits = layer.attention_logits->value;
            out = recursive_apply(ops, coeffs, input);
            break;
        }
    }
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += layer.bias.value(0, j);
    return out;
}

DenseMatrix Model::forward_values(const DenseMatrix& features) const {
    auto relu_inplace = [](DenseMatrix& m) {
        for (double& v : m.values()) v = v > 0.0 ? v : 0.0;
    };
    DenseMatrix h1 = conv_values(conv1_, features);
    relu_inplace(h1);
    DenseMatrix h2 = conv_values(conv2_, h1);
    relu_inplace(h2);
    DenseMatrix logits = matmul(h2, dense_w_.value);
    for (std::size_t i = 0; i < logits.rows(); ++i)
        for (std::size_t j = 0; j < logits.cols(); ++j) logits(i, j) += dense_b_.value(0, j);
    return logits;
}

std::vector<DenseMatrix> Model::attention() const {
    std::vector<DenseMatrix> out;
    for (const ConvLayer* layer : {&conv1_, &conv2_})
        if (layer->attention_logits) out.push_back(softmax_rows(layer->attention_logits->value));
    return out;
}

std::size_t conv_parameter_count(const ModelSpec& spec, std::size_t q_in, std::size_t q_out) {
    const std::size_t filt = theta_block_count(spec) * q_in * q_out + q_out;
    const std::size_t slots = attention_slots(spec, q_out);
    return filt + spec.motifs.size() * static_cast<std::size_t>(spec.order) * slots;
}

std::size_t count_parameters(const ModelSpec& spec) {
    return conv_parameter_count(spec, spec.in_dim, spec.hidden1) +
           conv_parameter_count(spec, spec.hidden1, spec.hidden2) +
           spec.hidden2 * spec.classes + spec.classes;
}

}  // namespace motifgcn
