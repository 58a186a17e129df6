#pragma once

#include <optional>
#include <string>
#include <vector>

#include "motifgcn/autodiff.hpp"
#include "motifgcn/filters.hpp"
#include "motifgcn/laplacian.hpp"
#include "motifgcn/optim.hpp"

namespace motifgcn {

enum class ModelFamily { ChebNet, MotifNetM, MotifNetD };

const char* family_name(ModelFamily f);
std::optional<ModelFamily> family_from_name(const std::string& name);

// Declarative description of a network: filter family, polynomial order,
// motif set, channel widths, attention granularity, dropout, seed.
struct ModelSpec {
    ModelFamily family = ModelFamily::ChebNet;
    int order = 2;
    std::vector<MotifId> motifs = {MotifId::U};
    std::size_t in_dim = 0;
    std::size_t hidden1 = 128;
    std::size_t hidden2 = 128;
    std::size_t classes = 0;
    AttentionGranularity attention = AttentionGranularity::PerChannel;
    double keep_prob = 0.5;
    std::uint64_t seed = 1;
};

// Rescaled motif Laplacians ready to drive the filters, with transposes for
// the backward pass.
struct PreparedOperators {
    std::vector<MotifId> ids;
    std::vector<NormalizedLaplacian> laplacians;
    std::vector<SparseMatrix> rescaled;
    std::vector<SparseMatrix> rescaled_t;
};

PreparedOperators prepare_operators(const DirectedGraph& g, const std::vector<MotifId>& motifs,
                                    std::size_t dense_cap = kDefaultDenseCap, int threads = 1);

struct ConvLayer {
    std::vector<Param> theta;              // one block per degree or word
    Param bias;
    std::optional<Param> attention_logits; // MotifNet-m only
};

// Two graph-convolutional layers (ReLU) + a dense layer; the softmax
// cross-entropy head lives in the trainer.
class Model {
public:
    Model(ModelSpec spec, PreparedOperators ops);

    const ModelSpec& spec() const { return spec_; }
    const PreparedOperators& operators() const { return ops_; }

    std::vector<Param*> parameters();
    std::vector<const Param*> parameters() const;
    Param* find_parameter(const std::string& name);

    // Records the forward pass on the tape, registering parameters as
    // tracked leaves, and returns the logits node.
    int forward(Tape& tape, const DenseMatrix& features);

    // Eval-mode forward without a tape (no dropout).
    DenseMatrix forward_values(const DenseMatrix& features) const;

    // Softmaxed attention per conv layer, shape (p * slots) x K; empty for
    // families without attention.
    std::vector<DenseMatrix> attention() const;

private:
    friend Model build_model(const ModelSpec&, PreparedOperators);
    ConvLayer make_conv_layer(const std::string& prefix, std::size_t q_in, std::size_t q_out,
                              std::mt19937_64& rng) const;
    int conv_forward(Tape& tape, ConvLayer& layer, int input);
    DenseMatrix conv_values(const ConvLayer& layer, const DenseMatrix& input) const;

    ModelSpec spec_;
    PreparedOperators ops_;
    ConvLayer conv1_, conv2_;
    Param dense_w_, dense_b_;
    // mutable registration bookkeeping lives in the tape, not here
};

Model build_model(const ModelSpec& spec, PreparedOperators ops);

// Exact trainable-scalar count from the closed forms; no operators needed.
std::size_t count_parameters(const ModelSpec& spec);
std::size_t conv_parameter_count(const ModelSpec& spec, std::size_t q_in, std::size_t q_out);

}  // namespace motifgcn
