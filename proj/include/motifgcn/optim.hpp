#pragma once

#include <string>
#include <vector>

#include "motifgcn/dense.hpp"

namespace motifgcn {

// A named trainable tensor with its gradient and Adam state.
struct Param {
    std::string name;
    DenseMatrix value;
    DenseMatrix grad;
    DenseMatrix m, v;  // first/second moment estimates
    long step = 0;
    bool weight_decay = true;

    Param() = default;
    Param(std::string n, DenseMatrix val, bool decay = true)
        : name(std::move(n)),
          value(std::move(val)),
          grad(value.rows(), value.cols()),
          m(value.rows(), value.cols()),
          v(value.rows(), value.cols()),
          weight_decay(decay) {}
};

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;  // gamma; applies only to flagged params
    bool decoupled = false;     // false: classic L2 added to the gradient
};

void adam_step(const std::vector<Param*>& params, const AdamConfig& cfg);

}  // namespace motifgcn
