#include "motifgcn/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace motifgcn {

void adam_step(const std::vector<Param*>& params, const AdamConfig& cfg) {
    for (Param* p : params) {
        if (!p->grad.same_shape(p->value))
            throw std::invalid_argument("adam_step: gradient shape mismatch for " + p->name);
        p->step += 1;
        const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(p->step));
        const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(p->step));
        const bool decay = p->weight_decay && cfg.weight_decay != 0.0;
        for (std::size_t i = 0; i < p->value.size(); ++i) {
            double g = p->grad.values()[i];
            if (decay && !cfg.decoupled) g += cfg.weight_decay * p->value.values()[i];
            double& m = p->m.values()[i];
            double& v = p->v.values()[i];
            m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
            v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
            const double mhat = m / bc1;
            const double vhat = v / bc2;
            double update = cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
            if (decay && cfg.decoupled) update += cfg.lr * cfg.weight_decay * p->value.values()[i];
            p->value.values()[i] -= update;
        }
    }
}

}  // namespace motifgcn
