#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "idenet/kernels.hpp"

namespace idenet::nn {

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    int64_t step = 0;
};

// Elementwise gradient clipping to [-clip, clip] followed by an Adam update
// with bias correction and decoupled L2 weight decay. clip <= 0 disables
// clipping.
inline void adam_step(std::vector<double>& params, std::vector<double> grads, AdamState& state,
                      double lr, double weight_decay, double clip, double beta1 = 0.9,
                      double beta2 = 0.999, double eps = 1e-8) {
    if (state.m.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    if (clip > 0.0) kernels::clip(grads.data(), grads.size(), clip);
    ++state.step;
    const double bias1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    kernels::adam_update(params.data(), grads.data(), state.m.data(), state.v.data(),
                         params.size(), lr, beta1, beta2, eps, weight_decay, bias1, bias2);
}

}  // namespace idenet::nn
