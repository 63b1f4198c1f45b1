#pragma once

#include <vector>

#include "ufafuse/tensor.hpp"

namespace ufafuse {

// Per-parameter first/second moment buffers plus the shared step counter.
// Slots are created lazily on the first step and then locked to their size.
template <class S>
struct AdamStateT {
    struct Moments {
        std::vector<S> m;
        std::vector<S> v;
    };
    std::vector<Moments> slots;
    long step = 0;
};

using AdamState = AdamStateT<float>;

// Standard bias-corrected Adam update. Reads each parameter's grad buffer
// (which must be populated) and mutates the parameter values in place.
template <class S>
void adam_step(std::vector<TensorT<S>>& params, AdamStateT<S>& state, S lr, S beta1 = S(0.9),
               S beta2 = S(0.999), S eps = S(1e-8));

}  // namespace ufafuse
