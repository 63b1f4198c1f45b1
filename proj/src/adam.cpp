#include "ufafuse/adam.hpp"

#include <cmath>

namespace ufafuse {

template <class S>
void adam_step(std::vector<TensorT<S>>& params, AdamStateT<S>& state, S lr, S beta1, S beta2,
               S eps) {
    if (state.slots.empty()) {
        state.slots.resize(params.size());
        for (size_t i = 0; i < params.size(); ++i) {
            state.slots[i].m.assign(static_cast<size_t>(params[i].count()), S(0));
            state.slots[i].v.assign(static_cast<size_t>(params[i].count()), S(0));
        }
    }
    if (state.slots.size() != params.size())
        throw ShapeError("adam_step: state has " + std::to_string(state.slots.size()) +
                         " slots for " + std::to_string(params.size()) + " parameters");

    state.step += 1;
    const S corr1 = S(1) - std::pow(beta1, static_cast<S>(state.step));
    const S corr2 = S(1) - std::pow(beta2, static_cast<S>(state.step));

    for (size_t i = 0; i < params.size(); ++i) {
        auto& p = params[i];
        auto& slot = state.slots[i];
        const auto g = p.grad();
        auto v = p.values();
        if (slot.m.size() != g.size() || slot.v.size() != g.size() || v.size() != g.size())
            throw ShapeError("adam_step: parameter " + std::to_string(i) +
                             " has mismatched param/grad/state sizes");
        for (size_t j = 0; j < g.size(); ++j) {
            slot.m[j] = beta1 * slot.m[j] + (S(1) - beta1) * g[j];
            slot.v[j] = beta2 * slot.v[j] + (S(1) - beta2) * g[j] * g[j];
            const S m_hat = slot.m[j] / corr1;
            const S v_hat = slot.v[j] / corr2;
            v[j] -= lr * m_hat / (std::sqrt(v_hat) + eps);
        }
    }
}

template void adam_step(std::vector<TensorT<float>>&, AdamStateT<float>&, float, float, float,
                        float);
template void adam_step(std::vector<TensorT<double>>&, AdamStateT<double>&, double, double, double,
                        double);

}  // namespace ufafuse
