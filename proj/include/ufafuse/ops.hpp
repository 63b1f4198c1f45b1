#pragma once

#include <span>
#include <vector>

#include "ufafuse/tensor.hpp"

namespace ufafuse {

// Learned convolution parameters: kernel (out, in, k, k) plus one bias per
// output channel, stored as (1, out, 1, 1). Only square kernels of size
// 1, 3 or 7 are accepted.
template <class S>
struct ConvWeightsT {
    TensorT<S> kernel;
    TensorT<S> bias;

    ConvWeightsT() = default;
    ConvWeightsT(TensorT<S> kernel_, TensorT<S> bias_) : kernel(std::move(kernel_)), bias(std::move(bias_)) {
        const Shape ks = kernel.shape();
        if (ks.h != ks.w || (ks.h != 1 && ks.h != 3 && ks.h != 7))
            throw ValueError("conv weights: kernel must be square with size 1, 3 or 7, got " +
                             to_string(ks));
        const Shape bs = bias.shape();
        if (bs != Shape{1, ks.n, 1, 1})
            throw ShapeError("conv weights: bias shape " + to_string(bs) +
                             " does not match " + std::to_string(ks.n) + " output channels");
    }

    int out_channels() const { return kernel.shape().n; }
    int in_channels() const { return kernel.shape().c; }
    int kernel_size() const { return kernel.shape().h; }
};

using ConvWeights = ConvWeightsT<float>;

enum class ChannelPoolMode { kAvg, kMax };
enum class BinaryOp { kMul, kAdd, kSub, kDiv };

// Cross-correlation (no kernel flip), stride 1, zero padding.
template <class S>
TensorT<S> conv2d(const TensorT<S>& input, const ConvWeightsT<S>& w, int padding);

template <class S>
TensorT<S> leaky_relu(const TensorT<S>& x, S slope);

template <class S>
TensorT<S> sigmoid(const TensorT<S>& x);

template <class S>
TensorT<S> exp(const TensorT<S>& x);

template <class S>
TensorT<S> abs(const TensorT<S>& x);

// (N,C,H,W) -> (N,C,1,1), mean over the spatial plane.
template <class S>
TensorT<S> global_avg_pool(const TensorT<S>& x);

// (N,C,H,W) -> (N,1,H,W), mean or max across channels. Max routes its
// gradient to the lowest-index channel among ties.
template <class S>
TensorT<S> channel_pool(const TensorT<S>& x, ChannelPoolMode mode);

// Position-wise softmax across a set of K >= 2 same-shape tensors,
// stabilized by subtracting the position-wise max over the set.
template <class S>
std::vector<TensorT<S>> softmax_over_set(const std::vector<TensorT<S>>& xs);

template <class S>
TensorT<S> concat_channels(const std::vector<TensorT<S>>& xs);

// Elementwise arithmetic. Shapes must match, or one operand may broadcast
// as (N,C,1,1) or (N,1,H,W) against the other's (N,C,H,W).
template <class S>
TensorT<S> elementwise(const TensorT<S>& a, const TensorT<S>& b, BinaryOp op);

// y = mul * x + add, scalar coefficients.
template <class S>
TensorT<S> scale_add(const TensorT<S>& x, S mul, S add);

// Mean over every element -> (1,1,1,1).
template <class S>
TensorT<S> mean_all(const TensorT<S>& x);

// Applies one fixed k*k kernel to every channel independently, valid
// placement only (output is (N,C,H-k+1,W-k+1)). The kernel is a constant,
// not a learned parameter.
template <class S>
TensorT<S> depthwise_filter(const TensorT<S>& x, int k, std::span<const S> kernel);

namespace testhook {
// Selfcheck mutation hook: skews the conv weight-gradient so the gradient
// checker must report a failure. Never set outside selfcheck tests.
inline bool perturb_conv_backward = false;
}  // namespace testhook

}  // namespace ufafuse
