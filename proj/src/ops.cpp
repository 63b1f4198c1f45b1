#include "ufafuse/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <utility>

#include "gemm.hpp"

namespace ufafuse {

namespace {

template <class S>
using NodePtr = std::shared_ptr<detail::Node<S>>;

template <class S>
NodePtr<S> make_result(Shape s, std::vector<NodePtr<S>> parents) {
    auto n = std::make_shared<detail::Node<S>>();
    n->shape = s;
    n->value.resize(static_cast<size_t>(s.count()));
    n->parents = std::move(parents);
    for (const auto& p : n->parents)
        if (p->requires_grad) n->requires_grad = true;
    return n;
}

// col is (C*k*k) x (oh*ow); row (c*k + r)*k + s holds the input samples that
// kernel tap (r,s) of channel c sees at every output position.
template <class S>
void im2col(const S* x, int c_in, int h, int w, int k, int pad, int oh, int ow, S* col) {
    const long long plane = 1LL * oh * ow;
    for (int c = 0; c < c_in; ++c) {
        const S* xc = x + (1LL * c * h) * w;
        for (int r = 0; r < k; ++r) {
            for (int s = 0; s < k; ++s) {
                S* dst = col + ((1LL * c * k + r) * k + s) * plane;
                const int lo = std::max(0, pad - s);
                const int hi = std::min(ow, w + pad - s);
                for (int oy = 0; oy < oh; ++oy) {
                    S* row = dst + 1LL * oy * ow;
                    const int iy = oy + r - pad;
                    if (iy < 0 || iy >= h || lo >= hi) {
                        std::fill(row, row + ow, S(0));
                        continue;
                    }
                    std::fill(row, row + lo, S(0));
                    std::memcpy(row + lo, xc + 1LL * iy * w + (lo + s - pad),
                                sizeof(S) * static_cast<size_t>(hi - lo));
                    std::fill(row + hi, row + ow, S(0));
                }
            }
        }
    }
}

// Adjoint of im2col: scatter-adds column gradients back into the image.
template <class S>
void col2im_add(const S* col, int c_in, int h, int w, int k, int pad, int oh, int ow, S* dx) {
    const long long plane = 1LL * oh * ow;
    for (int c = 0; c < c_in; ++c) {
        S* dxc = dx + (1LL * c * h) * w;
        for (int r = 0; r < k; ++r) {
            for (int s = 0; s < k; ++s) {
                const S* src = col + ((1LL * c * k + r) * k + s) * plane;
                const int lo = std::max(0, pad - s);
                const int hi = std::min(ow, w + pad - s);
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy + r - pad;
                    if (iy < 0 || iy >= h || lo >= hi) continue;
                    const S* row = src + 1LL * oy * ow;
                    S* out = dxc + 1LL * iy * w + (s - pad);
                    for (int ox = lo; ox < hi; ++ox) out[ox] += row[ox];
                }
            }
        }
    }
}

// Per-operand strides for the limited (N,C,1,1)/(N,1,H,W) broadcasting.
struct Strides {
    long long n, c, y, x;
};

Strides strides_for(const Shape& op, const Shape& out) {
    auto dim = [](int op_d, int out_d, long long natural) -> long long {
        if (op_d == out_d) return natural;
        return 0;  // validated broadcast dim (op_d == 1)
    };
    return {dim(op.n, out.n, 1LL * op.c * op.h * op.w), dim(op.c, out.c, 1LL * op.h * op.w),
            dim(op.h, out.h, op.w), dim(op.w, out.w, 1)};
}

bool broadcasts_over(const Shape& small, const Shape& big) {
    const bool channel_map = small.n == big.n && small.c == big.c && small.h == 1 && small.w == 1;
    const bool spatial_map = small.n == big.n && small.c == 1 && small.h == big.h && small.w == big.w;
    return channel_map || spatial_map;
}

template <class S>
TensorT<S> unary_op(const TensorT<S>& x, std::function<S(S)> fwd,
                    std::function<void(detail::Node<S>&)> bwd) {
    auto out = make_result<S>(x.shape(), {x.node()});
    const auto xv = x.values();
    for (size_t i = 0; i < xv.size(); ++i) out->value[i] = fwd(xv[i]);
    if (out->requires_grad) out->backward = std::move(bwd);
    return TensorT<S>(std::move(out));
}

}  // namespace

template <class S>
TensorT<S> conv2d(const TensorT<S>& input, const ConvWeightsT<S>& w, int padding) {
    const Shape xs = input.shape();
    const Shape ks = w.kernel.shape();
    if (xs.c != ks.c)
        throw ShapeError("conv2d: input has " + std::to_string(xs.c) + " channels, kernel expects " +
                         std::to_string(ks.c));
    if (padding < 0) throw ValueError("conv2d: negative padding");
    const int k = ks.h;
    const int oh = xs.h + 2 * padding - k + 1;
    const int ow = xs.w + 2 * padding - k + 1;
    if (oh < 1 || ow < 1)
        throw ShapeError("conv2d: kernel " + std::to_string(k) + " with padding " +
                         std::to_string(padding) + " exceeds input " + to_string(xs));

    const Shape os{xs.n, ks.n, oh, ow};
    auto out = make_result<S>(os, {input.node(), w.kernel.node(), w.bias.node()});

    const int o_ch = ks.n;
    const int ikk = xs.c * k * k;
    const long long plane = 1LL * oh * ow;
    const long long in_stride = 1LL * xs.c * xs.h * xs.w;
    const long long out_stride = 1LL * o_ch * plane;

    {
        std::vector<S> col(static_cast<size_t>(ikk) * plane);
        const S* xv = input.values().data();
        const S* wv = w.kernel.values().data();
        const S* bv = w.bias.values().data();
        for (int n = 0; n < xs.n; ++n) {
            im2col(xv + n * in_stride, xs.c, xs.h, xs.w, k, padding, oh, ow, col.data());
            S* ov = out->value.data() + n * out_stride;
            detail::gemm(false, false, o_ch, static_cast<int>(plane), ikk, S(1), wv, ikk, col.data(),
                         static_cast<int>(plane), S(0), ov, static_cast<int>(plane));
            for (int o = 0; o < o_ch; ++o) {
                S* row = ov + o * plane;
                const S b = bv[o];
                for (long long p = 0; p < plane; ++p) row[p] += b;
            }
        }
    }

    if (out->requires_grad) {
        const int pad = padding;
        out->backward = [pad](detail::Node<S>& self) {
            auto* x = self.parents[0].get();
            auto* kern = self.parents[1].get();
            auto* bias = self.parents[2].get();
            const Shape& xs2 = x->shape;
            const Shape& os2 = self.shape;
            const int k2 = kern->shape.h;
            const int o_ch2 = os2.c;
            const int ikk2 = xs2.c * k2 * k2;
            const long long plane2 = 1LL * os2.h * os2.w;
            const long long in_str = 1LL * xs2.c * xs2.h * xs2.w;
            const long long out_str = 1LL * o_ch2 * plane2;
            const S* dy = self.grad.data();

            if (bias->requires_grad) {
                for (int n = 0; n < xs2.n; ++n)
                    for (int o = 0; o < o_ch2; ++o) {
                        const S* row = dy + n * out_str + o * plane2;
                        S acc = 0;
                        for (long long p = 0; p < plane2; ++p) acc += row[p];
                        bias->grad[o] += acc;
                    }
            }
            if (kern->requires_grad) {
                std::vector<S> col(static_cast<size_t>(ikk2) * plane2);
                const S* xv = x->value.data();
                for (int n = 0; n < xs2.n; ++n) {
                    im2col(xv + n * in_str, xs2.c, xs2.h, xs2.w, k2, pad, os2.h, os2.w, col.data());
                    detail::gemm(false, true, o_ch2, ikk2, static_cast<int>(plane2), S(1),
                                 dy + n * out_str, static_cast<int>(plane2), col.data(),
                                 static_cast<int>(plane2), S(1), kern->grad.data(), ikk2);
                }
                if (testhook::perturb_conv_backward) kern->grad[0] += S(0.05);
            }
            if (x->requires_grad) {
                std::vector<S> dcol(static_cast<size_t>(ikk2) * plane2);
                const S* wv = kern->value.data();
                for (int n = 0; n < xs2.n; ++n) {
                    detail::gemm(true, false, ikk2, static_cast<int>(plane2), o_ch2, S(1), wv, ikk2,
                                 dy + n * out_str, static_cast<int>(plane2), S(0), dcol.data(),
                                 static_cast<int>(plane2));
                    col2im_add(dcol.data(), xs2.c, xs2.h, xs2.w, k2, pad, os2.h, os2.w,
                               x->grad.data() + n * in_str);
                }
            }
        };
    }
    return TensorT<S>(std::move(out));
}

template <class S>
TensorT<S> leaky_relu(const TensorT<S>& x, S slope) {
    if (!(slope > S(0) && slope < S(1)))
        throw ValueError("leaky_relu: slope must lie in (0,1)");
    return unary_op<S>(
        x, [slope](S v) { return v >= S(0) ? v : slope * v; },
        [slope](detail::Node<S>& self) {
            auto* x2 = self.parents[0].get();
            if (!x2->requires_grad) return;
            const S* xv = x2->value.data();
            const S* dy = self.grad.data();
            S* dx = x2->grad.data();
            // subgradient at 0 takes the positive branch
            for (size_t i = 0; i < self.value.size(); ++i)
                dx[i] += (xv[i] >= S(0) ? S(1) : slope) * dy[i];
        });
}

template <class S>
TensorT<S> sigmoid(const TensorT<S>& x) {
    return unary_op<S>(
        x,
        [](S v) {
            if (v >= S(0)) return S(1) / (S(1) + std::exp(-v));
            const S e = std::exp(v);
            return e / (S(1) + e);
        },
        [](detail::Node<S>& self) {
            auto* x2 = self.parents[0].get();
            if (!x2->requires_grad) return;
            const S* y = self.value.data();
            const S* dy = self.grad.data();
            S* dx = x2->grad.data();
            for (size_t i = 0; i < self.value.size(); ++i) dx[i] += y[i] * (S(1) - y[i]) * dy[i];
        });
}

template <class S>
TensorT<S> exp(const TensorT<S>& x) {
    return unary_op<S>(
        x, [](S v) { return std::exp(v); },
        [](detail::Node<S>& self) {
            auto* x2 = self.parents[0].get();
            if (!x2->requires_grad) return;
            const S* y = self.value.data();
            const S* dy = self.grad.data();
            S* dx = x2->grad.data();
            for (size_t i = 0; i < self.value.size(); ++i) dx[i] += y[i] * dy[i];
        });
}

template <class S>
TensorT<S> abs(const TensorT<S>& x) {
    return unary_op<S>(
        x, [](S v) { return v < S(0) ? -v : v; },
        [](detail::Node<S>& self) {
            auto* x2 = self.parents[0].get();
            if (!x2->requires_grad) return;
            const S* xv = x2->value.data();
            const S* dy = self.grad.data();
            S* dx = x2->grad.data();
            for (size_t i = 0; i < self.value.size(); ++i) {
                if (xv[i] > S(0))
                    dx[i] += dy[i];
                else if (xv[i] < S(0))
                    dx[i] -= dy[i];
            }
        });
}

template <class S>
TensorT<S> global_avg_pool(const TensorT<S>& x) {
    const Shape xs = x.shape();
    auto out = make_result<S>(Shape{xs.n, xs.c, 1, 1}, {x.node()});
    const long long plane = 1LL * xs.h * xs.w;
    const S inv = S(1) / static_cast<S>(plane);
    const S* xv = x.values().data();
    for (int n = 0; n < xs.n; ++n)
        for (int c = 0; c < xs.c; ++c) {
            const S* p = xv + (1LL * n * xs.c + c) * plane;
            S acc = 0;
            for (long long i = 0; i < plane; ++i) acc += p[i];
            out->value[1LL * n * xs.c + c] = acc * inv;
        }
    if (out->requires_grad) {
        out->backward = [inv, plane](detail::Node<S>& self) {
            auto* x2 = self.parents[0].get();
            if (!x2->requires_grad) return;
            const S* dy = self.grad.data();
            for (size_t i = 0; i < self.value.size(); ++i) {
                S* dst = x2->grad.data() + static_cast<long long>(i) * plane;
                const S g = dy[i] * inv;
                for (long long p = 0; p < plane; ++p) dst[p] += g;
            }
        };
    }
    return TensorT<S>(std::move(out));
}

template <class S>
TensorT<S> channel_pool(const TensorT<S>& x, ChannelPoolMode mode) {
    const Shape xs = x.shape();
    auto out = make_result<S>(Shape{xs.n, 1, xs.h, xs.w}, {x.node()});
    const long long plane = 1LL * xs.h * xs.w;
    const S* xv = x.values().data();

    if (mode == ChannelPoolMode::kAvg) {
        const S inv = S(1) / static_cast<S>(xs.c);
        for (int n = 0; n < xs.n; ++n)
            for (long long p = 0; p < plane; ++p) {
                S acc = 0;
                for (int c = 0; c < xs.c; ++c) acc += xv[(1LL * n * xs.c + c) * plane + p];
                out->value[n * plane + p] = acc * inv;
            }
        if (out->requires_grad) {
            const int channels = xs.c;
            out->backward = [inv, plane, channels](detail::Node<S>& self) {
                auto* x2 = self.parents[0].get();
                if (!x2->requires_grad) return;
                const S* dy = self.grad.data();
                for (int n = 0; n < self.shape.n; ++n)
                    for (long long p = 0; p < plane; ++p) {
                        const S g = dy[n * plane + p] * inv;
                        for (int c = 0; c < channels; ++c)
                            x2->grad[(1LL * n * channels + c) * plane + p] += g;
                    }
            };
        }
        return TensorT<S>(std::move(out));
    }

    // max: ties resolve to the lowest channel index
    std::vector<int> argmax(static_cast<size_t>(xs.n) * plane);
    for (int n = 0; n < xs.n; ++n)
        for (long long p = 0; p < plane; ++p) {
            S best = xv[(1LL * n * xs.c) * plane + p];
            int best_c = 0;
            for (int c = 1; c < xs.c; ++c) {
                const S v = xv[(1LL * n * xs.c + c) * plane + p];
                if (v > best) {
                    best = v;
                    best_c = c;
                }
            }
            out->value[n * plane + p] = best;
            argmax[n * plane + p] = best_c;
        }
    if (out->requires_grad) {
        const int channels = xs.c;
        out->backward = [plane, channels, argmax = std::move(argmax)](detail::Node<S>& self) {
            auto* x2 = self.parents[0].get();
            if (!x2->requires_grad) return;
            const S* dy = self.grad.data();
            for (int n = 0; n < self.shape.n; ++n)
                for (long long p = 0; p < plane; ++p) {
                    const int c = argmax[n * plane + p];
                    x2->grad[(1LL * n * channels + c) * plane + p] += dy[n * plane + p];
                }
        };
    }
    return TensorT<S>(std::move(out));
}

template <class S>
std::vector<TensorT<S>> softmax_over_set(const std::vector<TensorT<S>>& xs) {
    if (xs.size() < 2) throw ValueError("softmax_over_set: needs at least two tensors");
    const Shape s = xs[0].shape();
    for (const auto& x : xs)
        if (x.shape() != s)
            throw ShapeError("softmax_over_set: mismatched shapes " + to_string(s) + " vs " +
                             to_string(x.shape()));

    // Stabilizing shift: the position-wise max over the set, treated as a
    // constant (softmax is shift-invariant, so its true gradient is zero).
    std::vector<S> mx(xs[0].values().begin(), xs[0].values().end());
    for (size_t k = 1; k < xs.size(); ++k) {
        const auto v = xs[k].values();
        for (size_t i = 0; i < mx.size(); ++i) mx[i] = std::max(mx[i], v[i]);
    }
    const TensorT<S> shift = TensorT<S>::from_data(s, std::move(mx), false);

    std::vector<TensorT<S>> exps;
    exps.reserve(xs.size());
    for (const auto& x : xs) exps.push_back(ufafuse::exp(elementwise(x, shift, BinaryOp::kSub)));

    TensorT<S> sum = exps[0];
    for (size_t k = 1; k < exps.size(); ++k) sum = elementwise(sum, exps[k], BinaryOp::kAdd);

    std::vector<TensorT<S>> out;
    out.reserve(xs.size());
    for (const auto& e : exps) out.push_back(elementwise(e, sum, BinaryOp::kDiv));
    return out;
}

template <class S>
TensorT<S> concat_channels(const std::vector<TensorT<S>>& xs) {
    if (xs.empty()) throw ValueError("concat_channels: empty input list");
    const Shape first = xs[0].shape();
    int total_c = 0;
    std::vector<NodePtr<S>> parents;
    parents.reserve(xs.size());
    for (const auto& x : xs) {
        const Shape s = x.shape();
        if (s.n != first.n || s.h != first.h || s.w != first.w)
            throw ShapeError("concat_channels: mismatched shapes " + to_string(first) + " vs " +
                             to_string(s));
        total_c += s.c;
        parents.push_back(x.node());
    }

    auto out = make_result<S>(Shape{first.n, total_c, first.h, first.w}, std::move(parents));
    const long long plane = 1LL * first.h * first.w;
    long long c_off = 0;
    for (const auto& x : xs) {
        const Shape s = x.shape();
        const S* xv = x.values().data();
        for (int n = 0; n < s.n; ++n)
            std::memcpy(out->value.data() + (1LL * n * total_c + c_off) * plane,
                        xv + (1LL * n * s.c) * plane,
                        sizeof(S) * static_cast<size_t>(s.c * plane));
        c_off += s.c;
    }

    if (out->requires_grad) {
        out->backward = [plane, total_c](detail::Node<S>& self) {
            long long off = 0;
            for (const auto& parent : self.parents) {
                const int pc = parent->shape.c;
                if (parent->requires_grad) {
                    for (int n = 0; n < self.shape.n; ++n) {
                        const S* src = self.grad.data() + (1LL * n * total_c + off) * plane;
                        S* dst = parent->grad.data() + (1LL * n * pc) * plane;
                        for (long long i = 0; i < pc * plane; ++i) dst[i] += src[i];
                    }
                }
                off += pc;
            }
        };
    }
    return TensorT<S>(std::move(out));
}

template <class S>
TensorT<S> elementwise(const TensorT<S>& a, const TensorT<S>& b, BinaryOp op) {
    const Shape as = a.shape();
    const Shape bs = b.shape();
    Shape os;
    if (as == bs)
        os = as;
    else if (broadcasts_over(bs, as))
        os = as;
    else if (broadcasts_over(as, bs))
        os = bs;
    else
        throw ShapeError("elementwise: shapes " + to_string(as) + " and " + to_string(bs) +
                         " neither match nor broadcast");

    auto out = make_result<S>(os, {a.node(), b.node()});
    const Strides sa = strides_for(as, os);
    const Strides sb = strides_for(bs, os);
    const S* av = a.values().data();
    const S* bv = b.values().data();

    {
        long long i = 0;
        for (int n = 0; n < os.n; ++n)
            for (int c = 0; c < os.c; ++c)
                for (int y = 0; y < os.h; ++y) {
                    const long long base_a = sa.n * n + sa.c * c + sa.y * y;
                    const long long base_b = sb.n * n + sb.c * c + sb.y * y;
                    for (int x = 0; x < os.w; ++x, ++i) {
                        const S va = av[base_a + sa.x * x];
                        const S vb = bv[base_b + sb.x * x];
                        switch (op) {
                            case BinaryOp::kMul: out->value[i] = va * vb; break;
                            case BinaryOp::kAdd: out->value[i] = va + vb; break;
                            case BinaryOp::kSub: out->value[i] = va - vb; break;
                            case BinaryOp::kDiv: out->value[i] = va / vb; break;
                        }
                    }
                }
    }

    if (out->requires_grad) {
        out->backward = [op, sa, sb](detail::Node<S>& self) {
            auto* an = self.parents[0].get();
            auto* bn = self.parents[1].get();
            const S* av2 = an->value.data();
            const S* bv2 = bn->value.data();
            S* ga = an->requires_grad ? an->grad.data() : nullptr;
            S* gb = bn->requires_grad ? bn->grad.data() : nullptr;
            const S* dy = self.grad.data();
            const Shape& os2 = self.shape;
            long long i = 0;
            for (int n = 0; n < os2.n; ++n)
                for (int c = 0; c < os2.c; ++c)
                    for (int y = 0; y < os2.h; ++y) {
                        const long long base_a = sa.n * n + sa.c * c + sa.y * y;
                        const long long base_b = sb.n * n + sb.c * c + sb.y * y;
                        for (int x = 0; x < os2.w; ++x, ++i) {
                            const long long ia = base_a + sa.x * x;
                            const long long ib = base_b + sb.x * x;
                            const S g = dy[i];
                            switch (op) {
                                case BinaryOp::kMul:
                                    if (ga) ga[ia] += bv2[ib] * g;
                                    if (gb) gb[ib] += av2[ia] * g;
                                    break;
                                case BinaryOp::kAdd:
                                    if (ga) ga[ia] += g;
                                    if (gb) gb[ib] += g;
                                    break;
                                case BinaryOp::kSub:
                                    if (ga) ga[ia] += g;
                                    if (gb) gb[ib] -= g;
                                    break;
                                case BinaryOp::kDiv:
                                    if (ga) ga[ia] += g / bv2[ib];
                                    if (gb) gb[ib] -= g * av2[ia] / (bv2[ib] * bv2[ib]);
                                    break;
                            }
                        }
                    }
        };
    }
    return TensorT<S>(std::move(out));
}

template <class S>
TensorT<S> scale_add(const TensorT<S>& x, S mul, S add) {
    return unary_op<S>(
        x, [mul, add](S v) { return mul * v + add; },
        [mul](detail::Node<S>& self) {
            auto* x2 = self.parents[0].get();
            if (!x2->requires_grad) return;
            const S* dy = self.grad.data();
            S* dx = x2->grad.data();
            for (size_t i = 0; i < self.value.size(); ++i) dx[i] += mul * dy[i];
        });
}

template <class S>
TensorT<S> mean_all(const TensorT<S>& x) {
    auto out = make_result<S>(Shape{1, 1, 1, 1}, {x.node()});
    const auto xv = x.values();
    S acc = 0;
    for (const S v : xv) acc += v;
    const S inv = S(1) / static_cast<S>(xv.size());
    out->value[0] = acc * inv;
    if (out->requires_grad) {
        out->backward = [inv](detail::Node<S>& self) {
            auto* x2 = self.parents[0].get();
            if (!x2->requires_grad) return;
            const S g = self.grad[0] * inv;
            for (auto& d : x2->grad) d += g;
        };
    }
    return TensorT<S>(std::move(out));
}

template <class S>
TensorT<S> depthwise_filter(const TensorT<S>& x, int k, std::span<const S> kernel) {
    const Shape xs = x.shape();
    if (k < 1 || static_cast<size_t>(k) * k != kernel.size())
        throw ValueError("depthwise_filter: kernel size mismatch");
    if (k > xs.h || k > xs.w)
        throw ShapeError("depthwise_filter: " + std::to_string(k) + "x" + std::to_string(k) +
                         " window larger than image " + to_string(xs));
    const int oh = xs.h - k + 1;
    const int ow = xs.w - k + 1;
    auto out = make_result<S>(Shape{xs.n, xs.c, oh, ow}, {x.node()});

    const S* xv = x.values().data();
    const long long planes = 1LL * xs.n * xs.c;
    for (long long pc = 0; pc < planes; ++pc) {
        const S* src = xv + pc * xs.h * xs.w;
        S* dst = out->value.data() + pc * oh * ow;
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                S acc = 0;
                for (int r = 0; r < k; ++r) {
                    const S* row = src + 1LL * (oy + r) * xs.w + ox;
                    const S* kr = kernel.data() + 1LL * r * k;
                    for (int s = 0; s < k; ++s) acc += kr[s] * row[s];
                }
                dst[1LL * oy * ow + ox] = acc;
            }
    }

    if (out->requires_grad) {
        std::vector<S> kern(kernel.begin(), kernel.end());
        out->backward = [k, kern = std::move(kern)](detail::Node<S>& self) {
            auto* x2 = self.parents[0].get();
            if (!x2->requires_grad) return;
            const Shape& xs2 = x2->shape;
            const int oh2 = self.shape.h;
            const int ow2 = self.shape.w;
            const long long planes2 = 1LL * xs2.n * xs2.c;
            const S* dy = self.grad.data();
            for (long long pc = 0; pc < planes2; ++pc) {
                const S* g = dy + pc * oh2 * ow2;
                S* dst = x2->grad.data() + pc * xs2.h * xs2.w;
                for (int oy = 0; oy < oh2; ++oy)
                    for (int ox = 0; ox < ow2; ++ox) {
                        const S gv = g[1LL * oy * ow2 + ox];
                        for (int r = 0; r < k; ++r) {
                            S* row = dst + 1LL * (oy + r) * xs2.w + ox;
                            const S* kr = kern.data() + 1LL * r * k;
                            for (int s = 0; s < k; ++s) row[s] += kr[s] * gv;
                        }
                    }
            }
        };
    }
    return TensorT<S>(std::move(out));
}

#define UFAFUSE_INSTANTIATE_OPS(S)                                                              \
    template TensorT<S> conv2d(const TensorT<S>&, const ConvWeightsT<S>&, int);                 \
    template TensorT<S> leaky_relu(const TensorT<S>&, S);                                       \
    template TensorT<S> sigmoid(const TensorT<S>&);                                             \
    template TensorT<S> exp(const TensorT<S>&);                                                 \
    template TensorT<S> abs(const TensorT<S>&);                                                 \
    template TensorT<S> global_avg_pool(const TensorT<S>&);                                     \
    template TensorT<S> channel_pool(const TensorT<S>&, ChannelPoolMode);                       \
    template std::vector<TensorT<S>> softmax_over_set(const std::vector<TensorT<S>>&);          \
    template TensorT<S> concat_channels(const std::vector<TensorT<S>>&);                        \
    template TensorT<S> elementwise(const TensorT<S>&, const TensorT<S>&, BinaryOp);            \
    template TensorT<S> scale_add(const TensorT<S>&, S, S);                                     \
    template TensorT<S> mean_all(const TensorT<S>&);                                            \
    template TensorT<S> depthwise_filter(const TensorT<S>&, int, std::span<const S>);

UFAFUSE_INSTANTIATE_OPS(float)
UFAFUSE_INSTANTIATE_OPS(double)

#undef UFAFUSE_INSTANTIATE_OPS

}  // namespace ufafuse
