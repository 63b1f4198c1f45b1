#pragma once

#include <cassert>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ufafuse/errors.hpp"

namespace ufafuse {

// Dense rank-4 layout (batch, channels, height, width), row-major.
struct Shape {
    int n = 0;
    int c = 0;
    int h = 0;
    int w = 0;

    long long count() const { return 1LL * n * c * h * w; }
    bool valid() const { return n >= 1 && c >= 1 && h >= 1 && w >= 1; }
    long long index(int in, int ic, int iy, int ix) const {
        return ((1LL * in * c + ic) * h + iy) * w + ix;
    }
    bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& s);

namespace detail {

// One vertex of the computation graph. Interior vertices keep a backward
// closure that scatters this vertex's grad into its parents' grads.
template <class S>
struct Node {
    Shape shape;
    std::vector<S> value;
    std::vector<S> grad;  // allocated only when a backward pass needs it
    bool requires_grad = false;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backward;

    bool is_leaf() const { return !backward; }
};

}  // namespace detail

// Value-semantic handle to a shared graph node. Cheap to copy; copies alias
// the same storage. A node's value is immutable once its producing op has
// written it (leaves created from user data may be mutated, e.g. by Adam).
template <class S>
class TensorT {
  public:
    TensorT() = default;
    explicit TensorT(std::shared_ptr<detail::Node<S>> node) : node_(std::move(node)) {}

    static TensorT zeros(Shape s, bool requires_grad = false);
    static TensorT full(Shape s, S v, bool requires_grad = false);
    static TensorT from_data(Shape s, std::vector<S> data, bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const Shape& shape() const { return checked()->shape; }
    long long count() const { return checked()->shape.count(); }
    bool requires_grad() const { return checked()->requires_grad; }

    std::span<S> values() { return checked()->value; }
    std::span<const S> values() const { return checked()->value; }

    bool has_grad() const { return defined() && !node_->grad.empty(); }
    std::span<const S> grad() const;
    void zero_grad();

    S at(int n, int c, int y, int x) const {
        return checked()->value[shape().index(n, c, y, x)];
    }
    S scalar() const;

    std::shared_ptr<detail::Node<S>> node() const { return node_; }

  private:
    detail::Node<S>* checked() const {
        if (!node_) throw ValueError("tensor: use of an undefined tensor");
        return node_.get();
    }

    std::shared_ptr<detail::Node<S>> node_;
};

// Reverse-mode sweep from a scalar loss. Grad buffers of interior nodes are
// rebuilt per call; leaf grads accumulate across calls until zero_grad().
template <class S>
void backward(const TensorT<S>& loss);

using Tensor = TensorT<float>;
using Tensor64 = TensorT<double>;

}  // namespace ufafuse
