#include "ufafuse/tensor.hpp"

#include <unordered_set>
#include <utility>

namespace ufafuse {

std::string to_string(const Shape& s) {
    return "(" + std::to_string(s.n) + "," + std::to_string(s.c) + "," + std::to_string(s.h) +
           "," + std::to_string(s.w) + ")";
}

template <class S>
TensorT<S> TensorT<S>::zeros(Shape s, bool requires_grad) {
    return full(s, S(0), requires_grad);
}

template <class S>
TensorT<S> TensorT<S>::full(Shape s, S v, bool requires_grad) {
    if (!s.valid()) throw ShapeError("tensor: invalid shape " + to_string(s));
    auto n = std::make_shared<detail::Node<S>>();
    n->shape = s;
    n->value.assign(static_cast<size_t>(s.count()), v);
    n->requires_grad = requires_grad;
    return TensorT(std::move(n));
}

template <class S>
TensorT<S> TensorT<S>::from_data(Shape s, std::vector<S> data, bool requires_grad) {
    if (!s.valid()) throw ShapeError("tensor: invalid shape " + to_string(s));
    if (static_cast<long long>(data.size()) != s.count())
        throw ShapeError("tensor: data size " + std::to_string(data.size()) +
                         " does not match shape " + to_string(s));
    auto n = std::make_shared<detail::Node<S>>();
    n->shape = s;
    n->value = std::move(data);
    n->requires_grad = requires_grad;
    return TensorT(std::move(n));
}

template <class S>
std::span<const S> TensorT<S>::grad() const {
    auto* n = checked();
    if (n->grad.empty())
        throw ValueError("tensor: grad accessed before a backward pass populated it");
    return n->grad;
}

template <class S>
void TensorT<S>::zero_grad() {
    auto* n = checked();
    std::fill(n->grad.begin(), n->grad.end(), S(0));
}

template <class S>
S TensorT<S>::scalar() const {
    auto* n = checked();
    if (n->shape.count() != 1)
        throw ShapeError("tensor: scalar() on non-scalar shape " + to_string(n->shape));
    return n->value[0];
}

template <class S>
void backward(const TensorT<S>& loss) {
    auto root = loss.node();
    if (!root) throw ValueError("backward: undefined tensor");
    if (root->shape.count() != 1)
        throw ValueError("backward: loss must be scalar, got shape " + to_string(root->shape));
    if (!root->requires_grad)
        throw ValueError("backward: loss is not connected to any requires_grad tensor");

    // Postorder DFS: parents appear before their consumers.
    std::vector<detail::Node<S>*> order;
    std::unordered_set<detail::Node<S>*> seen{root.get()};
    std::vector<std::pair<detail::Node<S>*, size_t>> stack{{root.get(), 0}};
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            auto* p = node->parents[next++].get();
            if (seen.insert(p).second) stack.emplace_back(p, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    // Interior grads are scratch for this pass; leaf grads persist so that
    // repeated backward calls accumulate until the caller zeroes them.
    for (auto* node : order) {
        if (!node->requires_grad) continue;
        const auto count = static_cast<size_t>(node->shape.count());
        if (!node->is_leaf())
            node->grad.assign(count, S(0));
        else if (node->grad.empty())
            node->grad.assign(count, S(0));
    }

    root->grad[0] += S(1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto* node = *it;
        if (node->requires_grad && node->backward) node->backward(*node);
    }
}

template class TensorT<float>;
template class TensorT<double>;
template void backward(const TensorT<float>&);
template void backward(const TensorT<double>&);

}  // namespace ufafuse
