#pragma once

#include <cstdint>
#include <vector>

namespace prlab {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row = receiving neuron, last column = bias

/// A three-layer feed-forward net: sigmoid hidden layer, linear output.
struct NetworkParams {
    std::vector<int> layer_sizes;  // {input, hidden, output}
    std::vector<Mat> weights;      // weights[l]: layer_sizes[l+1] x (layer_sizes[l] + 1)
};

struct LayerActivations {
    std::vector<Vec> per_layer;  // input, hidden, output
    const Vec& output() const { return per_layer.back(); }
};

struct BatchItem {
    Vec input;
    Vec target;
};

/// Weights drawn uniformly from [-0.5, 0.5]; deterministic per seed.
NetworkParams init_network(const std::vector<int>& layer_sizes, std::uint32_t seed);

LayerActivations forward(const NetworkParams& net, const Vec& input);

/// Per-layer dL/d(pre-activation) for L = 0.5 * ||output - target||^2.
/// Entry l corresponds to weight layer l (0 = input->hidden, 1 = hidden->output).
std::vector<Vec> backprop_errors(const NetworkParams& net,
                                 const LayerActivations& acts,
                                 const Vec& target);

/// Full dL/dw, same shape as net.weights.
std::vector<Mat> loss_gradient(const NetworkParams& net, const Vec& input, const Vec& target);

/// One online gradient step toward `target`.
NetworkParams backprop(NetworkParams net, const Vec& input, const Vec& target,
                       double learning_rate);

/// Up to `max_iterations` full-batch gradient steps on the mean of the
/// per-item losses. Stops early below 1e-8 mean loss. If a step would
/// increase the loss the internal step size is halved until it does not.
NetworkParams batch_backprop(NetworkParams net, const std::vector<BatchItem>& items,
                             double learning_rate, int max_iterations);

/// weights[layer_index] += delta, element-wise.
NetworkParams apply_delta(NetworkParams net, int layer_index, const Mat& delta);

double mean_loss(const NetworkParams& net, const std::vector<BatchItem>& items);

double max_abs_weight(const NetworkParams& net);

}  // namespace prlab
