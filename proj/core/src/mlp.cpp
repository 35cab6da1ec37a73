#include "prlab/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "prlab/rng.hpp"

namespace prlab {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_finite(const Vec& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + " contains a non-finite value");
        }
    }
}

void check_input(const NetworkParams& net, const Vec& input) {
    if (static_cast<int>(input.size()) != net.layer_sizes[0]) {
        throw std::invalid_argument("input length does not match network input width");
    }
    check_finite(input, "input");
}

void check_target(const NetworkParams& net, const Vec& target) {
    if (static_cast<int>(target.size()) != net.layer_sizes[2]) {
        throw std::invalid_argument("target length does not match network output width");
    }
    check_finite(target, "target");
}

// pre-activation of every neuron in one layer; the bias weight sees input 1.
Vec affine(const Mat& w, const Vec& in) {
    Vec out(w.size());
    const std::size_t n = in.size();
    for (std::size_t r = 0; r < w.size(); ++r) {
        const Vec& row = w[r];
        double acc = row[n];  // bias
        for (std::size_t c = 0; c < n; ++c) acc += row[c] * in[c];
        out[r] = acc;
    }
    return out;
}

struct GradLoss {
    std::vector<Mat> grad;
    double loss = 0.0;
};

// Mean gradient and mean loss over a batch in a single pass.
GradLoss batch_grad_and_loss(const NetworkParams& net, const std::vector<BatchItem>& items) {
    GradLoss gl;
    gl.grad.resize(net.weights.size());
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        gl.grad[l].assign(net.weights[l].size(), Vec(net.weights[l][0].size(), 0.0));
    }
    for (const BatchItem& item : items) {
        const LayerActivations acts = forward(net, item.input);
        const Vec& out = acts.output();
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double d = out[j] - item.target[j];
            gl.loss += 0.5 * d * d;
        }
        const std::vector<Vec> errs = backprop_errors(net, acts, item.target);
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            const Vec& in = acts.per_layer[l];
            for (std::size_t r = 0; r < errs[l].size(); ++r) {
                Vec& grow = gl.grad[l][r];
                const double e = errs[l][r];
                for (std::size_t c = 0; c < in.size(); ++c) grow[c] += e * in[c];
                grow[in.size()] += e;
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(items.size());
    gl.loss *= inv;
    for (Mat& m : gl.grad)
        for (Vec& row : m)
            for (double& v : row) v *= inv;
    return gl;
}

NetworkParams descend(NetworkParams net, const std::vector<Mat>& grad, double rate) {
    for (std::size_t l = 0; l < net.weights.size(); ++l)
        for (std::size_t r = 0; r < net.weights[l].size(); ++r)
            for (std::size_t c = 0; c < net.weights[l][r].size(); ++c)
                net.weights[l][r][c] -= rate * grad[l][r][c];
    return net;
}

}  // namespace

NetworkParams init_network(const std::vector<int>& layer_sizes, std::uint32_t seed) {
    if (layer_sizes.size() != 3) {
        throw std::invalid_argument("layer_sizes must have exactly 3 entries");
    }
    for (int s : layer_sizes) {
        if (s < 1) throw std::invalid_argument("layer_sizes entries must be >= 1");
    }
    NetworkParams net;
    net.layer_sizes = layer_sizes;
    std::mt19937 gen(seed);
    for (int l = 0; l < 2; ++l) {
        Mat m(layer_sizes[l + 1], Vec(layer_sizes[l] + 1));
        for (Vec& row : m)
            for (double& w : row) w = uniform_range(gen, -0.5, 0.5);
        net.weights.push_back(std::move(m));
    }
    return net;
}

LayerActivations forward(const NetworkParams& net, const Vec& input) {
    check_input(net, input);
    LayerActivations acts;
    acts.per_layer.reserve(3);
    acts.per_layer.push_back(input);
    Vec hidden = affine(net.weights[0], input);
    for (double& h : hidden) h = sigmoid(h);
    Vec out = affine(net.weights[1], hidden);
    acts.per_layer.push_back(std::move(hidden));
    acts.per_layer.push_back(std::move(out));
    return acts;
}

std::vector<Vec> backprop_errors(const NetworkParams& net,
                                 const LayerActivations& acts,
                                 const Vec& target) {
    check_target(net, target);
    const Vec& hidden = acts.per_layer[1];
    const Vec& out = acts.per_layer[2];

    std::vector<Vec> errs(2);
    errs[1].resize(out.size());
    for (std::size_t j = 0; j < out.size(); ++j) errs[1][j] = out[j] - target[j];

    errs[0].resize(hidden.size());
    const Mat& w1 = net.weights[1];
    for (std::size_t h = 0; h < hidden.size(); ++h) {
        double acc = 0.0;
        for (std::size_t j = 0; j < out.size(); ++j) acc += w1[j][h] * errs[1][j];
        errs[0][h] = acc * hidden[h] * (1.0 - hidden[h]);
    }
    return errs;
}

std::vector<Mat> loss_gradient(const NetworkParams& net, const Vec& input, const Vec& target) {
    const LayerActivations acts = forward(net, input);
    const std::vector<Vec> errs = backprop_errors(net, acts, target);
    std::vector<Mat> grad(2);
    for (int l = 0; l < 2; ++l) {
        const Vec& in = acts.per_layer[l];
        grad[l].assign(errs[l].size(), Vec(in.size() + 1));
        for (std::size_t r = 0; r < errs[l].size(); ++r) {
            const double e = errs[l][r];
            for (std::size_t c = 0; c < in.size(); ++c) grad[l][r][c] = e * in[c];
            grad[l][r][in.size()] = e;
        }
    }
    return grad;
}

NetworkParams backprop(NetworkParams net, const Vec& input, const Vec& target,
                       double learning_rate) {
    if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be > 0");
    const std::vector<Mat> grad = loss_gradient(net, input, target);
    return descend(std::move(net), grad, learning_rate);
}

NetworkParams batch_backprop(NetworkParams net, const std::vector<BatchItem>& items,
                             double learning_rate, int max_iterations) {
    if (items.empty()) throw std::invalid_argument("batch must be nonempty");
    if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    for (const BatchItem& item : items) {
        check_input(net, item.input);
        check_target(net, item.target);
    }

    double rate = learning_rate;
    GradLoss cur = batch_grad_and_loss(net, items);
    for (int it = 0; it < max_iterations; ++it) {
        if (cur.loss < 1e-8) break;
        NetworkParams cand = descend(net, cur.grad, rate);
        GradLoss next = batch_grad_and_loss(cand, items);
        int halvings = 0;
        while (next.loss > cur.loss && halvings < 40) {
            rate *= 0.5;
            ++halvings;
            cand = descend(net, cur.grad, rate);
            next = batch_grad_and_loss(cand, items);
        }
        if (next.loss > cur.loss) break;
        net = std::move(cand);
        cur = std::move(next);
    }
    return net;
}

NetworkParams apply_delta(NetworkParams net, int layer_index, const Mat& delta) {
    if (layer_index < 0 || layer_index >= static_cast<int>(net.weights.size())) {
        throw std::invalid_argument("layer_index out of range");
    }
    Mat& w = net.weights[layer_index];
    if (delta.size() != w.size()) throw std::invalid_argument("delta row count mismatch");
    for (std::size_t r = 0; r < w.size(); ++r) {
        if (delta[r].size() != w[r].size()) {
            throw std::invalid_argument("delta column count mismatch");
        }
        for (std::size_t c = 0; c < w[r].size(); ++c) w[r][c] += delta[r][c];
    }
    return net;
}

double mean_loss(const NetworkParams& net, const std::vector<BatchItem>& items) {
    if (items.empty()) throw std::invalid_argument("batch must be nonempty");
    double loss = 0.0;
    for (const BatchItem& item : items) {
        const Vec out = forward(net, item.input).output();
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double d = out[j] - item.target[j];
            loss += 0.5 * d * d;
        }
    }
    return loss / static_cast<double>(items.size());
}

double max_abs_weight(const NetworkParams& net) {
    double m = 0.0;
    for (const Mat& w : net.weights)
        for (const Vec& row : w)
            for (double v : row) m = std::max(m, std::fabs(v));
    return m;
}

}  // namespace prlab
