#include "prlab/rehearsal.hpp"

#include <cmath>
#include <stdexcept>

#include "prlab/rng.hpp"

namespace prlab {

namespace {

double dot(const Vec& a, const Vec& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

Vec with_bias(const Vec& v) {
    Vec out = v;
    out.push_back(1.0);
    return out;
}

// Pseudo-vectors for one weight layer, bias slot included.
std::vector<Vec> layer_pseudo_vectors(const PseudoSet& set, int layer, RehearsalMode mode,
                                      const NetworkParams& net) {
    std::vector<Vec> xs;
    xs.reserve(set.items.size());
    for (const Pseudoitem& item : set.items) {
        if (static_cast<int>(item.input.size()) != net.layer_sizes[0]) {
            throw std::invalid_argument("pseudoset topology does not match network");
        }
        if (layer == 0 && mode != RehearsalMode::FrAllLayers) {
            xs.push_back(with_bias(item.input));
            continue;
        }
        if (!item.layer_activations) {
            throw std::invalid_argument("pseudoset lacks layer activations for all-layers mode");
        }
        const Vec& act = item.layer_activations->per_layer[layer];
        if (static_cast<int>(act.size()) != net.layer_sizes[layer]) {
            throw std::invalid_argument("pseudoset topology does not match network");
        }
        xs.push_back(with_bias(act));
    }
    return xs;
}

}  // namespace

std::string to_string(RehearsalMode mode) {
    switch (mode) {
        case RehearsalMode::None: return "none";
        case RehearsalMode::FrOutputOnly: return "fr-output";
        case RehearsalMode::FrAllLayers: return "fr-all";
        case RehearsalMode::Batch: return "batch";
    }
    return "none";
}

RehearsalMode parse_rehearsal_mode(const std::string& name) {
    if (name == "none") return RehearsalMode::None;
    if (name == "fr-output") return RehearsalMode::FrOutputOnly;
    if (name == "fr-all") return RehearsalMode::FrAllLayers;
    if (name == "batch") return RehearsalMode::Batch;
    throw std::invalid_argument("unknown rehearsal mode '" + name +
                                "' (expected none, fr-output, fr-all or batch)");
}

void validate(const RehearsalConfig& config) {
    if (config.mode != RehearsalMode::None && config.pr < 1) {
        throw std::invalid_argument("rehearsal.pr must be >= 1");
    }
    if (config.mode != RehearsalMode::None && config.reinit_period < 1) {
        throw std::invalid_argument("rehearsal.reinit_period must be >= 1");
    }
    if (config.mode == RehearsalMode::Batch && config.batch_iterations < 1) {
        throw std::invalid_argument("rehearsal.batch_iterations must be >= 1");
    }
}

Vec generate_pseudoinput(int width, std::mt19937& gen) {
    if (width < 1) throw std::invalid_argument("width must be >= 1");
    Vec v(width);
    for (double& e : v) e = uniform_unit(gen) < 0.5 ? 0.0 : 1.0;
    return v;
}

PseudoSet capture_pseudoset(const NetworkParams& net, const RehearsalConfig& config,
                            std::mt19937& gen) {
    if (config.pr < 1) throw std::invalid_argument("config.pr must be >= 1");
    PseudoSet set;
    set.reinit_period = config.reinit_period;
    set.episodes_since_reinit = 0;
    set.items.reserve(config.pr);
    for (int i = 0; i < config.pr; ++i) {
        Pseudoitem item;
        item.input = generate_pseudoinput(net.layer_sizes[0], gen);
        LayerActivations acts = forward(net, item.input);
        item.target_output = acts.output();
        if (config.mode == RehearsalMode::FrAllLayers) {
            item.layer_activations = std::move(acts);
        }
        set.items.push_back(std::move(item));
    }
    return set;
}

Vec eq3_delta(const Vec& b, double err_b, const std::vector<Vec>& pseudo_inputs) {
    const double bb = dot(b, b);
    if (bb == 0.0) throw std::invalid_argument("b must be nonzero");
    if (pseudo_inputs.empty()) throw std::invalid_argument("pseudo_inputs must be nonempty");

    Vec acc(b.size(), 0.0);
    int retained = 0;
    for (const Vec& x : pseudo_inputs) {
        if (x.size() != b.size()) throw std::invalid_argument("pseudo vector length mismatch");
        const double xx = dot(x, x);
        const double bx = dot(b, x);
        const double den = bb * xx - bx * bx;
        // Gram determinant of (b, x); vanishes for collinear pairs.
        if (std::fabs(den) <= 1e-9 * bb * xx) continue;
        ++retained;
        for (std::size_t i = 0; i < b.size(); ++i) acc[i] += (b[i] * xx - x[i] * bx) / den;
    }

    Vec delta(b.size());
    if (retained == 0) {
        for (std::size_t i = 0; i < b.size(); ++i) delta[i] = err_b * b[i] / bb;
    } else {
        const double scale = err_b / static_cast<double>(retained);
        for (std::size_t i = 0; i < b.size(); ++i) delta[i] = scale * acc[i];
    }
    return delta;
}

NetworkParams fr_rehearse(NetworkParams net, const LayerActivations& acts,
                          const std::vector<Vec>& per_neuron_errors,
                          const PseudoSet& pseudoset, RehearsalMode mode,
                          double learning_rate) {
    if (mode == RehearsalMode::Batch) {
        throw std::invalid_argument("fr_rehearse does not handle batch mode");
    }
    for (int layer = 0; layer < 2; ++layer) {
        const Vec& errs = per_neuron_errors[layer];
        const Vec& in = acts.per_layer[layer];
        const bool corrected = mode == RehearsalMode::FrAllLayers ||
                               (mode == RehearsalMode::FrOutputOnly && layer == 0);
        Mat delta(errs.size(), Vec(in.size() + 1));
        if (!corrected) {
            // Same operation order as backprop() so that mode none is
            // bit-identical to the plain step.
            for (std::size_t r = 0; r < errs.size(); ++r) {
                for (std::size_t c = 0; c < in.size(); ++c) {
                    delta[r][c] = -(learning_rate * (errs[r] * in[c]));
                }
                delta[r][in.size()] = -(learning_rate * errs[r]);
            }
        } else {
            const std::vector<Vec> xs = layer_pseudo_vectors(pseudoset, layer, mode, net);
            // The projected direction depends only on the layer input, so it
            // is shared by every neuron in the layer.
            const Vec base = eq3_delta(with_bias(in), 1.0, xs);
            for (std::size_t r = 0; r < errs.size(); ++r) {
                const double step = -learning_rate * errs[r];
                for (std::size_t c = 0; c < base.size(); ++c) delta[r][c] = step * base[c];
            }
        }
        net = apply_delta(std::move(net), layer, delta);
    }
    return net;
}

NetworkParams batch_rehearse(NetworkParams net, const BatchItem& fresh,
                             const PseudoSet& pseudoset, double learning_rate,
                             int batch_iterations) {
    if (pseudoset.items.empty()) throw std::invalid_argument("pseudoset must be nonempty");
    std::vector<BatchItem> items;
    items.reserve(pseudoset.items.size() + 1);
    for (const Pseudoitem& item : pseudoset.items) {
        items.push_back({item.input, item.target_output});
    }
    items.push_back(fresh);
    return batch_backprop(std::move(net), items, learning_rate, batch_iterations);
}

void maintain(PseudoSet& pseudoset, const NetworkParams& net, const RehearsalConfig& config,
              std::mt19937& gen) {
    ++pseudoset.episodes_since_reinit;
    if (pseudoset.episodes_since_reinit >= pseudoset.reinit_period) {
        pseudoset = capture_pseudoset(net, config, gen);
    }
}

}  // namespace prlab
