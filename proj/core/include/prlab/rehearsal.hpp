#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "prlab/mlp.hpp"

namespace prlab {

enum class RehearsalMode { None, FrOutputOnly, FrAllLayers, Batch };

/// Config-file / CLI names: none, fr-output, fr-all, batch.
std::string to_string(RehearsalMode mode);
RehearsalMode parse_rehearsal_mode(const std::string& name);

struct Pseudoitem {
    Vec input;          // 0/1 entries, network input width
    Vec target_output;  // owning network's output on `input` at capture time
    std::optional<LayerActivations> layer_activations;  // present in all-layers mode
};

struct PseudoSet {
    std::vector<Pseudoitem> items;
    int reinit_period = 10;
    int episodes_since_reinit = 0;
};

struct RehearsalConfig {
    RehearsalMode mode = RehearsalMode::None;
    int pr = 30;              // pseudoset size
    int reinit_period = 10;   // episodes between recaptures
    int batch_iterations = 5; // gradient-step cap per batch-PR learn call
};

void validate(const RehearsalConfig& config);

/// Each entry independently 0 or 1 with probability 1/2.
Vec generate_pseudoinput(int width, std::mt19937& gen);

PseudoSet capture_pseudoset(const NetworkParams& net, const RehearsalConfig& config,
                            std::mt19937& gen);

/// Averaged projected weight update for one neuron: direction `b` with the
/// component along each pseudo-vector removed, normalized by the Gram
/// determinant of (b, x). Near-collinear terms are skipped; if every term is
/// skipped the uncorrected direction err_b * b / (b.b) is returned.
Vec eq3_delta(const Vec& b, double err_b, const std::vector<Vec>& pseudo_inputs);

/// Replaces the plain gradient step with the projected-delta update.
/// `per_neuron_errors` are dL/d(pre-activation) as returned by
/// backprop_errors; deltas descend the loss and are scaled by
/// `learning_rate`. Output-only mode corrects the first weight layer against
/// raw pseudoinputs and takes a standard gradient step on the layer above;
/// all-layers mode corrects every layer against the stored pseudo
/// activations of that layer.
NetworkParams fr_rehearse(NetworkParams net, const LayerActivations& acts,
                          const std::vector<Vec>& per_neuron_errors,
                          const PseudoSet& pseudoset, RehearsalMode mode,
                          double learning_rate);

/// Batch PR: one batch_backprop call over the pseudoitems plus the fresh
/// example.
NetworkParams batch_rehearse(NetworkParams net, const BatchItem& fresh,
                             const PseudoSet& pseudoset, double learning_rate,
                             int batch_iterations);

/// Counts one elapsed episode; recaptures from the current net once the
/// reinitialization period is reached.
void maintain(PseudoSet& pseudoset, const NetworkParams& net, const RehearsalConfig& config,
              std::mt19937& gen);

}  // namespace prlab
