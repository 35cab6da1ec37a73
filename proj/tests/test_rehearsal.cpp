#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "prlab/rehearsal.hpp"
#include "prlab/rng.hpp"

using namespace prlab;

namespace {

Vec random_vec(std::mt19937& gen, int n, double lo, double hi) {
    Vec v(n);
    for (double& x : v) x = uniform_range(gen, lo, hi);
    return v;
}

double dot(const Vec& a, const Vec& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

Vec with_bias(Vec v) {
    v.push_back(1.0);
    return v;
}

}  // namespace

TEST_CASE("pseudoinput entries are fair coin flips") {
    std::mt19937 gen(1);
    std::vector<int> ones(12, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Vec v = generate_pseudoinput(12, gen);
        for (int j = 0; j < 12; ++j) {
            CHECK((v[j] == 0.0 || v[j] == 1.0));
            ones[j] += v[j] == 1.0 ? 1 : 0;
        }
    }
    for (int j = 0; j < 12; ++j) {
        const double freq = static_cast<double>(ones[j]) / n;
        CHECK(freq >= 0.49);
        CHECK(freq <= 0.51);
    }
}

TEST_CASE("pseudoinput generation is deterministic and validates width") {
    std::mt19937 a(7), b(7);
    CHECK(generate_pseudoinput(12, a) == generate_pseudoinput(12, b));
    std::mt19937 c(9);
    const Vec one = generate_pseudoinput(1, c);
    CHECK((one == Vec{0.0} || one == Vec{1.0}));
    CHECK_THROWS_AS(generate_pseudoinput(0, c), std::invalid_argument);
}

TEST_CASE("capture_pseudoset stores faithful targets") {
    const NetworkParams net = init_network({12, 8, 2}, 4);
    RehearsalConfig config;
    config.mode = RehearsalMode::FrAllLayers;
    config.pr = 30;
    config.reinit_period = 10;
    std::mt19937 gen(11);
    const PseudoSet set = capture_pseudoset(net, config, gen);
    REQUIRE(set.items.size() == 30);
    CHECK(set.reinit_period == 10);
    CHECK(set.episodes_since_reinit == 0);
    for (const Pseudoitem& item : set.items) {
        const LayerActivations acts = forward(net, item.input);
        REQUIRE(item.layer_activations.has_value());
        for (std::size_t j = 0; j < item.target_output.size(); ++j) {
            CHECK(std::fabs(acts.output()[j] - item.target_output[j]) <= 1e-12);
        }
        for (std::size_t l = 0; l < acts.per_layer.size(); ++l) {
            CHECK(item.layer_activations->per_layer[l] == acts.per_layer[l]);
        }
    }
}

TEST_CASE("output-only capture stores no layer activations") {
    const NetworkParams net = init_network({12, 8, 2}, 4);
    RehearsalConfig config;
    config.mode = RehearsalMode::FrOutputOnly;
    config.pr = 5;
    std::mt19937 gen(3);
    const PseudoSet set = capture_pseudoset(net, config, gen);
    for (const Pseudoitem& item : set.items) CHECK_FALSE(item.layer_activations.has_value());
}

TEST_CASE("eq3_delta reduces to the normalized direction for orthogonal pseudo-vectors") {
    const Vec b = {2.0, 0.0, 0.0};
    const Vec x = {0.0, 3.0, 0.0};
    const double err = -0.7;
    const Vec delta = eq3_delta(b, err, {x});
    const double bb = dot(b, b);
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(std::fabs(delta[i] - err * b[i] / bb) <= 1e-12);
    }
}

TEST_CASE("eq3_delta skips collinear pseudo-vectors and falls back") {
    const Vec b = {1.0, 2.0, -1.0};
    Vec x = b;
    for (double& v : x) v *= -3.5;
    const double err = 0.4;
    const Vec delta = eq3_delta(b, err, {x});
    const double bb = dot(b, b);
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(delta[i] == doctest::Approx(err * b[i] / bb).epsilon(1e-12));
    }
}

TEST_CASE("eq3_delta output is orthogonal to a single retained pseudo-vector") {
    std::mt19937 gen(21);
    for (int trial = 0; trial < 500; ++trial) {
        const Vec b = random_vec(gen, 8, -2.0, 2.0);
        const Vec x = random_vec(gen, 8, -2.0, 2.0);
        const double den = dot(b, b) * dot(x, x) - dot(b, x) * dot(b, x);
        if (std::fabs(den) <= 1e-9 * dot(b, b) * dot(x, x)) continue;
        const Vec delta = eq3_delta(b, uniform_range(gen, -1.0, 1.0), {x});
        const double scale = std::sqrt(dot(delta, delta) * dot(x, x));
        if (scale == 0.0) continue;
        CHECK(std::fabs(dot(delta, x)) / scale <= 1e-10);
    }
}

TEST_CASE("eq3_delta stays finite on random pairs") {
    std::mt19937 gen(22);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec b = random_vec(gen, 6, -5.0, 5.0);
        std::vector<Vec> xs;
        for (int j = 0; j < 4; ++j) xs.push_back(random_vec(gen, 6, -5.0, 5.0));
        const Vec delta = eq3_delta(b, uniform_range(gen, -10.0, 10.0), xs);
        for (double v : delta) CHECK(std::isfinite(v));
    }
}

TEST_CASE("eq3_delta validates its inputs") {
    CHECK_THROWS_AS(eq3_delta(Vec(3, 0.0), 1.0, {Vec(3, 1.0)}), std::invalid_argument);
    CHECK_THROWS_AS(eq3_delta({1.0, 0.0}, 1.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(eq3_delta({1.0, 0.0}, 1.0, {Vec(3, 1.0)}), std::invalid_argument);
}

TEST_CASE("fr_rehearse with zero example error is the identity") {
    const NetworkParams net = init_network({12, 6, 2}, 8);
    RehearsalConfig config;
    config.mode = RehearsalMode::FrAllLayers;
    config.pr = 4;
    std::mt19937 gen(5);
    const PseudoSet set = capture_pseudoset(net, config, gen);
    const Vec input = generate_pseudoinput(12, gen);
    const LayerActivations acts = forward(net, input);
    const std::vector<Vec> errs = backprop_errors(net, acts, acts.output());
    const NetworkParams after =
        fr_rehearse(net, acts, errs, set, RehearsalMode::FrAllLayers, 0.3);
    CHECK(after.weights == net.weights);
}

TEST_CASE("fr_rehearse preserves pseudo pre-activations to first order") {
    const NetworkParams net = init_network({12, 6, 2}, 14);
    RehearsalConfig config;
    config.mode = RehearsalMode::FrAllLayers;
    config.pr = 1;
    std::mt19937 gen(15);
    const PseudoSet set = capture_pseudoset(net, config, gen);

    Vec input(12, 0.0);
    for (int i = 0; i < 12; i += 3) input[i] = 0.4;
    const LayerActivations acts = forward(net, input);
    Vec target = acts.output();
    target[0] += 0.5;
    const std::vector<Vec> errs = backprop_errors(net, acts, target);
    const NetworkParams after =
        fr_rehearse(net, acts, errs, set, RehearsalMode::FrAllLayers, 0.3);

    for (int layer = 0; layer < 2; ++layer) {
        const Vec x = with_bias(layer == 0 ? set.items[0].input
                                           : set.items[0].layer_activations->per_layer[1]);
        for (std::size_t r = 0; r < after.weights[layer].size(); ++r) {
            Vec diff(after.weights[layer][r].size());
            for (std::size_t c = 0; c < diff.size(); ++c) {
                diff[c] = after.weights[layer][r][c] - net.weights[layer][r][c];
            }
            const double norm = std::sqrt(dot(diff, diff) * dot(x, x));
            if (norm == 0.0) continue;
            CHECK(std::fabs(dot(diff, x)) / norm <= 1e-10);
        }
    }
}

TEST_CASE("fr_rehearse output-only corrects the first layer and descends above") {
    const NetworkParams net = init_network({12, 6, 2}, 19);
    RehearsalConfig config;
    config.mode = RehearsalMode::FrOutputOnly;
    config.pr = 3;
    std::mt19937 gen(20);
    const PseudoSet set = capture_pseudoset(net, config, gen);

    const Vec input = generate_pseudoinput(12, gen);
    const LayerActivations acts = forward(net, input);
    Vec target = acts.output();
    target[1] -= 0.3;
    const std::vector<Vec> errs = backprop_errors(net, acts, target);
    const NetworkParams after =
        fr_rehearse(net, acts, errs, set, RehearsalMode::FrOutputOnly, 0.3);

    // Layer 1 took the plain gradient step.
    const NetworkParams plain = backprop(net, input, target, 0.3);
    CHECK(after.weights[1] == plain.weights[1]);
    CHECK(after.weights[0] != plain.weights[0]);
}

TEST_CASE("fr_rehearse with mode none equals the plain backprop step bit-for-bit") {
    const NetworkParams net = init_network({12, 6, 2}, 23);
    PseudoSet empty_set;
    std::mt19937 gen(24);
    const Vec input = generate_pseudoinput(12, gen);
    const LayerActivations acts = forward(net, input);
    Vec target = acts.output();
    target[0] += 1.0;
    const std::vector<Vec> errs = backprop_errors(net, acts, target);
    const NetworkParams via_fr = fr_rehearse(net, acts, errs, empty_set, RehearsalMode::None, 0.3);
    const NetworkParams via_plain = backprop(net, input, target, 0.3);
    CHECK(via_fr.weights == via_plain.weights);
}

TEST_CASE("batch_rehearse with consistent targets is the identity") {
    const NetworkParams net = init_network({12, 6, 2}, 29);
    RehearsalConfig config;
    config.mode = RehearsalMode::Batch;
    config.pr = 5;
    std::mt19937 gen(30);
    const PseudoSet set = capture_pseudoset(net, config, gen);
    const Vec input = generate_pseudoinput(12, gen);
    const BatchItem fresh{input, forward(net, input).output()};
    const NetworkParams after = batch_rehearse(net, fresh, set, 0.3, 20);
    CHECK(after.weights == net.weights);
}

TEST_CASE("batch_rehearse pulls a drifted net back toward the stored targets") {
    NetworkParams net = init_network({12, 6, 2}, 33);
    RehearsalConfig config;
    config.mode = RehearsalMode::Batch;
    config.pr = 10;
    std::mt19937 gen(34);
    const PseudoSet set = capture_pseudoset(net, config, gen);
    std::vector<BatchItem> pseudo_items;
    for (const Pseudoitem& item : set.items) pseudo_items.push_back({item.input, item.target_output});

    // Drift the net away from its captured responses.
    for (int i = 0; i < 20; ++i) {
        net = backprop(net, generate_pseudoinput(12, gen), {1.0, -1.0}, 0.3);
    }
    const double before = mean_loss(net, pseudo_items);
    REQUIRE(before > 0.0);

    const Vec input = generate_pseudoinput(12, gen);
    const BatchItem fresh{input, forward(net, input).output()};
    const NetworkParams after = batch_rehearse(net, fresh, set, 0.3, 50);
    CHECK(mean_loss(after, pseudo_items) <= before);
}

TEST_CASE("maintain recaptures on the reinitialization period") {
    NetworkParams net = init_network({12, 6, 2}, 40);
    RehearsalConfig config;
    config.mode = RehearsalMode::FrAllLayers;
    config.pr = 4;
    config.reinit_period = 3;
    std::mt19937 gen(41);
    PseudoSet set = capture_pseudoset(net, config, gen);
    const Vec first_input = set.items[0].input;

    maintain(set, net, config, gen);
    CHECK(set.episodes_since_reinit == 1);
    maintain(set, net, config, gen);
    CHECK(set.episodes_since_reinit == 2);
    CHECK(set.items[0].input == first_input);

    // Train the net so the recapture has new targets.
    net = backprop(net, generate_pseudoinput(12, gen), {1.0, -1.0}, 0.3);
    maintain(set, net, config, gen);
    CHECK(set.episodes_since_reinit == 0);
    for (const Pseudoitem& item : set.items) {
        const Vec out = forward(net, item.input).output();
        for (std::size_t j = 0; j < out.size(); ++j) {
            CHECK(std::fabs(out[j] - item.target_output[j]) <= 1e-12);
        }
    }
}

TEST_CASE("maintain with period 1 recaptures every episode") {
    const NetworkParams net = init_network({12, 6, 2}, 44);
    RehearsalConfig config;
    config.mode = RehearsalMode::Batch;
    config.pr = 3;
    config.reinit_period = 1;
    std::mt19937 gen(45);
    PseudoSet set = capture_pseudoset(net, config, gen);
    const Vec before = set.items[0].input;
    maintain(set, net, config, gen);
    CHECK(set.episodes_since_reinit == 0);
    CHECK(set.items[0].input != before);  // fresh draws (astronomically unlikely to repeat)
}

TEST_CASE("mode names round-trip") {
    for (RehearsalMode m : {RehearsalMode::None, RehearsalMode::FrOutputOnly,
                            RehearsalMode::FrAllLayers, RehearsalMode::Batch}) {
        CHECK(parse_rehearsal_mode(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_rehearsal_mode("bogus"), std::invalid_argument);
}
