#include "prlab/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prlab/encoding.hpp"
#include "prlab/rng.hpp"

namespace prlab {

namespace {

// Trains one network toward `target` through the configured rehearsal path.
NetworkParams train_step(NetworkParams net, const Vec& obs, const Vec& target,
                         double learning_rate, RehearsalState* rehearsal,
                         const PseudoSet* pseudoset) {
    if (rehearsal == nullptr || rehearsal->config.mode == RehearsalMode::None) {
        return backprop(std::move(net), obs, target, learning_rate);
    }
    if (rehearsal->config.mode == RehearsalMode::Batch) {
        return batch_rehearse(std::move(net), {obs, target}, *pseudoset, learning_rate,
                              rehearsal->config.batch_iterations);
    }
    const LayerActivations acts = forward(net, obs);
    const std::vector<Vec> errs = backprop_errors(net, acts, target);
    return fr_rehearse(std::move(net), acts, errs, *pseudoset, rehearsal->config.mode,
                       learning_rate);
}

}  // namespace

void validate(const AgentHyperparams& h) {
    if (h.alpha <= 0.0) throw std::invalid_argument("alpha must be > 0");
    if (h.beta <= 0.0) throw std::invalid_argument("beta must be > 0");
    if (h.gamma <= 0.0 || h.gamma > 1.0) throw std::invalid_argument("gamma must be in (0, 1]");
    if (h.tau <= 0.0) throw std::invalid_argument("tau must be > 0");
    if (h.beta >= h.alpha) throw std::invalid_argument("beta must be less than alpha");
}

AgentState make_agent(int hidden_width, const AgentHyperparams& hyper, std::uint32_t seed) {
    if (hidden_width < 1) throw std::invalid_argument("hidden_width must be >= 1");
    validate(hyper);
    AgentState agent;
    const std::vector<int> sizes = {kObservationSize, hidden_width, kNumActions};
    agent.actor = init_network(sizes, static_cast<std::uint32_t>(mix_seed(seed, 1)));
    agent.critic = init_network(sizes, static_cast<std::uint32_t>(mix_seed(seed, 2)));
    agent.hyper = hyper;
    agent.rng.seed(static_cast<std::uint32_t>(mix_seed(seed, 3)));
    return agent;
}

RehearsalState make_rehearsal_state(const AgentState& agent, const RehearsalConfig& config,
                                    std::uint32_t seed) {
    validate(config);
    RehearsalState rs;
    rs.config = config;
    rs.rng.seed(seed);
    if (config.mode != RehearsalMode::None) {
        rs.actor_set = capture_pseudoset(agent.actor, config, rs.rng);
        rs.critic_set = capture_pseudoset(agent.critic, config, rs.rng);
    }
    return rs;
}

Vec action_probabilities(const Vec& actor_output, double tau) {
    if (tau <= 0.0) throw std::invalid_argument("tau must be > 0");
    if (actor_output.empty()) throw std::invalid_argument("empty actor output");
    for (double v : actor_output) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite actor output");
    }
    const double m = *std::max_element(actor_output.begin(), actor_output.end());
    Vec p(actor_output.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp((actor_output[i] - m) / tau);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

int select_action(AgentState& agent, const Vec& obs) {
    const Vec p = action_probabilities(forward(agent.actor, obs).output(), agent.hyper.tau);
    const double u = uniform_unit(agent.rng);
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        cum += p[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
}

double td_error(const AgentState& agent, const Transition& t) {
    const double q = forward(agent.critic, t.obs).output()[t.action];
    double q_next = 0.0;
    if (!t.terminal) {
        q_next = forward(agent.critic, t.next_obs).output()[t.next_action];
    }
    return t.reward + agent.hyper.gamma * q_next - q;
}

double learn(AgentState& agent, const Transition& t, RehearsalState* rehearsal) {
    if (t.action < 0 || t.action >= kNumActions || t.next_action < 0 ||
        t.next_action >= kNumActions) {
        throw std::invalid_argument("action index out of range");
    }

    const Vec critic_out = forward(agent.critic, t.obs).output();
    double q_next = 0.0;
    if (!t.terminal) {
        q_next = forward(agent.critic, t.next_obs).output()[t.next_action];
    }
    const double delta = t.reward + agent.hyper.gamma * q_next - critic_out[t.action];

    // Off-action outputs are held at their current values.
    Vec critic_target = critic_out;
    critic_target[t.action] = t.reward + (t.terminal ? 0.0 : agent.hyper.gamma * q_next);

    Vec actor_target = forward(agent.actor, t.obs).output();
    actor_target[t.action] += delta;

    agent.critic = train_step(std::move(agent.critic), t.obs, critic_target, agent.hyper.alpha,
                              rehearsal, rehearsal ? &rehearsal->critic_set : nullptr);
    agent.actor = train_step(std::move(agent.actor), t.obs, actor_target, agent.hyper.beta,
                             rehearsal, rehearsal ? &rehearsal->actor_set : nullptr);
    return delta;
}

int run_episode(AgentState& agent, const CartState& start, const PhysicsParams& physics,
                int step_cap, RehearsalState* rehearsal) {
    if (step_cap < 1) throw std::invalid_argument("step_cap must be >= 1");
    CartState state = start;
    Vec obs = encode(state);
    int action = select_action(agent, obs);
    for (int steps = 1; steps <= step_cap; ++steps) {
        const StepOutcome out = step(state, action == 0 ? PushAction::Left : PushAction::Right,
                                     physics);
        Transition t;
        t.obs = obs;
        t.action = action;
        t.reward = out.reward;
        t.next_obs = encode(out.next_state);
        t.terminal = out.failed;
        if (out.failed) {
            t.next_action = 0;
            learn(agent, t, rehearsal);
            return steps;
        }
        t.next_action = select_action(agent, t.next_obs);
        learn(agent, t, rehearsal);
        state = out.next_state;
        obs = std::move(t.next_obs);
        action = t.next_action;
    }
    return step_cap;
}

}  // namespace prlab
