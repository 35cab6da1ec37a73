#pragma once

#include <cstdint>
#include <random>

#include "prlab/cartpole.hpp"
#include "prlab/mlp.hpp"
#include "prlab/rehearsal.hpp"

namespace prlab {

struct AgentHyperparams {
    double alpha = 0.3;   // critic learning rate
    double beta = 0.06;   // actor learning rate
    double gamma = 0.99;  // discount factor
    double tau = 1.0;     // softmax temperature
};

void validate(const AgentHyperparams& hyper);

inline constexpr int kNumActions = 2;

struct AgentState {
    NetworkParams actor;   // 12 -> hidden -> 2 action preferences
    NetworkParams critic;  // 12 -> hidden -> 2 action values
    AgentHyperparams hyper;
    std::mt19937 rng;  // action-sampling generator
};

struct Transition {
    Vec obs;
    int action = 0;
    double reward = 0.0;
    Vec next_obs;
    int next_action = 0;
    bool terminal = false;
};

/// Pseudosets and generator for one run; actor and critic are rehearsed
/// identically from their own captures.
struct RehearsalState {
    RehearsalConfig config;
    PseudoSet actor_set;
    PseudoSet critic_set;
    std::mt19937 rng;
};

AgentState make_agent(int hidden_width, const AgentHyperparams& hyper, std::uint32_t seed);

RehearsalState make_rehearsal_state(const AgentState& agent, const RehearsalConfig& config,
                                    std::uint32_t seed);

/// Temperature softmax over action preferences, max-subtracted.
Vec action_probabilities(const Vec& actor_output, double tau);

int select_action(AgentState& agent, const Vec& obs);

/// SARSA TD error: R + gamma * Q(s', a') - Q(s, a), successor term zero on
/// terminal transitions.
double td_error(const AgentState& agent, const Transition& t);

/// One online learning step: critic toward the TD target at rate alpha,
/// actor's chosen-action preference toward (current + delta) at rate beta,
/// both routed through the active rehearsal strategy. Returns the TD error
/// computed before the updates. `rehearsal` may be null (no rehearsal).
double learn(AgentState& agent, const Transition& t, RehearsalState* rehearsal);

/// Runs select -> step -> select -> learn until failure or the step cap.
/// Returns the number of steps survived.
int run_episode(AgentState& agent, const CartState& start, const PhysicsParams& physics,
                int step_cap, RehearsalState* rehearsal);

}  // namespace prlab
