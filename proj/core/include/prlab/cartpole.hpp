#pragma once

#include <cstdint>

namespace prlab {

struct PhysicsParams {
    double gravity = 9.81;
    double cart_mass = 1.0;
    double pole_mass = 0.1;
    double pole_half_length = 0.5;
    double force_magnitude = 25.0;
    double track_half_width = 2.4;
    double fail_angle = 0.6283185307179586;  // 36 degrees
    double timestep = 0.02;
    double friction_cart = 0.0;
    double friction_pole = 0.0;
};

struct CartState {
    double x = 0.0;
    double x_dot = 0.0;
    double x_ddot = 0.0;
    double theta = 0.0;
    double theta_dot = 0.0;
    double theta_ddot = 0.0;
};

enum class PushAction { Left, Right };

struct StepOutcome {
    CartState next_state;
    double reward = 0.0;
    bool failed = false;
};

void validate(const PhysicsParams& params);

/// Small random start near upright: |x| <= 0.05 m, |theta| <= 0.05 rad,
/// all rates and accelerations zero.
CartState reset_state(std::uint32_t seed);

StepOutcome step(const CartState& state, PushAction action, const PhysicsParams& params);

/// Test-only hook: same dynamics with an arbitrary force (e.g. zero).
/// Not reachable through the agent action set.
StepOutcome step_with_force(const CartState& state, double force, const PhysicsParams& params);

/// Mean episode length with no control intervention (zero force), the
/// performance floor for the learning runs.
double free_fall_baseline(const PhysicsParams& params, std::uint32_t seed, int episodes,
                          int step_cap = 100000);

}  // namespace prlab
