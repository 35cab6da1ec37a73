#include "prlab/cartpole.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "prlab/rng.hpp"

namespace prlab {

namespace {

bool finite(const CartState& s) {
    return std::isfinite(s.x) && std::isfinite(s.x_dot) && std::isfinite(s.x_ddot) &&
           std::isfinite(s.theta) && std::isfinite(s.theta_dot) && std::isfinite(s.theta_ddot);
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

void validate(const PhysicsParams& p) {
    if (p.gravity <= 0.0) throw std::invalid_argument("gravity must be > 0");
    if (p.cart_mass <= 0.0) throw std::invalid_argument("cart_mass must be > 0");
    if (p.pole_mass <= 0.0) throw std::invalid_argument("pole_mass must be > 0");
    if (p.pole_half_length <= 0.0) throw std::invalid_argument("pole_half_length must be > 0");
    if (p.force_magnitude <= 0.0) throw std::invalid_argument("force_magnitude must be > 0");
    if (p.track_half_width <= 0.0) throw std::invalid_argument("track_half_width must be > 0");
    if (p.fail_angle <= 0.0 || p.fail_angle >= 1.5707963267948966) {
        throw std::invalid_argument("fail_angle must lie in (0, pi/2)");
    }
    if (p.timestep <= 0.0) throw std::invalid_argument("timestep must be > 0");
}

CartState reset_state(std::uint32_t seed) {
    std::mt19937 gen(seed);
    CartState s;
    s.x = uniform_range(gen, -0.05, 0.05);
    s.theta = uniform_range(gen, -0.05, 0.05);
    return s;
}

StepOutcome step_with_force(const CartState& state, double force, const PhysicsParams& p) {
    if (!finite(state)) throw std::invalid_argument("cart state contains a non-finite value");

    const double sin_t = std::sin(state.theta);
    const double cos_t = std::cos(state.theta);
    const double ml = p.pole_mass * p.pole_half_length;
    const double pole_friction = p.friction_pole * state.theta_dot / ml;

    // Wieland single-pole effective force and mass; the sign of the angular
    // acceleration is flipped relative to the source so the pole accelerates
    // away from upright.
    const double f_eff =
        ml * state.theta_dot * state.theta_dot * sin_t +
        0.75 * p.pole_mass * cos_t * (pole_friction + p.gravity * sin_t);
    const double m_eff = p.pole_mass * (1.0 - 0.75 * cos_t * cos_t);

    const double x_ddot =
        (force - p.friction_cart * sgn(state.x_dot) + f_eff) / (p.cart_mass + m_eff);
    const double theta_ddot =
        0.75 / p.pole_half_length * (x_ddot * cos_t + p.gravity * sin_t + pole_friction);

    StepOutcome out;
    CartState& n = out.next_state;
    n.x = state.x + p.timestep * state.x_dot;
    n.x_dot = state.x_dot + p.timestep * x_ddot;
    n.theta = state.theta + p.timestep * state.theta_dot;
    n.theta_dot = state.theta_dot + p.timestep * theta_ddot;
    n.x_ddot = x_ddot;
    n.theta_ddot = theta_ddot;

    out.failed = std::fabs(n.x) > p.track_half_width || std::fabs(n.theta) > p.fail_angle;
    out.reward = out.failed ? -1.0 : 0.0;
    return out;
}

StepOutcome step(const CartState& state, PushAction action, const PhysicsParams& p) {
    const double force = action == PushAction::Right ? p.force_magnitude : -p.force_magnitude;
    return step_with_force(state, force, p);
}

double free_fall_baseline(const PhysicsParams& params, std::uint32_t seed, int episodes,
                          int step_cap) {
    if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
    long long total = 0;
    for (int ep = 0; ep < episodes; ++ep) {
        CartState state = reset_state(static_cast<std::uint32_t>(mix_seed(seed, ep)));
        int steps = 0;
        while (steps < step_cap) {
            const StepOutcome out = step_with_force(state, 0.0, params);
            ++steps;
            if (out.failed) break;
            state = out.next_state;
        }
        total += steps;
    }
    return static_cast<double>(total) / static_cast<double>(episodes);
}

}  // namespace prlab
