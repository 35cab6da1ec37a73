#include "prlab/encoding.hpp"

#include <cmath>
#include <stdexcept>

namespace prlab {

namespace {
constexpr double kRadToDeg = 180.0 / 3.141592653589793238462643383279502884;
constexpr double kLinearScale = 20.0;
constexpr double kAngularScale = 60.0;
}  // namespace

Vec encode(const CartState& state) {
    const double components[6] = {
        state.x,
        state.x_dot,
        state.x_ddot,
        state.theta * kRadToDeg,
        state.theta_dot * kRadToDeg,
        state.theta_ddot * kRadToDeg,
    };

    Vec obs(kObservationSize, 0.0);
    for (int i = 0; i < 6; ++i) {
        const double v = components[i];
        if (!std::isfinite(v)) {
            throw std::invalid_argument("cart state contains a non-finite value");
        }
        const double scale = i < 3 ? kLinearScale : kAngularScale;
        if (v >= 0.0) {
            obs[2 * i] = v / scale;
        } else {
            obs[2 * i + 1] = -v / scale;
        }
    }
    return obs;
}

}  // namespace prlab
