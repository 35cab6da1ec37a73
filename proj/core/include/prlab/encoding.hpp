#pragma once

#include "prlab/cartpole.hpp"
#include "prlab/mlp.hpp"

namespace prlab {

inline constexpr int kObservationSize = 12;

/// Sign-split observation: each of the six state components occupies one of
/// two adjacent slots (positive values the even slot, negative the odd one,
/// as a magnitude). Linear components are divided by 20, angular components
/// are expressed in degrees and divided by 60.
Vec encode(const CartState& state);

}  // namespace prlab
