#pragma once

#include "slaf/model/strips.hpp"

namespace slaf::toy {

// One door, three keys. Fluent: locked. Actions: unlock1..unlock3.
GroundDomain locked_door();
// Key k (1-based) unlocks the door, the others keep it; no preconditions.
StripsActionModel locked_door_model(int k);

// Two rooms with a bulb and a switch. Fluents: E, lit, sw. Actions: go-W,
// go-E, sw-on.
GroundDomain light_switch();

}  // namespace slaf::toy
