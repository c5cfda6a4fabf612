#include "slaf/model/fixtures.hpp"

namespace slaf::toy {

GroundDomain locked_door() { return GroundDomain("locked-door", {"locked"}, {"unlock1", "unlock2", "unlock3"}); }

StripsActionModel locked_door_model(int k) {
    StripsActionModel m(1, 3);
    for (int a = 0; a < 3; ++a) m.set_effect(a, 0, a + 1 == k ? Effect::CausesFalse : Effect::Keeps);
    return m;
}

GroundDomain light_switch() { return GroundDomain("light-switch", {"E", "lit", "sw"}, {"go-W", "go-E", "sw-on"}); }

}  // namespace slaf::toy
