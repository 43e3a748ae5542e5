#ifndef PURPOSE_HOME_SCENARIO_HPP
#define PURPOSE_HOME_SCENARIO_HPP

#include "purpose/scenario.hpp"

namespace purpose {

/// Home service robot scenario.
///
/// Constants of the generator: 7x7 grid, human on cell (3,3) (not enterable), charger on (6,3),
/// battery 0..10 folded into the state id "x{X}y{Y}b{B}", every successful move costs one unit,
/// an empty battery freezes movement. Actions E, N, S, W, noop. Human-adjacent means Chebyshev
/// distance 1 from the human. Eight trials: day, day, night, night, day, day, night, night;
/// phase 1 (trials 1-4) priorities closeness 10 / energy 2; phase 2 (trials 5-8) closeness 5,
/// energy 2 and the proscriptive night-proximity mission (priority 50).
namespace home {

inline constexpr int kGrid = 7;
inline constexpr int kHumanX = 3;
inline constexpr int kHumanY = 3;
inline constexpr int kChargerX = 6;
inline constexpr int kChargerY = 3;
inline constexpr int kMaxBattery = 10;

struct Cell {
    int x = 0;
    int y = 0;
    int battery = 0;
};

StateId state_id(int x, int y, int battery);
Cell parse_state(const StateId& id);
int human_distance(int x, int y);
bool human_adjacent(const StateId& id);
bool at_charger(const StateId& id);

}  // namespace home

ScenarioSpec build_home_robot_scenario();

}  // namespace purpose

#endif
