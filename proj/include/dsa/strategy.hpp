// strategy.hpp — intervention strategies: (instant performance, attention
// level, current scene) -> next scene command.
//
// Strategies are pure and stateless. The registry makes them pluggable;
// "table1" (the four-row decision table) and "control-fixed" (never change
// anything) are built in.

#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dsa/types.hpp"

namespace dsa {

// The four-row decision table:
//   r >= 0, High -> Blue            (Row1)
//   r >= 0, Low  -> Red             (Row2)
//   r <  0, Low  -> Red             (Row3)
//   r <  0, High -> keep current    (Row4Maintain)
// Total over r in [-1,1] x {High,Low}. The returned command's window_index
// is left at 0; decide_for_snapshot assigns it.
SceneCommand table1_decide(double r, AttentionLevel level, const SceneState& current);

// Control condition: echo the scene color in force, which under this policy
// is always the session's initial color.
SceneCommand control_decide(const SceneState& current);

class StrategyRegistry {
public:
    // A strategy sees the whole snapshot so future ones can use
    // mean_attention continuously; table1 only reads the binarized level.
    using DecideFn =
        std::function<SceneCommand(const WindowSnapshot&, const SceneState&)>;

    void add(const std::string& id, DecideFn decide);
    bool contains(const std::string& id) const;
    std::vector<std::string> ids() const;

    // Dispatches to the named strategy. The first window (absent r) is
    // treated as r = 0. The command takes effect at the next window:
    // window_index = snapshot.index + 1. Throws Error(UnknownStrategy).
    SceneCommand decide(const std::string& id, const WindowSnapshot& snapshot,
                        const SceneState& scene) const;

    // Registry with the built-in strategies "table1" and "control-fixed".
    static const StrategyRegistry& builtins();

private:
    std::map<std::string, DecideFn> strategies_;
};

SceneCommand decide_for_snapshot(const std::string& strategy_id,
                                 const WindowSnapshot& snapshot, const SceneState& scene,
                                 const StrategyRegistry& registry = StrategyRegistry::builtins());

// Printable form of the table1 policy, one entry per row.
struct StrategyTableRow {
    int row;
    const char* performance;
    const char* attention;
    const char* color;
    CommandReason reason;
};

std::array<StrategyTableRow, 4> table1_rows();

}  // namespace dsa
