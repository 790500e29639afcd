#include "dsa/strategy.hpp"

#include "dsa/errors.hpp"

namespace dsa {

SceneCommand table1_decide(double r, AttentionLevel level, const SceneState& current) {
    SceneCommand command;
    if (r >= 0.0) {
        // Rows 1/2: the r = 0 boundary belongs here.
        if (level == AttentionLevel::High) {
            command.color = Color::Blue;
            command.reason = CommandReason::Row1;
        } else {
            command.color = Color::Red;
            command.reason = CommandReason::Row2;
        }
    } else if (level == AttentionLevel::Low) {
        command.color = Color::Red;
        command.reason = CommandReason::Row3;
    } else {
        command.color = current.color;
        command.reason = CommandReason::Row4Maintain;
    }
    return command;
}

SceneCommand control_decide(const SceneState& current) {
    SceneCommand command;
    command.color = current.color;
    command.reason = CommandReason::ControlFixed;
    return command;
}

void StrategyRegistry::add(const std::string& id, DecideFn decide) {
    strategies_[id] = std::move(decide);
}

bool StrategyRegistry::contains(const std::string& id) const {
    return strategies_.count(id) > 0;
}

std::vector<std::string> StrategyRegistry::ids() const {
    std::vector<std::string> out;
    out.reserve(strategies_.size());
    for (const auto& [id, fn] : strategies_) out.push_back(id);
    return out;
}

SceneCommand StrategyRegistry::decide(const std::string& id, const WindowSnapshot& snapshot,
                                      const SceneState& scene) const {
    auto it = strategies_.find(id);
    if (it == strategies_.end())
        throw Error(Errc::UnknownStrategy, "no strategy registered under id \"" + id + "\"");
    SceneCommand command = it->second(snapshot, scene);
    command.window_index = snapshot.index + 1;
    return command;
}

const StrategyRegistry& StrategyRegistry::builtins() {
    static const StrategyRegistry registry = [] {
        StrategyRegistry r;
        r.add("table1", [](const WindowSnapshot& snapshot, const SceneState& scene) {
            return table1_decide(snapshot.instant_performance.value_or(0.0),
                                 snapshot.attention_level, scene);
        });
        r.add("control-fixed", [](const WindowSnapshot&, const SceneState& scene) {
            return control_decide(scene);
        });
        return r;
    }();
    return registry;
}

SceneCommand decide_for_snapshot(const std::string& strategy_id,
                                 const WindowSnapshot& snapshot, const SceneState& scene,
                                 const StrategyRegistry& registry) {
    return registry.decide(strategy_id, snapshot, scene);
}

std::array<StrategyTableRow, 4> table1_rows() {
    return {{
        {1, "r>=0", "High", "Blue", CommandReason::Row1},
        {2, "r>=0", "Low", "Red", CommandReason::Row2},
        {3, "r<0", "Low", "Red", CommandReason::Row3},
        {4, "r<0", "High", "Maintain", CommandReason::Row4Maintain},
    }};
}

}  // namespace dsa
