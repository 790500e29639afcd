#include "dsa/validation.hpp"

#include <sstream>

#include "dsa/strategy.hpp"

namespace dsa {

std::vector<ConfigIssue> validate_config(const SessionConfig& config) {
    std::vector<ConfigIssue> issues;
    auto add = [&](Errc code, std::string message) {
        issues.push_back({code, std::move(message)});
    };

    if (config.window_ms <= 0) {
        add(Errc::NonPositiveWindow,
            "window_ms must be positive, got " + std::to_string(config.window_ms));
    }
    if (!(config.attention_threshold > 0.0 && config.attention_threshold < 1.0)) {
        add(Errc::ThresholdOutOfRange,
            "attention_threshold must lie in (0,1), got " +
                std::to_string(config.attention_threshold));
    }
    if (config.duration_ms <= 0) {
        add(Errc::DurationShorterThanWindow,
            "duration_ms must be positive, got " + std::to_string(config.duration_ms));
    } else if (config.window_ms > 0 && config.duration_ms < config.window_ms) {
        add(Errc::DurationShorterThanWindow,
            "duration_ms (" + std::to_string(config.duration_ms) +
                ") must be at least one window (" + std::to_string(config.window_ms) + ")");
    }
    if (!StrategyRegistry::builtins().contains(config.strategy_id)) {
        add(Errc::UnknownStrategy, "no strategy registered under id \"" +
                                       config.strategy_id + "\"");
    }

    const UserModelParams& m = config.user_model;
    if (m.red_noise_sd < 0.0 || m.blue_noise_sd < 0.0) {
        add(Errc::InvalidUserModel, "noise standard deviations must be non-negative");
    }
    if (m.blue_reversion < 0.0 || m.blue_reversion > 1.0) {
        add(Errc::InvalidUserModel, "blue_reversion must lie in [0,1], got " +
                                        std::to_string(m.blue_reversion));
    }
    if (m.base_attention < 0.0 || m.base_attention > 1.0) {
        add(Errc::InvalidUserModel, "base_attention must lie in [0,1], got " +
                                        std::to_string(m.base_attention));
    }
    if (m.notes_per_window < 1) {
        add(Errc::InvalidUserModel, "notes_per_window must be at least 1, got " +
                                        std::to_string(m.notes_per_window));
    }
    if (m.points_per_note < 1) {
        add(Errc::InvalidUserModel, "points_per_note must be positive, got " +
                                        std::to_string(m.points_per_note));
    }
    return issues;
}

const SessionConfig& require_valid(const SessionConfig& config) {
    const auto issues = validate_config(config);
    if (issues.empty()) return config;
    std::ostringstream joined;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i > 0) joined << "; ";
        joined << to_string(issues[i].code) << " (" << issues[i].message << ")";
    }
    throw Error(Errc::InvalidConfig, joined.str());
}

}  // namespace dsa
