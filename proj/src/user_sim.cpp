#include "dsa/user_sim.hpp"

#include <algorithm>

#include "dsa/errors.hpp"
#include "dsa/evaluation.hpp"
#include "dsa/strategy.hpp"
#include "dsa/validation.hpp"
#include "dsa/windowing.hpp"

namespace dsa {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double attention_step(double a, Color color, const UserModelParams& params, SessionRng& rng) {
    double next;
    if (color == Color::Red) {
        next = a + params.red_drift + params.fatigue_drift + rng.normal(params.red_noise_sd);
    } else {
        next = a + params.blue_reversion * (params.base_attention - a) +
               params.fatigue_drift + rng.normal(params.blue_noise_sd);
    }
    return clamp01(next);
}

double hit_probability(double a, const UserModelParams& params) {
    return clamp01(params.skill_offset + params.skill_slope * a);
}

std::vector<ScoreEvent> gameplay_step(double a, std::int64_t window_index,
                                      std::int64_t window_ms, const UserModelParams& params,
                                      SessionRng& rng) {
    const double p = hit_probability(a, params);
    std::vector<ScoreEvent> events;
    events.reserve(static_cast<std::size_t>(params.notes_per_window));
    for (std::int64_t j = 0; j < params.notes_per_window; ++j) {
        ScoreEvent event;
        event.t_ms = window_index * window_ms + (j * window_ms) / params.notes_per_window;
        event.points = rng.bernoulli(p) ? params.points_per_note : 0;
        event.max_points = params.points_per_note;
        events.push_back(event);
    }
    return events;
}

SessionLog run_session(const SessionConfig& config) {
    require_valid(config);
    const StrategyRegistry& registry = StrategyRegistry::builtins();

    SessionLog log;
    log.config = config;
    log.rng_family = SessionRng::kFamily;

    SessionRng rng(config.seed);
    const std::int64_t windows = window_count(config.duration_ms, config.window_ms);
    const UserModelParams& params = config.user_model;

    double attention = params.base_attention;
    SceneState scene{config.initial_color, 0};
    double prev_ratio = kFirstWindowDefaultRatio;
    bool has_prev = false;

    for (std::int64_t k = 0; k < windows; ++k) {
        // The windowed mean attention equals the model's scalar state: one
        // sample at the window start carries it into the stream.
        AttentionSample sample{k * config.window_ms, attention};
        log.attention_events.push_back(sample);

        WindowAccumulator acc;
        acc.index = k;
        acc.add(sample);
        for (ScoreEvent& event :
             gameplay_step(attention, k, config.window_ms, params, rng)) {
            acc.add(event);
            log.score_events.push_back(event);
        }

        WindowSnapshot snapshot =
            finalize_window(acc, prev_ratio, has_prev, config.attention_threshold);
        prev_ratio = snapshot.score_ratio;
        has_prev = true;

        SceneCommand command =
            decide_for_snapshot(config.strategy_id, snapshot, scene, registry);

        // The attention transition happens under the color that was in
        // force during this window; the command only touches the next one.
        attention = attention_step(attention, scene.color, params, rng);
        if (command.color != scene.color) scene = {command.color, command.window_index};

        log.snapshots.push_back(std::move(snapshot));
        log.commands.push_back(command);
    }

    SessionSummary summary;
    summary.window_count = windows;
    for (const ScoreEvent& event : log.score_events) {
        summary.total_points += event.points;
        summary.total_max_points += event.max_points;
    }
    summary.overall_score_ratio =
        summary.total_max_points > 0
            ? static_cast<double>(summary.total_points) /
                  static_cast<double>(summary.total_max_points)
            : 0.0;
    summary.r_star = r_star_sum(log.snapshots, log.snapshots.front().score_ratio);
    log.summary = summary;
    return log;
}

SessionLog run_session(SessionConfig config, const std::string& strategy_id,
                       std::uint64_t seed) {
    config.strategy_id = strategy_id;
    config.seed = seed;
    return run_session(config);
}

}  // namespace dsa
