#include "dsa/windowing.hpp"

#include <cassert>

#include "dsa/errors.hpp"

namespace dsa {

std::int64_t assign_window(std::int64_t t_ms, std::int64_t window_ms) {
    assert(window_ms > 0);
    assert(t_ms >= 0);
    return t_ms / window_ms;
}

std::int64_t window_count(std::int64_t duration_ms, std::int64_t window_ms) {
    assert(window_ms > 0);
    return (duration_ms + window_ms - 1) / window_ms;
}

double window_score_ratio(const WindowAccumulator& acc, double prev_ratio) {
    if (acc.max_points_sum > 0)
        return static_cast<double>(acc.points_sum) / static_cast<double>(acc.max_points_sum);
    return prev_ratio;
}

double instant_performance(double s_prev, double s_next) {
    return s_next - s_prev;
}

double window_mean_attention(const WindowAccumulator& acc, double threshold) {
    if (acc.attention_count > 0)
        return acc.attention_sum / static_cast<double>(acc.attention_count);
    return threshold;
}

AttentionLevel classify_attention(const WindowAccumulator& acc, double threshold) {
    return window_mean_attention(acc, threshold) >= threshold ? AttentionLevel::High
                                                              : AttentionLevel::Low;
}

WindowSnapshot finalize_window(const WindowAccumulator& acc, double prev_ratio,
                               bool has_prev, double threshold) {
    WindowSnapshot snapshot;
    snapshot.index = acc.index;
    snapshot.score_ratio = window_score_ratio(acc, prev_ratio);
    snapshot.mean_attention = window_mean_attention(acc, threshold);
    snapshot.attention_level = classify_attention(acc, threshold);
    if (has_prev)
        snapshot.instant_performance = instant_performance(prev_ratio, snapshot.score_ratio);
    return snapshot;
}

namespace {

template <typename Event>
void check_sorted(std::span<const Event> events, const char* what) {
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].t_ms < events[i - 1].t_ms)
            throw Error(Errc::UnsortedInput,
                        std::string(what) + " events are not sorted by t_ms");
    }
}

}  // namespace

std::vector<WindowSnapshot> fold_stream(std::span<const AttentionSample> attention_events,
                                        std::span<const ScoreEvent> score_events,
                                        const SessionConfig& config) {
    check_sorted(attention_events, "attention");
    check_sorted(score_events, "score");

    const std::int64_t windows = window_count(config.duration_ms, config.window_ms);
    std::vector<WindowAccumulator> accs(static_cast<std::size_t>(windows));
    for (std::int64_t k = 0; k < windows; ++k) accs[static_cast<std::size_t>(k)].index = k;

    for (const AttentionSample& s : attention_events) {
        if (s.t_ms >= config.duration_ms) continue;
        accs[static_cast<std::size_t>(assign_window(s.t_ms, config.window_ms))].add(s);
    }
    for (const ScoreEvent& e : score_events) {
        if (e.t_ms >= config.duration_ms) continue;
        accs[static_cast<std::size_t>(assign_window(e.t_ms, config.window_ms))].add(e);
    }

    std::vector<WindowSnapshot> snapshots;
    snapshots.reserve(accs.size());
    double prev_ratio = kFirstWindowDefaultRatio;
    bool has_prev = false;
    for (const WindowAccumulator& acc : accs) {
        WindowSnapshot snapshot =
            finalize_window(acc, prev_ratio, has_prev, config.attention_threshold);
        prev_ratio = snapshot.score_ratio;
        has_prev = true;
        snapshots.push_back(std::move(snapshot));
    }
    return snapshots;
}

}  // namespace dsa
