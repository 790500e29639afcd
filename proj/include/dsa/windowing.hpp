// windowing.hpp — tumbling-window aggregation of attention/score streams.
//
// Windows are left-closed right-open [k*W, (k+1)*W) and never overlap.
// All functions are pure; safe to call concurrently.

#pragma once

#include <span>
#include <vector>

#include "dsa/types.hpp"

namespace dsa {

// Running sums for one window while it is open.
struct WindowAccumulator {
    std::int64_t index = 0;
    std::int64_t points_sum = 0;
    std::int64_t max_points_sum = 0;
    double attention_sum = 0.0;
    std::int64_t attention_count = 0;

    void add(const AttentionSample& sample) {
        attention_sum += sample.value;
        ++attention_count;
    }
    void add(const ScoreEvent& event) {
        points_sum += event.points;
        max_points_sum += event.max_points;
    }
};

// A window that never saw a score event reports this ratio when there is
// no previous window to carry forward ("no mistakes yet").
inline constexpr double kFirstWindowDefaultRatio = 1.0;

// floor(t_ms / window_ms). Requires window_ms > 0.
std::int64_t assign_window(std::int64_t t_ms, std::int64_t window_ms);

// ceil(duration_ms / window_ms): number of windows in a session.
std::int64_t window_count(std::int64_t duration_ms, std::int64_t window_ms);

// points/max when the window saw score events, else prev_ratio.
double window_score_ratio(const WindowAccumulator& acc, double prev_ratio);

// Instant performance r = s_next - s_prev.
double instant_performance(double s_prev, double s_next);

// Windowed mean of attention samples; a window with no samples counts as
// exactly the threshold (degenerate case classifies High).
double window_mean_attention(const WindowAccumulator& acc, double threshold);

// High iff windowed mean >= threshold (ties resolve High).
AttentionLevel classify_attention(const WindowAccumulator& acc, double threshold);

// Builds the snapshot for one closed window given the previous ratio.
// The first window (no previous) passes kFirstWindowDefaultRatio and gets
// no instant_performance.
WindowSnapshot finalize_window(const WindowAccumulator& acc, double prev_ratio,
                               bool has_prev, double threshold);

// Partitions sorted event streams into exactly
// window_count(duration_ms, window_ms) snapshots. Events must be sorted by
// t_ms (throws Error(Errc::UnsortedInput) otherwise); events at or beyond
// duration_ms are dropped. Snapshot k aggregates exactly the events whose
// assign_window(t) == k.
std::vector<WindowSnapshot> fold_stream(std::span<const AttentionSample> attention_events,
                                        std::span<const ScoreEvent> score_events,
                                        const SessionConfig& config);

}  // namespace dsa
