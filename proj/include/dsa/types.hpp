// types.hpp — domain types shared by every module of the DSA engine.
//
// All times are session-relative integer milliseconds; there is no
// wall-clock anywhere in the core. Attention values arrive pre-normalized
// to [0,1] from the sensor/client and are never rescaled here.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dsa {

// Scene background color, the world parameter under control.
// Canonical order: Red < Blue (stable across runs, used by serialization).
enum class Color : std::uint8_t { Red = 0, Blue = 1 };

// Binarized user status. Canonical order: High < Low.
enum class AttentionLevel : std::uint8_t { High = 0, Low = 1 };

// Why a command chose its color. Row1..Row4Maintain are the four rows of
// the intervention decision table; ControlFixed marks the control policy.
enum class CommandReason : std::uint8_t {
    Row1 = 0,
    Row2,
    Row3,
    Row4Maintain,
    ControlFixed,
};

const char* to_string(Color c);
const char* to_string(AttentionLevel level);
const char* to_string(CommandReason reason);
std::optional<Color> color_from_string(std::string_view s);
std::optional<AttentionLevel> attention_level_from_string(std::string_view s);
std::optional<CommandReason> command_reason_from_string(std::string_view s);

// Scene parameter currently in force and the window it was last changed in.
struct SceneState {
    Color color = Color::Blue;
    std::int64_t active_since_window = 0;

    bool operator==(const SceneState&) const = default;
};

// One normalized attention reading. value is in [0,1].
struct AttentionSample {
    std::int64_t t_ms = 0;
    double value = 0.0;

    bool operator==(const AttentionSample&) const = default;
};

// One scoring opportunity outcome: points earned out of max_points possible.
struct ScoreEvent {
    std::int64_t t_ms = 0;
    std::int64_t points = 0;
    std::int64_t max_points = 1;

    bool operator==(const ScoreEvent&) const = default;
};

// Per-window aggregate. instant_performance is S_k - S_{k-1}; it is absent
// for the first window (no previous ratio to difference against).
struct WindowSnapshot {
    std::int64_t index = 0;
    double score_ratio = 0.0;
    double mean_attention = 0.0;
    AttentionLevel attention_level = AttentionLevel::High;
    std::optional<double> instant_performance;

    bool operator==(const WindowSnapshot&) const = default;
};

// A scene-parameter change taking effect at window_index (the window after
// the one whose snapshot drove the decision).
struct SceneCommand {
    std::int64_t window_index = 0;
    Color color = Color::Blue;
    CommandReason reason = CommandReason::ControlFixed;

    bool operator==(const SceneCommand&) const = default;
};

// Simulated-user parameters. The drift/mean-reversion forms are minimal:
// red drifts attention upward, blue mean-reverts it toward base_attention,
// fatigue adds a mild downward pull every window. Hit probability is
// linear in attention, clamped to [0,1].
//
// skill_offset/skill_slope are frozen from the calibration run that places
// the control arm's mean session score inside [75,90].
struct UserModelParams {
    double base_attention = 0.5;
    double red_drift = 0.08;
    double red_noise_sd = 0.05;
    double blue_reversion = 0.3;
    double blue_noise_sd = 0.02;
    double fatigue_drift = -0.01;
    double skill_slope = 0.55;
    double skill_offset = 0.55;
    std::int64_t notes_per_window = 4;
    std::int64_t points_per_note = 100;

    bool operator==(const UserModelParams&) const = default;
};

struct SessionConfig {
    std::int64_t window_ms = 2500;
    double attention_threshold = 0.5;
    std::int64_t duration_ms = 60000;
    std::string strategy_id = "table1";
    Color initial_color = Color::Blue;
    std::uint64_t seed = 0;
    UserModelParams user_model;

    bool operator==(const SessionConfig&) const = default;
};

// Whole-session totals. r_star is r_0 plus the sum of instant performances,
// with r_0 defined as the first window's score ratio (so r_star telescopes
// to the final window's ratio).
struct SessionSummary {
    std::int64_t total_points = 0;
    std::int64_t total_max_points = 0;
    double overall_score_ratio = 0.0;
    double r_star = 0.0;
    std::int64_t window_count = 0;

    bool operator==(const SessionSummary&) const = default;
};

// Replayable record of one session: config, the raw event transcript,
// and everything the engine derived from it. Encoding is byte-deterministic.
// rng_family names the generator that produced simulated events; it is
// empty for sessions recorded from external clients.
struct SessionLog {
    SessionConfig config;
    std::string rng_family;
    std::vector<AttentionSample> attention_events;
    std::vector<ScoreEvent> score_events;
    std::vector<WindowSnapshot> snapshots;
    std::vector<SceneCommand> commands;
    SessionSummary summary;

    bool operator==(const SessionLog&) const = default;
};

// One row of a paired experiment: the same seed played under both arms.
struct PairedSample {
    std::uint64_t seed = 0;
    double score_on = 0.0;
    double score_off = 0.0;

    bool operator==(const PairedSample&) const = default;
};

// Paired-statistics report for DSA-on vs DSA-off. SDs are sample standard
// deviations (n-1 denominator). improved_fraction counts strict increases.
struct PairedReport {
    std::int64_t n_pairs = 0;
    double mean_on = 0.0;
    double sd_on = 0.0;
    double mean_off = 0.0;
    double sd_off = 0.0;
    double mean_diff = 0.0;
    double t_stat = 0.0;
    std::int64_t df = 0;
    double improved_fraction = 0.0;
    std::vector<PairedSample> per_pair;

    bool operator==(const PairedReport&) const = default;
};

}  // namespace dsa
