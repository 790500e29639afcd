// telemetry.hpp — the streaming session protocol, independent of sockets.
//
// Wire grammar: newline-delimited JSON objects, UTF-8. Client sends
// start / attention / score / end; server answers ack / command / summary /
// error. Window closure is event-driven: the first event whose window index
// exceeds the open window closes every intervening window in order and
// emits one snapshot-driven command per closed boundary; end closes the
// rest and emits the summary. No timers, so a session is a pure function
// of its input lines.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsa/codec.hpp"
#include "dsa/strategy.hpp"
#include "dsa/types.hpp"
#include "dsa/windowing.hpp"

namespace dsa {

enum class MessageType : std::uint8_t {
    // client -> server
    Start,
    Attention,
    Score,
    End,
    // server -> client
    Ack,
    Command,
    Summary,
    Error,
};

const char* to_string(MessageType type);

// One protocol line: the tag plus the full tagged object.
struct WireMessage {
    MessageType type;
    codec::Json body;

    std::string encode() const { return body.dump(); }
};

// Parses one line; throws Error(MalformedLine) on bad JSON or unknown type.
WireMessage parse_wire_line(std::string_view line);

WireMessage make_start(const SessionConfig& config, std::string_view rng_family = {});
WireMessage make_attention(const AttentionSample& sample);
WireMessage make_score(const ScoreEvent& event);
WireMessage make_end();
WireMessage make_ack(std::string_view session_id, const SessionConfig& effective);
WireMessage make_command(const SceneCommand& command);
WireMessage make_summary(const SessionSummary& summary);
WireMessage make_error(Errc code, std::string_view detail);

// Protocol state machine for one session. Feed lines (or parsed messages)
// in arrival order; collect the replies to send back. The engine never
// touches a socket, so the same code path serves live connections, replay,
// and tests.
class SessionEngine {
public:
    enum class Phase { AwaitStart, Active, Ended, Aborted };

    explicit SessionEngine(SessionConfig defaults, std::string session_id = "local",
                           const StrategyRegistry& registry = StrategyRegistry::builtins());

    // Parses and handles one raw line. Malformed lines abort the session.
    std::vector<WireMessage> handle_line(std::string_view line);
    std::vector<WireMessage> handle(const WireMessage& message);

    Phase phase() const { return phase_; }
    bool completed() const { return phase_ == Phase::Ended; }
    const std::string& session_id() const { return session_id_; }

    // The session's record so far; fully populated once completed().
    const SessionLog& log() const { return log_; }

private:
    std::vector<WireMessage> abort(Errc code, const std::string& detail);
    void close_windows_through(std::int64_t last_index, std::vector<WireMessage>& out);
    void apply_command(const SceneCommand& command);

    std::string session_id_;
    SessionConfig defaults_;
    const StrategyRegistry& registry_;
    Phase phase_ = Phase::AwaitStart;

    SessionLog log_;
    WindowAccumulator open_window_;
    std::int64_t last_closed_window_ = -1;
    std::int64_t total_windows_ = 0;
    double prev_ratio_ = kFirstWindowDefaultRatio;
    bool have_prev_ratio_ = false;
    SceneState scene_;
};

// Offline counterfactual: feeds recorded events through windowing and the
// named strategy exactly as the live engine would. Events must be sorted
// by t_ms (Error(UnsortedInput) otherwise); events at or beyond
// duration_ms are dropped.
std::vector<SceneCommand> replay(std::span<const AttentionSample> attention_events,
                                 std::span<const ScoreEvent> score_events,
                                 const SessionConfig& config, const std::string& strategy_id,
                                 const StrategyRegistry& registry = StrategyRegistry::builtins());

// Replays a recorded log's transcript under the given strategy (empty id =
// the strategy recorded in the log's config).
std::vector<SceneCommand> replay(const SessionLog& log, const std::string& strategy_id = {});

// Reads a transcript (start + events, optionally a full log file) for
// replaying: returns the config, rng_family, and the recorded events.
struct Transcript {
    SessionConfig config;
    std::string rng_family;
    std::vector<AttentionSample> attention_events;
    std::vector<ScoreEvent> score_events;
};

Transcript decode_transcript_text(std::string_view text);

}  // namespace dsa
